#ifndef CAPUTO_MATH_HPP
#define CAPUTO_MATH_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace caputo {

// Gamma function via the Lanczos approximation (g = 7, 9 coefficients).
// Relative error below 1e-13 over the range used by the fractional-derivative
// weights (roughly [0.05, 12]).
double gamma_fn(double x);

// Fritsch-Carlson monotone cubic interpolation through (xs, ys).
// xs must be strictly increasing with at least two points; queries outside
// [xs.front(), xs.back()] throw.
double interp_monotone_cubic(const std::vector<double>& xs,
                             const std::vector<double>& ys, double x);

// Composite trapezoid of uniformly sampled values with spacing dt.
double trapezoid(const std::vector<double>& values, double dt);

// sqrt(trapezoid of v^2): the discrete L2 norm used for error curves.
double l2_norm_trapezoid(const std::vector<double>& values, double dt);

}  // namespace caputo

#endif
