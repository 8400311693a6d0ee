#ifndef CAPUTO_CUMULATIVE_HPP
#define CAPUTO_CUMULATIVE_HPP

#include <cstdint>

#include "caputo/core.hpp"

namespace caputo {

// Result of a history-summing discretization: one approximation value per
// grid point per channel, plus instrumentation for the cost comparisons.
struct MethodOutput {
  SampleSeries series;
  double seconds = 0.0;   // monotonic wall time of the kernel loop
  std::uint64_t ops = 0;  // kernel multiply-add count (machine independent)
};

// Midpoint rule: D_n = (1/Gamma(1-a)) sum_i (f_i - f_(i-1)) / ((n-i+1/2) dt)^a.
// Value at t_0 is 0 by convention.
MethodOutput midpoint_derivative(const SampleSeries& f, FractionalOrder alpha);

// Grunwald-Letnikov with the correction matching the Caputo derivative:
//   D_n = dt^-a [ f_n - sum_m C_m f_(n-m) ] - t_n^-a f_0 / Gamma(1-a),
//   C_m = C_(m-1) (1 - (a+1)/m), C_1 = a.
// The n = 0 value is singular and left at 0; consumers report from n >= 1.
MethodOutput grunwald_letnikov(const SampleSeries& f, FractionalOrder alpha);

// Diethelm trapezoidal weights a_(m,n) applied to f - f(0).  f0_derivs
// supplies the initial values per channel (only the zeroth-order term enters
// for 0 < alpha < 1); its length must equal the channel count.
MethodOutput diethelm_trapezoidal(const SampleSeries& f, FractionalOrder alpha,
                                  const std::vector<double>& f0_derivs);

// Diethelm weight a_(m,n); exposed for the telescoping identity tests.
double diethelm_weight(int m, int n, double alpha);

// Gao (L1-type) weights a_i = (i+1)^(1-a) - i^(1-a):
//   D_n = dt^-a/Gamma(2-a) [ a_0 f_n - sum_i (a_(n-i-1) - a_(n-i)) f_i
//                            - a_(n-1) f_0 ].
MethodOutput gao_weights_derivative(const SampleSeries& f, FractionalOrder alpha);

}  // namespace caputo

#endif
