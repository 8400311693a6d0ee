#ifndef CAPUTO_CORE_HPP
#define CAPUTO_CORE_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "caputo/math.hpp"

namespace caputo {

// Fractional derivative order, restricted to 0 < alpha < 1.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("FractionalOrder: alpha must lie in (0, 1)");
  }
  double value() const { return alpha_; }

 private:
  double alpha_;
};

// Uniform time grid t_n = n * dt, n = 0..steps.
struct UniformGrid {
  double dt = 0.0;
  int steps = 0;

  UniformGrid() = default;
  UniformGrid(double dt_, int steps_) : dt(dt_), steps(steps_) {
    if (!(dt > 0.0) || steps < 1)
      throw std::invalid_argument("UniformGrid: need dt > 0 and steps >= 1");
  }
  double time(int n) const { return n * dt; }
  double horizon() const { return steps * dt; }
  int points() const { return steps + 1; }
};

// Uniformly sampled function values, (steps+1) rows x channels columns.
// Row 0 holds the initial values f(0).
class SampleSeries {
 public:
  SampleSeries(UniformGrid grid, int channels);
  // Single-channel convenience: sample fn at every grid time.
  static SampleSeries sample(const UniformGrid& grid,
                             const std::function<double(double)>& fn);

  const UniformGrid& grid() const { return grid_; }
  int channels() const { return channels_; }
  int points() const { return grid_.points(); }

  double value(int n, int c = 0) const { return values_[idx(n, c)]; }
  double& value(int n, int c = 0) { return values_[idx(n, c)]; }
  const double* row(int n) const { return values_.data() + idx(n, 0); }
  double* row(int n) { return values_.data() + idx(n, 0); }
  const std::vector<double>& values() const { return values_; }

  // Throws if any stored value is not finite.
  void check_finite() const;

 private:
  std::size_t idx(int n, int c) const {
    return static_cast<std::size_t>(n) * channels_ + c;
  }
  UniformGrid grid_;
  int channels_;
  std::vector<double> values_;
};

// p(t) = sum_k b_k t^(k-1); coeffs[k-1] = b_k.
struct Polynomial {
  std::vector<double> coeffs;

  explicit Polynomial(std::vector<double> b) : coeffs(std::move(b)) {
    if (coeffs.empty())
      throw std::invalid_argument("Polynomial: needs at least one coefficient");
  }
  double eval(double t) const;
  Polynomial derivative() const;
};

// Exact Caputo derivative of t^m:  D^a t^m = Gamma(m+1)/Gamma(m+1-a) t^(m-a),
// with the m = 0 constant case mapping to 0.
double caputo_power_rule(double m, FractionalOrder alpha, double t);

// Linear combination of power rules over the polynomial's terms.
double caputo_polynomial(const Polynomial& p, FractionalOrder alpha, double t);

// Brute-force quadrature of D^a f = (1/Gamma(1-a)) int_0^t f'(s) (t-s)^-a ds.
// Product-trapezoid on a mesh graded toward the weakly singular endpoint,
// refined until the doubling estimate meets tol.  Test oracle only; throws
// std::runtime_error when the evaluation budget is exhausted.
double caputo_quadrature_oracle(const std::function<double(double)>& fprime,
                                FractionalOrder alpha, double t, double tol);

// (i w)^a = w^a (cos(pi a / 2) + i sin(pi a / 2)), w > 0.
std::complex<double> fourier_symbol(FractionalOrder alpha, double omega);

}  // namespace caputo

#endif
