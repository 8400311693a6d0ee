#include "caputo/core.hpp"

#include <cmath>
#include <numbers>

namespace caputo {

SampleSeries::SampleSeries(UniformGrid grid, int channels)
    : grid_(grid), channels_(channels) {
  if (channels < 1)
    throw std::invalid_argument("SampleSeries: channels must be >= 1");
  values_.assign(static_cast<std::size_t>(grid_.points()) * channels_, 0.0);
}

SampleSeries SampleSeries::sample(const UniformGrid& grid,
                                  const std::function<double(double)>& fn) {
  SampleSeries s(grid, 1);
  for (int n = 0; n <= grid.steps; ++n) s.value(n) = fn(grid.time(n));
  s.check_finite();
  return s;
}

void SampleSeries::check_finite() const {
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("SampleSeries: non-finite sample value");
}

double Polynomial::eval(double t) const {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs.size() == 1) return Polynomial({0.0});
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    d[k - 1] = coeffs[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

double caputo_power_rule(double m, FractionalOrder alpha, double t) {
  if (m < 0.0) throw std::invalid_argument("caputo_power_rule: m must be >= 0");
  if (t < 0.0) throw std::invalid_argument("caputo_power_rule: t must be >= 0");
  if (m == 0.0) return 0.0;  // constants are annihilated
  const double a = alpha.value();
  return gamma_fn(m + 1.0) / gamma_fn(m + 1.0 - a) * std::pow(t, m - a);
}

double caputo_polynomial(const Polynomial& p, FractionalOrder alpha, double t) {
  if (t < 0.0) throw std::invalid_argument("caputo_polynomial: t must be >= 0");
  double acc = 0.0;
  for (std::size_t k = 2; k <= p.coeffs.size(); ++k) {
    const double b = p.coeffs[k - 1];
    if (b != 0.0) acc += b * caputo_power_rule(static_cast<double>(k - 1), alpha, t);
  }
  return acc;
}

namespace {

// Product rule on one mesh: f' interpolated linearly between samples, the
// kernel (t-s)^-a integrated exactly against that interpolant.  With
// z = t - s the piece over [s_i, s_{i+1}] (z in [zr, zl], zl > zr) is
//   int (a0 + a1 (zl - z)) z^-a dz
//     = a0 (zl^(1-a) - zr^(1-a))/(1-a)
//       + a1 [ zl (zl^(1-a) - zr^(1-a))/(1-a) - (zl^(2-a) - zr^(2-a))/(2-a) ].
double graded_product_rule(const std::function<double(double)>& fprime,
                           double a, double t, int n, double grading) {
  std::vector<double> z(n + 1), fp(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double frac = static_cast<double>(n - i) / n;
    z[i] = t * std::pow(frac, grading);  // z decreasing, z[n] = 0 (s = t)
    fp[i] = fprime(t - z[i]);
  }
  double acc = 0.0;
  const double p1 = 1.0 - a, p2 = 2.0 - a;
  for (int i = 0; i < n; ++i) {
    const double zl = z[i], zr = z[i + 1];
    const double dz = zl - zr;
    if (dz <= 0.0) continue;
    const double a0 = fp[i];                       // value at z = zl
    const double a1 = (fp[i + 1] - fp[i]) / dz;    // slope toward z = zr
    const double m1 = (std::pow(zl, p1) - std::pow(zr, p1)) / p1;
    const double m2 = (std::pow(zl, p2) - std::pow(zr, p2)) / p2;
    acc += a0 * m1 + a1 * (zl * m1 - m2);
  }
  return acc / gamma_fn(1.0 - a);
}

}  // namespace

double caputo_quadrature_oracle(const std::function<double(double)>& fprime,
                                FractionalOrder alpha, double t, double tol) {
  if (t < 0.0)
    throw std::invalid_argument("caputo_quadrature_oracle: t must be >= 0");
  if (!(tol > 0.0))
    throw std::invalid_argument("caputo_quadrature_oracle: tol must be > 0");
  if (t == 0.0) return 0.0;

  const double a = alpha.value();
  const double grading = std::max(2.0, 3.0 / (1.0 - a));
  constexpr int kMaxPoints = 1 << 21;

  int n = 64;
  double coarse = graded_product_rule(fprime, a, t, n, grading);
  while (n <= kMaxPoints) {
    const double fine = graded_product_rule(fprime, a, t, 2 * n, grading);
    if (std::abs(fine - coarse) <= 0.5 * tol) return fine;
    coarse = fine;
    n *= 2;
  }
  throw std::runtime_error(
      "caputo_quadrature_oracle: did not converge within the evaluation budget");
}

std::complex<double> fourier_symbol(FractionalOrder alpha, double omega) {
  if (!(omega > 0.0))
    throw std::invalid_argument("fourier_symbol: omega must be > 0");
  const double a = alpha.value();
  const double mod = std::pow(omega, a);
  const double phase = 0.5 * std::numbers::pi * a;
  return {mod * std::cos(phase), mod * std::sin(phase)};
}

}  // namespace caputo
