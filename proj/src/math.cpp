#include "caputo/math.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace caputo {

double gamma_fn(double x) {
  // Lanczos, g = 7.  Reflection handles x < 0.5.
  static constexpr double kCoeff[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,    12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double pi = std::numbers::pi;
  if (std::isnan(x)) return x;
  if (x < 0.5) {
    const double s = std::sin(pi * x);
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    return pi / (s * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  double acc = kCoeff[0];
  for (int i = 1; i < 9; ++i) acc += kCoeff[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double interp_monotone_cubic(const std::vector<double>& xs,
                             const std::vector<double>& ys, double x) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n)
    throw std::invalid_argument("interp_monotone_cubic: need >= 2 matching knots");
  if (x < xs.front() || x > xs.back())
    throw std::out_of_range("interp_monotone_cubic: query outside knot range");

  // Interval slopes.
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs[i + 1] - xs[i];
    if (h[i] <= 0.0)
      throw std::invalid_argument("interp_monotone_cubic: knots must increase");
    delta[i] = (ys[i + 1] - ys[i]) / h[i];
  }

  // Fritsch-Carlson tangents.
  std::vector<double> m(n);
  m.front() = delta.front();
  m.back() = delta.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      m[i] = 0.0;
      m[i + 1] = 0.0;
      continue;
    }
    const double a = m[i] / delta[i];
    const double b = m[i + 1] / delta[i];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double s = 3.0 / std::sqrt(r);
      m[i] = s * a * delta[i];
      m[i + 1] = s * b * delta[i];
    }
  }

  std::size_t i = 0;
  while (i + 2 < n && x > xs[i + 1]) ++i;
  const double t = (x - xs[i]) / h[i];
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * ys[i] + h10 * h[i] * m[i] + h01 * ys[i + 1] + h11 * h[i] * m[i + 1];
}

double trapezoid(const std::vector<double>& values, double dt) {
  if (values.size() < 2) return 0.0;
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc * dt;
}

double l2_norm_trapezoid(const std::vector<double>& values, double dt) {
  if (values.size() < 2) return 0.0;
  double acc = 0.5 * (values.front() * values.front() +
                      values.back() * values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    acc += values[i] * values[i];
  return std::sqrt(acc * dt);
}

}  // namespace caputo
