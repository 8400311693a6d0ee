#include "caputo/cumulative.hpp"

#include <chrono>
#include <cmath>

namespace caputo {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

MethodOutput midpoint_derivative(const SampleSeries& f, FractionalOrder alpha) {
  const auto& grid = f.grid();
  const int C = f.channels();
  const double a = alpha.value();
  const double inv_gamma = 1.0 / gamma_fn(1.0 - a);

  MethodOutput out{SampleSeries(grid, C)};
  const auto t0 = Clock::now();

  // Weight for history offset j = n - i: ((j + 1/2) dt)^-a.  Precomputed once;
  // each output step reuses the prefix.
  std::vector<double> w(grid.steps);
  for (int j = 0; j < grid.steps; ++j)
    w[j] = std::pow((j + 0.5) * grid.dt, -a);

  for (int n = 1; n <= grid.steps; ++n) {
    double* dst = out.series.row(n);
    for (int i = 1; i <= n; ++i) {
      const double wi = w[n - i];
      const double* fi = f.row(i);
      const double* fim1 = f.row(i - 1);
      for (int c = 0; c < C; ++c) dst[c] += wi * (fi[c] - fim1[c]);
    }
    for (int c = 0; c < C; ++c) dst[c] *= inv_gamma;
    out.ops += static_cast<std::uint64_t>(n) * C;
  }
  out.seconds = elapsed(t0);
  return out;
}

MethodOutput grunwald_letnikov(const SampleSeries& f, FractionalOrder alpha) {
  const auto& grid = f.grid();
  const int C = f.channels();
  const double a = alpha.value();
  const double inv_gamma = 1.0 / gamma_fn(1.0 - a);
  const double dt_pow = std::pow(grid.dt, -a);

  MethodOutput out{SampleSeries(grid, C)};
  const auto t0 = Clock::now();

  // Binomial coefficients by the stated recursion, computed once per call.
  std::vector<double> c(grid.steps + 1, 0.0);
  if (grid.steps >= 1) c[1] = a;
  for (int m = 2; m <= grid.steps; ++m)
    c[m] = c[m - 1] * (1.0 - (a + 1.0) / m);

  for (int n = 1; n <= grid.steps; ++n) {
    double* dst = out.series.row(n);
    for (int ch = 0; ch < C; ++ch) dst[ch] = f.value(n, ch);
    for (int m = 1; m <= n; ++m) {
      const double cm = c[m];
      const double* fv = f.row(n - m);
      for (int ch = 0; ch < C; ++ch) dst[ch] -= cm * fv[ch];
    }
    const double corr = std::pow(grid.time(n), -a) * inv_gamma;
    for (int ch = 0; ch < C; ++ch)
      dst[ch] = dt_pow * dst[ch] - corr * f.value(0, ch);
    out.ops += static_cast<std::uint64_t>(n) * C;
  }
  out.seconds = elapsed(t0);
  return out;
}

double diethelm_weight(int m, int n, double alpha) {
  const double p = 1.0 - alpha;
  if (m == 0) return 1.0;
  if (m == n)
    return (1.0 - alpha) * std::pow(n, -alpha) - std::pow(n, p) +
           std::pow(n - 1, p);
  return std::pow(m + 1, p) - 2.0 * std::pow(m, p) + std::pow(m - 1, p);
}

MethodOutput diethelm_trapezoidal(const SampleSeries& f, FractionalOrder alpha,
                                  const std::vector<double>& f0_derivs) {
  const auto& grid = f.grid();
  const int C = f.channels();
  if (static_cast<int>(f0_derivs.size()) != C)
    throw std::invalid_argument(
        "diethelm_trapezoidal: f0_derivs length must equal the channel count");
  const double a = alpha.value();
  const double scale = std::pow(grid.dt, -a) / gamma_fn(2.0 - a);

  MethodOutput out{SampleSeries(grid, C)};
  const auto t0 = Clock::now();

  // Interior weights depend on m only; the m = n boundary weight is applied
  // separately inside the loop.
  std::vector<double> interior(grid.steps + 1, 0.0);
  const double p = 1.0 - a;
  for (int m = 1; m <= grid.steps; ++m)
    interior[m] = std::pow(m + 1, p) - 2.0 * std::pow(m, p) + std::pow(m - 1, p);

  for (int n = 1; n <= grid.steps; ++n) {
    double* dst = out.series.row(n);
    // m = 0 term: weight 1 on g_n = f_n - f(0).
    for (int ch = 0; ch < C; ++ch) dst[ch] = f.value(n, ch) - f0_derivs[ch];
    for (int m = 1; m < n; ++m) {
      const double wm = interior[m];
      const double* fv = f.row(n - m);
      for (int ch = 0; ch < C; ++ch) dst[ch] += wm * (fv[ch] - f0_derivs[ch]);
    }
    if (n >= 1) {
      const double wn = diethelm_weight(n, n, a);
      for (int ch = 0; ch < C; ++ch)
        dst[ch] += wn * (f.value(0, ch) - f0_derivs[ch]);
    }
    for (int ch = 0; ch < C; ++ch) dst[ch] *= scale;
    out.ops += static_cast<std::uint64_t>(n + 1) * C;
  }
  out.seconds = elapsed(t0);
  return out;
}

MethodOutput gao_weights_derivative(const SampleSeries& f, FractionalOrder alpha) {
  const auto& grid = f.grid();
  const int C = f.channels();
  const double a = alpha.value();
  const double scale = std::pow(grid.dt, -a) / gamma_fn(2.0 - a);

  MethodOutput out{SampleSeries(grid, C)};
  const auto t0 = Clock::now();

  // a_i = (i+1)^(1-a) - i^(1-a), a_0 = 1.
  const double p = 1.0 - a;
  std::vector<double> aw(grid.steps + 1);
  for (int i = 0; i <= grid.steps; ++i)
    aw[i] = std::pow(i + 1, p) - std::pow(i, p);

  for (int n = 1; n <= grid.steps; ++n) {
    double* dst = out.series.row(n);
    for (int ch = 0; ch < C; ++ch) dst[ch] = f.value(n, ch);  // a_0 = 1
    for (int i = 1; i <= n - 1; ++i) {
      const double w = aw[n - i - 1] - aw[n - i];
      const double* fv = f.row(i);
      for (int ch = 0; ch < C; ++ch) dst[ch] -= w * fv[ch];
    }
    const double w0 = aw[n - 1];
    for (int ch = 0; ch < C; ++ch)
      dst[ch] = scale * (dst[ch] - w0 * f.value(0, ch));
    out.ops += static_cast<std::uint64_t>(n) * C;
  }
  out.seconds = elapsed(t0);
  return out;
}

}  // namespace caputo
