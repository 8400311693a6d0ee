// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are pinned here, next to each check.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "caputo/csv.hpp"
#include "caputo/cumulative.hpp"
#include "caputo/fde.hpp"
#include "caputo/mechanics.hpp"
#include "caputo/optimizer.hpp"
#include "caputo/stability.hpp"
#include "caputo/studies.hpp"
#include "../support/test_functions.hpp"

using namespace caputo;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  g_notes.push_back(buf);
}

bool expect(bool ok, const char* fmt, ...) {
  if (!ok) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    g_notes.push_back(std::string("FAILED check: ") + buf);
  }
  return ok;
}

void report(int id, const char* name, bool pass, double seconds) {
  std::printf("%s  criterion %2d: %-58s (%.1f s)\n", pass ? "PASS" : "FAIL", id,
              name, seconds);
  for (const auto& n : g_notes) std::printf("      - %s\n", n.c_str());
  g_notes.clear();
  if (!pass) ++g_failures;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// Shared fitted parameters (own optimizer output, s = 10 on the study
// horizon unless noted).
SeriesProvider& provider() {
  static SeriesProvider p;
  return p;
}

double l2_between(const std::vector<double>& a, const std::vector<double>& b,
                  std::size_t begin = 1) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = begin; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

// ---------------------------------------------------------------------------
// Criterion 1: exact identities.
bool criterion1() {
  bool ok = true;
  const double c = 3.7;
  const FractionalOrder a(0.4);
  SampleSeries f =
      SampleSeries::sample(UniformGrid(0.01, 64), [&](double) { return c; });
  for (const auto& out : {midpoint_derivative(f, a), gao_weights_derivative(f, a),
                          diethelm_trapezoidal(f, a, {c})}) {
    for (int n = 0; n <= 64; ++n)
      ok &= expect(std::abs(out.series.value(n)) <= 1e-12 * c,
                   "cumulative constant annihilation at n=%d", n);
  }

  PronySeries s = provider().get(0.4, 6, 0.9, 10.0);
  PronyState st(s, 1, 0.01);
  st.seed(std::span<const double>(&c, 1));
  double out = 0.0;
  for (int n = 0; n < 64; ++n) {
    st.advance(std::span<const double>(&c, 1), std::span<double>(&out, 1));
    ok &= expect(std::abs(out) <= 1e-12 * c, "prony constant annihilation");
  }

  ok &= expect(truncation_error(s, 0.0) == -s.beta0, "eps(0) == -beta0");

  PronyState st2(s, 1, 0.01);
  const double f0 = 1.25;
  st2.seed(std::span<const double>(&f0, 1));
  const double delta = 0.375;
  const double f1 = f0 + delta;
  st2.advance(std::span<const double>(&f1, 1), std::span<double>(&out, 1));
  const double gamma = consolidated_gamma(s, 0.01);
  ok &= expect(std::abs(out - gamma * delta) <= 1e-12 * std::abs(gamma * delta),
               "single increment equals gamma*delta");
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 2: all five engines against the t^2 power rule.
bool criterion2() {
  bool ok = true;
  for (double alpha : {0.1, 0.4, 0.8}) {
    const FractionalOrder a(alpha);
    auto exact = [&](double t) { return caputo_power_rule(2.0, a, t); };

    auto engine_error = [&](const std::string& method, int steps) {
      const UniformGrid grid(1.0 / steps, steps);
      SampleSeries fs =
          SampleSeries::sample(grid, [](double t) { return t * t; });
      MethodOutput out = method == "mp"   ? midpoint_derivative(fs, a)
                         : method == "gl" ? grunwald_letnikov(fs, a)
                         : method == "diethelm"
                             ? diethelm_trapezoidal(fs, a, {0.0})
                             : gao_weights_derivative(fs, a);
      std::vector<double> diff;
      for (int n = method == "gl" ? 1 : 0; n <= steps; ++n)
        diff.push_back(out.series.value(n) - exact(grid.time(n)));
      return l2_norm_trapezoid(diff, grid.dt);
    };

    for (const std::string m : {"mp", "gl", "diethelm", "gao"}) {
      const double coarse = engine_error(m, 64);
      const double fine = engine_error(m, 1024);
      ok &= expect(fine < coarse, "%s error decreases (alpha=%.1f)", m.c_str(),
                   alpha);
      ok &= expect(fine < 0.05, "%s fine error small (alpha=%.1f, err=%.2e)",
                   m.c_str(), alpha, fine);
    }

    // Prony: converge, then plateau at the truncation-error prediction.
    const PronySeries s = provider().get(alpha, 9, 1.0, 10.0);
    auto prony_error = [&](int steps) {
      const UniformGrid grid(1.0 / steps, steps);
      PronyState st(s, 1, grid.dt);
      const double f0 = 0.0;
      st.seed(std::span<const double>(&f0, 1));
      std::vector<double> diff(steps + 1, 0.0);
      double v;
      for (int n = 1; n <= steps; ++n) {
        const double t = grid.time(n);
        const double fn = t * t;
        st.advance(std::span<const double>(&fn, 1), std::span<double>(&v, 1));
        diff[n] = v - exact(t);
      }
      return l2_norm_trapezoid(diff, grid.dt);
    };
    ok &= expect(prony_error(1024) < prony_error(64),
                 "prony error decreases (alpha=%.1f)", alpha);

    // Exact plateau predictor from the error representation:
    // err(t) -> f'(0) eps(t) + int_0^t eps(z) f''(t-z) dz = 2 int_0^t eps.
    const TruncationProfile prof = truncation_norms(s, 1.0, 8000);
    std::vector<double> pred(prof.z.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < prof.z.size(); ++i) {
      acc += 0.5 * (prof.eps[i] + prof.eps[i - 1]) * (prof.z[i] - prof.z[i - 1]);
      pred[i] = 2.0 * acc;
    }
    const double pred_l2 = l2_norm_trapezoid(pred, prof.z[1]);
    const double plateau = prony_error(16384);
    const double ratio = plateau / pred_l2;
    note("alpha=%.1f plateau=%.3e prediction=%.3e ratio=%.2f", alpha, plateau,
         pred_l2, ratio);
    ok &= expect(ratio >= 0.5 && ratio <= 2.0,
                 "plateau within 2x of own prediction (alpha=%.1f)", alpha);
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 3: the polynomial study table.
bool criterion3() {
  // Published cells: dt rows {1e-1, 1e-2, 1e-3, 1e-4} per alpha.
  const std::map<double, std::array<double, 4>> mp_ref = {
      {0.1, {1.84e0, 2.64e-1, 2.76e-2, 2.81e-3}},
      {0.4, {4.12e0, 9.12e-1, 1.43e-1, 2.53e-2}},
      {0.8, {1.13e1, 6.42e0, 3.54e0, 2.16e0}}};
  const std::map<double, std::array<double, 4>> gl_ref = {
      {0.1, {5.24e-1, 2.86e-2, 6.64e-3, 2.35e-3}},
      {0.4, {1.80e0, 2.36e-1, 9.34e-2, 6.46e-2}},
      {0.8, {8.46e0, 1.84e0, 5.66e-1, 6.11e-1}}};
  // Prony columns, N in {3, 6, 9, 12} by dt row; final row is the dt = 0
  // truncation norm.
  const std::map<double, std::array<std::array<double, 4>, 5>> prony_ref = {
      {0.1,
       {{{5.07e-1, 5.14e-1, 5.14e-1, 5.14e-1},
         {4.96e-2, 1.37e-2, 1.49e-2, 1.56e-2},
         {5.04e-2, 2.76e-3, 4.45e-4, 3.81e-4},
         {5.04e-2, 2.74e-3, 3.03e-4, 4.47e-5},
         {5.04e-2, 2.75e-3, 3.14e-4, 6.71e-5}}}},
      {0.4,
       {{{1.95e0, 1.91e0, 1.91e0, 1.92e0},
         {2.88e-1, 2.25e-1, 2.48e-1, 2.58e-1},
         {2.21e-1, 1.38e-2, 1.08e-2, 1.35e-2},
         {2.21e-1, 1.14e-2, 2.04e-3, 9.88e-4},
         {2.21e-1, 1.18e-2, 2.92e-3, 1.69e-3}}}},
      {0.8,
       {{{8.14e0, 8.37e0, 8.42e0, 8.47e0},
         {2.27e0, 2.79e0, 2.92e0, 3.06e0},
         {7.41e-1, 3.52e-1, 3.86e-1, 4.71e-1},
         {6.75e-1, 6.67e-2, 6.50e-2, 6.62e-2},
         {6.75e-1, 4.98e-2, 3.64e-2, 2.87e-2}}}}};

  bool ok = true;
  const std::vector<double> dts = {1e-1, 1e-2, 1e-3, 1e-4};
  const std::vector<int> terms = {3, 6, 9, 12};
  for (double alpha : {0.1, 0.4, 0.8}) {
    for (std::size_t di = 0; di < dts.size(); ++di) {
      const double mp = poly_method_error("mp", alpha, dts[di], 0.9);
      const double gl = poly_method_error("gl", alpha, dts[di], 0.9);
      const double mp_want = mp_ref.at(alpha)[di];
      const double gl_want = gl_ref.at(alpha)[di];
      ok &= expect(mp >= 0.5 * mp_want && mp <= 2.0 * mp_want,
                   "MP cell alpha=%.1f dt=%.0e: %.3e vs %.3e", alpha, dts[di],
                   mp, mp_want);
      ok &= expect(gl >= 0.5 * gl_want && gl <= 2.0 * gl_want,
                   "GL cell alpha=%.1f dt=%.0e: %.3e vs %.3e", alpha, dts[di],
                   gl, gl_want);
    }

    for (std::size_t ni = 0; ni < terms.size(); ++ni) {
      const PronySeries s = provider().get(alpha, terms[ni], 0.9, 10.0);
      std::array<double, 5> col{};
      for (std::size_t di = 0; di < dts.size(); ++di)
        col[di] = poly_prony_error(s, alpha, dts[di], 0.9);
      col[4] = truncation_norms(s, 0.9, 4000).eps_l2;
      for (std::size_t di = 0; di < 5; ++di) {
        const double want = prony_ref.at(alpha)[di][ni];
        ok &= expect(col[di] <= 10.0 * want,
                     "prony cell alpha=%.1f N=%d row=%zu: %.3e vs %.3e within "
                     "an order of magnitude",
                     alpha, terms[ni], di, col[di], want);
      }
      if (terms[ni] == 3) {
        // Truncation floor: refining from 1e-3 to 1e-4 gains little.
        ok &= expect(col[3] >= 0.33 * col[2],
                     "N=3 plateau alpha=%.1f (%.3e -> %.3e)", alpha, col[2],
                     col[3]);
      } else {
        ok &= expect(col[3] < 0.5 * col[1],
                     "N=%d continued convergence alpha=%.1f (%.3e -> %.3e)",
                     terms[ni], alpha, col[1], col[3]);
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 4: Theorem-1 bound soundness on the closed-form corpus.
bool criterion4() {
  using testing::SmoothFunction;
  std::vector<SmoothFunction> corpus = {
      testing::make_polynomial("t^2", {0.0, 0.0, 1.0}),
      testing::make_polynomial("t^3", {0.0, 0.0, 0.0, 1.0}),
      testing::make_polynomial("mixed-quintic",
                               {0.3, 1.0, -0.7, 0.4, -0.2, 0.05}),
      testing::make_damped_sinusoid("sin-fast", 1.0, 1.0, 3.0, 0.0),
      testing::make_damped_sinusoid("sin-offset", 2.0, 0.5, 5.0, 0.3),
  };
  const double T = 1.0;
  bool ok = true;
  int tested = 0;

  // Exact-derivative cache: the oracle depends only on (function, alpha, t).
  std::map<std::tuple<int, double, double>, double> exact_cache;
  for (double alpha : {0.1, 0.4, 0.8}) {
    const FractionalOrder a(alpha);
    for (int fi = 0; fi < static_cast<int>(corpus.size()); ++fi) {
      const SmoothFunction& fn = corpus[fi];
      const bool is_poly = fi <= 2;
      const std::vector<double> poly_coeffs[3] = {
          {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0, 1.0}, {0.3, 1.0, -0.7, 0.4, -0.2, 0.05}};

      const double fprime0 = std::abs(fn.fprime0);
      const double f2_l1 = testing::l1_norm(fn.d2, T);
      const double w3inf = testing::w3inf_norm(fn, T);

      for (int N : {3, 6, 9}) {
        const PronySeries s = provider().get(alpha, N, T, 10.0);
        const TruncationProfile prof = truncation_norms(s, T, 4000);
        const ErrorBound bound(s, prof.eps_inf);
        for (double dt : {1e-2, 1e-3}) {
          const int steps = static_cast<int>(std::llround(T / dt));
          PronyState st(s, 1, dt);
          const double f0 = fn.f(0.0);
          st.seed(std::span<const double>(&f0, 1));
          double worst = 0.0;
          double v = 0.0;
          const int check_every = steps / 16;
          for (int n = 1; n <= steps; ++n) {
            const double t = n * dt;
            const double val = fn.f(t);
            st.advance(std::span<const double>(&val, 1), std::span<double>(&v, 1));
            if (n % check_every != 0 && n != steps) continue;
            double exact;
            if (is_poly) {
              exact = caputo_polynomial(
                  Polynomial(std::vector<double>(poly_coeffs[fi])), a, t);
            } else {
              const auto key = std::make_tuple(fi, alpha, t);
              auto it = exact_cache.find(key);
              if (it == exact_cache.end())
                it = exact_cache
                         .emplace(key, caputo_quadrature_oracle(fn.d1, a, t, 1e-9))
                         .first;
              exact = it->second;
            }
            worst = std::max(worst, std::abs(v - exact));
          }
          const double budget = bound(dt, fprime0, f2_l1, w3inf) + 2e-9;
          ++tested;
          ok &= expect(worst <= budget,
                       "bound %s alpha=%.1f N=%d dt=%.0e: err %.3e <= %.3e",
                       fn.name.c_str(), alpha, N, dt, worst, budget);
        }
      }
    }
  }
  note("%d (function, alpha, N, dt) points, 100%% required", tested);
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 5: temporal Gao table.
bool criterion5() {
  const std::vector<int> nts = {10, 20, 40, 80, 160, 320};
  const std::map<double, std::array<double, 6>> gao_ref = {
      {0.5, {8.48e-4, 3.19e-4, 1.17e-4, 4.26e-5, 1.53e-5, 5.49e-6}},
      {2.0 / 3.0, {1.91e-3, 7.96e-4, 3.25e-4, 1.31e-4, 5.26e-5, 2.10e-5}}};
  const std::map<double, std::array<double, 5>> gao_rate_ref = {
      {0.5, {1.41, 1.44, 1.46, 1.47, 1.48}},
      {2.0 / 3.0, {1.26, 1.29, 1.31, 1.32, 1.32}}};
  const std::map<double, std::array<std::array<double, 6>, 4>> prony_ref = {
      {0.5,
       {{{2.13e-3, 6.94e-4, 2.39e-4, 1.17e-4, 8.60e-5, 7.82e-5},
         {3.33e-3, 1.39e-3, 4.17e-4, 1.09e-4, 2.67e-5, 5.79e-6},
         {3.73e-3, 1.91e-3, 6.64e-4, 1.83e-4, 4.64e-5, 1.10e-5},
         {3.96e-3, 2.36e-3, 9.94e-4, 3.00e-4, 7.92e-5, 2.00e-5}}}},
      {2.0 / 3.0,
       {{{4.52e-3, 1.58e-3, 5.04e-4, 2.04e-4, 1.26e-4, 1.07e-4},
         {6.78e-3, 3.42e-3, 1.14e-3, 3.07e-4, 7.28e-5, 1.26e-5},
         {7.40e-3, 4.51e-3, 1.82e-3, 5.28e-4, 1.31e-4, 2.64e-5},
         {7.88e-3, 5.33e-3, 2.67e-3, 8.85e-4, 2.35e-4, 5.36e-5}}}}};

  bool ok = true;
  const std::vector<int> terms = {3, 6, 9, 12};
  for (double alpha : {0.5, 2.0 / 3.0}) {
    const ConvergenceTable gao =
        convergence_study(StudyAxis::time, "gao", alpha, nullptr, nts, 20000);
    for (std::size_t i = 0; i < nts.size(); ++i) {
      const double want = gao_ref.at(alpha)[i];
      ok &= expect(std::abs(gao.rows[i].error - want) <= 0.2 * want,
                   "gao cell alpha=%.3f nt=%d: %.3e vs %.3e (20%%)", alpha,
                   nts[i], gao.rows[i].error, want);
      if (i + 1 < nts.size())
        ok &= expect(
            std::abs(gao.rows[i].rate - gao_rate_ref.at(alpha)[i]) <= 0.15,
            "gao rate alpha=%.3f nt=%d: %.2f vs %.2f", alpha, nts[i],
            gao.rows[i].rate, gao_rate_ref.at(alpha)[i]);
    }

    std::map<int, double> coarse_error;
    for (std::size_t ni = 0; ni < terms.size(); ++ni) {
      const PronySeries s = provider().get(alpha, terms[ni], 1.0, 100.0);
      const ConvergenceTable t =
          convergence_study(StudyAxis::time, "prony", alpha, &s, nts, 20000);
      coarse_error[terms[ni]] = t.rows[0].error;
      for (std::size_t i = 0; i < nts.size(); ++i) {
        const double want = prony_ref.at(alpha)[ni][i];
        ok &= expect(t.rows[i].error <= 10.0 * want,
                     "prony cell alpha=%.3f N=%d nt=%d: %.3e vs %.3e", alpha,
                     terms[ni], nts[i], t.rows[i].error, want);
      }
      if (terms[ni] >= 6) {
        const double last_rate = t.rows[nts.size() - 2].rate;
        ok &= expect(last_rate > 1.6 && last_rate < 2.7,
                     "prony temporal rate settles near 2 (alpha=%.3f N=%d: %.2f)",
                     alpha, terms[ni], last_rate);
      }
    }
    // Documented large-dt degradation with increasing N.
    ok &= expect(coarse_error[12] > coarse_error[6],
                 "coarse-dt error grows with N (alpha=%.3f)", alpha);
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 6: spatial Gao table.
bool criterion6() {
  bool ok = true;
  const std::vector<int> nxs = {10, 20, 40, 80, 160};
  for (double alpha : {0.5, 2.0 / 3.0}) {
    // Short-mode Gao grid: temporal error at nt=320 sits far below every
    // tabulated spatial error.
    const ConvergenceTable gao =
        convergence_study(StudyAxis::space, "gao", alpha, nullptr,
                          {10, 20, 40, 80}, 320);
    for (std::size_t i = 0; i + 1 < gao.rows.size(); ++i)
      ok &= expect(std::abs(gao.rows[i].rate - 2.0) <= 0.3,
                   "gao spatial rate alpha=%.3f h=1/%d: %.2f", alpha,
                   nxs[i], gao.rows[i].rate);

    for (int N : {3, 6, 9, 12}) {
      const PronySeries s = provider().get(alpha, N, 1.0, 100.0);
      const ConvergenceTable t =
          convergence_study(StudyAxis::space, "prony", alpha, &s, nxs, 20000);
      for (std::size_t i = 0; i + 2 < t.rows.size(); ++i)
        ok &= expect(std::abs(t.rows[i].rate - 2.0) <= 0.3,
                     "prony spatial rate alpha=%.3f N=%d h=1/%d: %.2f", alpha,
                     N, nxs[i], t.rows[i].rate);
      const double floor_rate = t.rows[3].rate;  // h = 1/80 -> 1/160
      if (N == 3) {
        ok &= expect(floor_rate < 1.0,
                     "N=3 error floor visible at h=1/160 (alpha=%.3f rate %.2f)",
                     alpha, floor_rate);
      } else {
        ok &= expect(floor_rate > 1.2,
                     "N=%d still converging at h=1/160 (alpha=%.3f rate %.2f)",
                     N, alpha, floor_rate);
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 7: Lemma 3 stability sweep.
bool criterion7() {
  StabilitySweepConfig cfg;
  cfg.trials = 100;
  cfg.seed = 42;
  cfg.stiff_probe = true;
  const StabilitySweep sweep = run_stability_sweep(cfg);
  note("worst margin over all trials: %.3e",
       [&] {
         double w = std::numeric_limits<double>::infinity();
         for (const auto& r : sweep.rows) w = std::min(w, r.margin);
         return w;
       }());
  return expect(sweep.violations == 0, "violations=%d over %d trials",
                sweep.violations, cfg.trials);
}

// ---------------------------------------------------------------------------
// Criterion 8: liver benchmark.
bool criterion8() {
  bool ok = true;
  const LiverModel model;

  // (a) kinematics.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  double worstJ = 0.0, worstF = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double rho = model.radius * std::sqrt(ur(rng));
    const double phi = 2.0 * std::numbers::pi * ur(rng);
    const Vec3 X = {rho * std::cos(phi), rho * std::sin(phi),
                    model.height * ur(rng)};
    const double t = 2.0 * ur(rng);
    const KinematicState kin = deformation(X, t, model);
    worstJ = std::max(worstJ, std::abs(kin.J - 1.0));
    const double h = 1e-6 * model.radius;
    for (int j = 0; j < 3; ++j) {
      Vec3 Xp = X, Xm = X;
      Xp[j] += h;
      Xm[j] -= h;
      const Vec3 xp = deformed_position(Xp, t, model);
      const Vec3 xm = deformed_position(Xm, t, model);
      for (int i = 0; i < 3; ++i)
        worstF = std::max(
            worstF, std::abs((xp[i] - xm[i]) / (2.0 * h) - kin.F(i, j)));
    }
  }
  note("max |J-1| = %.2e, max |F - F_fd| = %.2e", worstJ, worstF);
  ok &= expect(worstJ <= 1e-12, "isochoric to 1e-12");
  ok &= expect(worstF <= 1e-6, "analytic gradient matches central differences");

  // (b) stress accuracy against the cached GL reference.
  const PronySeries s9 = provider().get(model.alpha, 9, 2.0, 10.0);
  const UniformGrid coarse(1e-3, 2000);
  const Vec3 edge = {model.radius, 0.0, model.height};

  const std::string cache_path = "liver_ref_gl_dt1e-5.csv";
  std::vector<double> ref13, ref_torque;
  if (std::filesystem::exists(cache_path)) {
    const ParsedCsv cached = read_csv(cache_path);
    for (const auto& row : cached.rows) {
      ref13.push_back(std::stod(row[1]));
      ref_torque.push_back(std::stod(row[3]));
    }
    note("GL reference loaded from %s", cache_path.c_str());
  }
  if (ref13.size() != 2001) {
    ref13.clear();
    ref_torque.clear();
    const UniformGrid fine(1e-5, 200000);
    const StressHistory point =
        stress_history(edge, model, StressEngine::gl, fine, nullptr, 100);
    const TractionHistory trac =
        torque_and_normal(model, StressEngine::gl, fine, 8, nullptr, 100);
    CsvTable csv({"t", "sigma13", "sigma23", "torque", "normal_force"});
    csv.comment("engine=gl dt=1.00000e-05 alpha=2.00000e-01");
    for (std::size_t i = 0; i < point.times.size(); ++i) {
      csv.add_row({CsvTable::cell(point.times[i]),
                   CsvTable::cell(point.sigma[i][4]),
                   CsvTable::cell(point.sigma[i][5]),
                   CsvTable::cell(trac.torque[i]),
                   CsvTable::cell(trac.normal_force[i])});
      ref13.push_back(point.sigma[i][4]);
      ref_torque.push_back(trac.torque[i]);
    }
    csv.write(cache_path);
    note("GL reference computed and cached to %s", cache_path.c_str());
  }

  const StressHistory prony =
      stress_history(edge, model, StressEngine::prony, coarse, &s9);
  std::vector<double> p13;
  for (const auto& sig : prony.sigma) p13.push_back(sig[4]);
  const double rel13 = l2_between(p13, ref13);
  note("sigma13 relative L2 error: %.3e %% (paper: 1.30e-2 %%)", 100.0 * rel13);
  ok &= expect(100.0 * rel13 <= 1e-1, "(1,3) Cauchy error <= 1e-1 %%");

  // (c) torque agreement between engines.
  const TractionHistory ptrac =
      torque_and_normal(model, StressEngine::prony, coarse, 8, &s9);
  // Compare over the shear phase only (both traces are zero on the ramp).
  std::size_t begin = 0;
  while (begin < ptrac.times.size() && ptrac.times[begin] <= 1.0) ++begin;
  double num = 0.0, den = 0.0;
  for (std::size_t i = begin; i < ptrac.times.size(); ++i) {
    num += (ptrac.torque[i] - ref_torque[i]) * (ptrac.torque[i] - ref_torque[i]);
    den += ref_torque[i] * ref_torque[i];
  }
  const double rel_torque = std::sqrt(num / den);
  note("torque relative L2 error: %.3e (paper: ~1e-3)", rel_torque);
  ok &= expect(rel_torque <= 2e-3, "torque agreement between engines");
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 9: complexity accounting.
bool criterion9() {
  bool ok = true;
  const FractionalOrder a(0.4);

  auto cumulative_ops = [&](int steps) {
    SampleSeries f = SampleSeries::sample(UniformGrid(1.0 / steps, steps),
                                          [](double t) { return t; });
    return std::pair{midpoint_derivative(f, a).ops, grunwald_letnikov(f, a).ops};
  };
  const auto [mp1, gl1] = cumulative_ops(1000);
  const auto [mp2, gl2] = cumulative_ops(2000);
  const double mp_ratio = double(mp2) / mp1, gl_ratio = double(gl2) / gl1;
  note("ops ratios: mp %.2f, gl %.2f", mp_ratio, gl_ratio);
  ok &= expect(mp_ratio >= 3.6 && mp_ratio <= 4.4, "mp quadratic work");
  ok &= expect(gl_ratio >= 3.6 && gl_ratio <= 4.4, "gl quadratic work");

  const PronySeries s = provider().get(0.4, 6, 0.9, 10.0);
  auto prony_ops = [&](int steps) {
    PronyState st(s, 1, 0.9 / steps);
    const double f0 = 0.0;
    st.seed(std::span<const double>(&f0, 1));
    double v;
    for (int n = 1; n <= steps; ++n) {
      const double fn = double(n) / steps;
      st.advance(std::span<const double>(&fn, 1), std::span<double>(&v, 1));
    }
    return std::pair{st.ops(), st.state_bytes()};
  };
  const auto [pops1, pbytes1] = prony_ops(1000);
  const auto [pops2, pbytes2] = prony_ops(2000);
  const double p_ratio = double(pops2) / pops1;
  note("prony ops ratio %.2f", p_ratio);
  ok &= expect(p_ratio >= 1.8 && p_ratio <= 2.2, "prony linear work");

  // Fixed storage across a 100x step-count gap (10^4 vs 10^6 advances).
  const auto [pops3, pbytes3] = prony_ops(10000);
  const auto [pops4, pbytes4] = prony_ops(1000000);
  (void)pops3;
  (void)pops4;
  ok &= expect(pbytes3 == pbytes4, "state bytes constant across step counts");

  // Table-1 qualitative wall-time gap at dt = 1e-5 on the polynomial study.
  SeriesProvider& prov = provider();
  const auto rows = bench_poly({1e-5}, {3}, 0.4, prov);
  double mp_secs = 0.0, prony_secs = 0.0;
  for (const auto& r : rows) {
    if (r.method == "mp") mp_secs = r.seconds;
    if (r.method == "prony") prony_secs = r.seconds;
  }
  note("wall: mp %.2f s vs prony %.4f s (ratio %.0fx)", mp_secs, prony_secs,
       mp_secs / prony_secs);
  ok &= expect(mp_secs >= 50.0 * prony_secs, "midpoint at least 50x slower");
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 10: optimizer soundness over the shipped table.
bool criterion10() {
  bool ok = true;

  std::vector<double> alphas;
  for (double a = 0.05; a < 0.951; a += 0.05) alphas.push_back(a);
  const ParameterTable table = ParameterTable::build(alphas, 3, 12, 10.0);

  double worst_spec = 0.0;
  for (double a : alphas) {
    for (int N = 6; N <= 12; ++N) {
      // Normalized cells probed with w* = 1 over the central band.
      const PronySeries s = materialize(table.lookup(a, N), 1.0, 2.0 * std::numbers::pi);
      const double err = spectral_error(s, 2.0, 0.5 * 100.0 * N);
      worst_spec = std::max(worst_spec, err);
      ok &= expect(err <= 0.10, "spectral soundness alpha=%.2f N=%d: %.3f", a,
                   N, err);
    }
  }
  note("worst central-band spectral error over shipped cells: %.4f", worst_spec);

  // Residual monotone in N at fixed M.
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double prev = 1e300;
    for (int N : {3, 6, 9, 12}) {
      FitConfig cfg;
      cfg.alpha = a;
      cfg.n_terms = N;
      cfg.n_modes = 1500;
      const double rms = optimize(cfg).residual_rms;
      ok &= expect(rms <= prev * (1.0 + 1e-9),
                   "residual monotone alpha=%.1f N=%d (%.3e after %.3e)", a, N,
                   rms, prev);
      prev = rms;
    }
  }

  // Determinism.
  FitConfig cfg;
  cfg.alpha = 0.37;
  cfg.n_terms = 8;
  const FitReport r1 = optimize(cfg);
  const FitReport r2 = optimize(cfg);
  ok &= expect(r1.series.to_json() == r2.series.to_json() &&
                   r1.residual_rms == r2.residual_rms,
               "bit-identical reruns");

  // Lossless JSON round trip of the whole table.
  const std::string text = table.to_json();
  ok &= expect(ParameterTable::from_json(text).to_json() == text,
               "table json round trip");
  return ok;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<bool()> fn;
  };
  const std::vector<Entry> criteria = {
      {1, "constant annihilation & exact identities", criterion1},
      {2, "five-engine oracle agreement on t^2", criterion2},
      {3, "polynomial study table reproduction", criterion3},
      {4, "Theorem-1 bound soundness on the corpus", criterion4},
      {5, "fractional diffusion temporal table", criterion5},
      {6, "fractional diffusion spatial table", criterion6},
      {7, "energy-inequality sweep", criterion7},
      {8, "liver rheometer benchmark", criterion8},
      {9, "complexity accounting", criterion9},
      {10, "optimizer spectral soundness & determinism", criterion10},
  };
  for (const Entry& c : criteria) {
    Timer timer;
    bool pass = false;
    try {
      pass = c.fn();
    } catch (const std::exception& err) {
      note("exception: %s", err.what());
    }
    report(c.id, c.name, pass, timer.seconds());
  }
  std::printf("%s: %d of %zu criteria failed\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures, criteria.size());
  return g_failures == 0 ? 0 : 1;
}
