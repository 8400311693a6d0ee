#include "caputo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "json.hpp"

namespace caputo {

PronySeries from_json_object(const nlohmann::json& j);  // prony.cpp

namespace {

constexpr double kPi = std::numbers::pi;

// Mode list for the solver: every harmonic up to 2000, log-uniform
// subsampling above that (the constraint set is massively redundant there).
std::vector<double> solver_modes(int M) {
  std::vector<double> k;
  if (M <= 2000) {
    k.resize(M);
    std::iota(k.begin(), k.end(), 1.0);
    return k;
  }
  constexpr int kSub = 256;
  k.reserve(kSub);
  double last = 0.0;
  for (int i = 0; i < kSub; ++i) {
    const double v =
        std::round(std::exp(std::log(static_cast<double>(M)) * i / (kSub - 1)));
    if (v > last) {
      k.push_back(v);
      last = v;
    }
  }
  return k;
}

struct Residuals {
  std::vector<double> r;  // 2K, interleaved (real, imag)
  double cost = 0.0;      // 0.5 sum r^2
};

// Residuals and (optionally) the Jacobian in log-parameter space,
// x = (log bhat0, log bhat_1..N, log that_1..N).
Residuals eval_residuals(double alpha, const std::vector<double>& modes,
                         const std::vector<double>& x,
                         std::vector<double>* jac /* 2K x P, row-major */) {
  const int N = (static_cast<int>(x.size()) - 1) / 2;
  const int P = 2 * N + 1;
  const int K = static_cast<int>(modes.size());
  const double ca = std::cos(0.5 * kPi * alpha);
  const double sa = std::sin(0.5 * kPi * alpha);

  const double b0 = std::exp(x[0]);
  std::vector<double> b(N), t(N);
  for (int m = 0; m < N; ++m) {
    b[m] = std::exp(x[1 + m]);
    t[m] = std::exp(x[1 + N + m]);
  }

  Residuals out;
  out.r.assign(2 * static_cast<std::size_t>(K), 0.0);
  if (jac) jac->assign(out.r.size() * P, 0.0);

  for (int i = 0; i < K; ++i) {
    const double k = modes[i];
    const double ka = std::pow(k, alpha);
    double sr = 0.0, si = 0.0;
    double* jr = jac ? jac->data() + static_cast<std::size_t>(2 * i) * P : nullptr;
    double* ji = jac ? jr + P : nullptr;
    for (int m = 0; m < N; ++m) {
      const double kt = k * t[m];
      const double den = kt * kt + 1.0;
      const double fr = kt * kt / den;
      const double fi = kt / den;
      sr += b[m] * fr;
      si += b[m] * fi;
      if (jac) {
        jr[1 + m] = b[m] * fr / ka;
        ji[1 + m] = b[m] * fi / ka;
        jr[1 + N + m] = b[m] * 2.0 * kt * kt / (den * den) / ka;
        ji[1 + N + m] = b[m] * kt * (1.0 - kt * kt) / (den * den) / ka;
      }
    }
    const double k1a = std::pow(k, 1.0 - alpha);
    out.r[2 * i] = sr / ka - ca;
    out.r[2 * i + 1] = b0 * k1a + si / ka - sa;
    if (jac) ji[0] = b0 * k1a;
  }
  for (double v : out.r) out.cost += 0.5 * v * v;
  return out;
}

struct Bounds {
  double lo_beta, hi_beta, lo_tau, hi_tau;
  double clamp(int idx, int n_terms, double v) const {
    if (idx == 0 || idx <= n_terms) return std::clamp(v, lo_beta, hi_beta);
    return std::clamp(v, lo_tau, hi_tau);
  }
};

// Dense Cholesky solve of the SPD system A x = rhs (A row-major, size n).
bool cholesky_solve(std::vector<double>& A, std::vector<double>& rhs, int n) {
  for (int j = 0; j < n; ++j) {
    double d = A[j * n + j];
    for (int k = 0; k < j; ++k) d -= A[j * n + k] * A[j * n + k];
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    A[j * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = A[i * n + j];
      for (int k = 0; k < j; ++k) s -= A[i * n + k] * A[j * n + k];
      A[i * n + j] = s / ljj;
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = rhs[i];
    for (int k = 0; k < i; ++k) s -= A[i * n + k] * rhs[k];
    rhs[i] = s / A[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int k = i + 1; k < n; ++k) s -= A[k * n + i] * rhs[k];
    rhs[i] = s / A[i * n + i];
  }
  return true;
}

// The residuals are linear in (bhat0, bhat) for frozen that: one exact
// least-squares pass over those N + 1 weights.  Nonpositive solutions are
// clipped to a small positive fraction of the largest weight so the damped
// iteration can still move them.
void solve_linear_weights(double alpha, const std::vector<double>& modes,
                          const std::vector<double>& tau_hat, double& b0,
                          std::vector<double>& beta_hat) {
  const int N = static_cast<int>(tau_hat.size());
  const int Q = N + 1;  // column 0: bhat0
  const double ca = std::cos(0.5 * kPi * alpha);
  const double sa = std::sin(0.5 * kPi * alpha);
  std::vector<double> ata(static_cast<std::size_t>(Q) * Q, 0.0);
  std::vector<double> atb(Q, 0.0);
  std::vector<double> row(Q);
  for (double k : modes) {
    const double ka = std::pow(k, alpha);
    // Real-part row (no dashpot contribution).
    row[0] = 0.0;
    for (int m = 0; m < N; ++m) {
      const double kt = k * tau_hat[m];
      row[1 + m] = kt * kt / (kt * kt + 1.0) / ka;
    }
    for (int i = 0; i < Q; ++i) {
      for (int j = 0; j <= i; ++j) ata[i * Q + j] += row[i] * row[j];
      atb[i] += row[i] * ca;
    }
    // Imaginary-part row.
    row[0] = std::pow(k, 1.0 - alpha);
    for (int m = 0; m < N; ++m) {
      const double kt = k * tau_hat[m];
      row[1 + m] = kt / (kt * kt + 1.0) / ka;
    }
    for (int i = 0; i < Q; ++i) {
      for (int j = 0; j <= i; ++j) ata[i * Q + j] += row[i] * row[j];
      atb[i] += row[i] * sa;
    }
  }
  for (int i = 0; i < Q; ++i)
    for (int j = i + 1; j < Q; ++j) ata[i * Q + j] = ata[j * Q + i];
  double trace = 0.0;
  for (int i = 0; i < Q; ++i) trace += ata[i * Q + i];
  for (int i = 0; i < Q; ++i) ata[i * Q + i] += 1e-13 * trace;
  if (!cholesky_solve(ata, atb, Q)) std::fill(atb.begin(), atb.end(), 1.0);

  double cap = 0.0;
  for (int i = 0; i < Q; ++i) cap = std::max(cap, atb[i]);
  const double floor = std::max(cap, 1e-6) * 1e-3;
  b0 = std::max(atb[0], floor * 1e-3);
  beta_hat.assign(N, 0.0);
  for (int m = 0; m < N; ++m) beta_hat[m] = std::max(atb[1 + m], floor);
}

struct LmRun {
  std::vector<double> x;
  Residuals res;
  int iterations = 0;
};

// Levenberg-style damped Gauss-Newton on the stacked residuals, with a
// periodic exact re-solve of the linear weight subspace (the model is linear
// in bhat0 and bhat for frozen that).
LmRun run_lm(double alpha, const std::vector<double>& modes,
             std::vector<double> x, int max_iterations, const Bounds& bounds) {
  const int P = static_cast<int>(x.size());
  const int N = (P - 1) / 2;
  const int K = static_cast<int>(modes.size());

  std::vector<double> jac;
  Residuals cur = eval_residuals(alpha, modes, x, &jac);

  auto resolve_weights = [&](std::vector<double>& xv, Residuals& res) {
    std::vector<double> tau(N);
    for (int m = 0; m < N; ++m) tau[m] = std::exp(xv[1 + N + m]);
    double b0;
    std::vector<double> beta;
    solve_linear_weights(alpha, modes, tau, b0, beta);
    std::vector<double> xt = xv;
    xt[0] = bounds.clamp(0, N, std::log(b0));
    for (int m = 0; m < N; ++m)
      xt[1 + m] = bounds.clamp(1 + m, N, std::log(beta[m]));
    Residuals next = eval_residuals(alpha, modes, xt, nullptr);
    if (next.cost < res.cost) {
      xv = std::move(xt);
      res = eval_residuals(alpha, modes, xv, &jac);
      return true;
    }
    return false;
  };
  resolve_weights(x, cur);

  double lambda = 1e-3;
  int iters = 0;
  double window_cost = cur.cost;
  std::vector<double> h(static_cast<std::size_t>(P) * P), g(P), hs, gs, xt(P);
  for (; iters < max_iterations; ++iters) {
    std::fill(h.begin(), h.end(), 0.0);
    std::fill(g.begin(), g.end(), 0.0);
    for (int r = 0; r < 2 * K; ++r) {
      const double* jr = jac.data() + static_cast<std::size_t>(r) * P;
      const double rv = cur.r[r];
      for (int i = 0; i < P; ++i) {
        g[i] += jr[i] * rv;
        for (int j = 0; j <= i; ++j) h[i * P + j] += jr[i] * jr[j];
      }
    }
    for (int i = 0; i < P; ++i)
      for (int j = i + 1; j < P; ++j) h[i * P + j] = h[j * P + i];

    bool accepted = false;
    double step_inf = 0.0;
    for (int trial = 0; trial < 40 && !accepted; ++trial) {
      hs = h;
      gs = g;
      for (int i = 0; i < P; ++i)
        hs[i * P + i] += lambda * std::max(h[i * P + i], 1e-12);
      if (!cholesky_solve(hs, gs, P)) {
        lambda *= 10.0;
        continue;
      }
      step_inf = 0.0;
      for (int i = 0; i < P; ++i) {
        xt[i] = bounds.clamp(i, N, x[i] - gs[i]);
        step_inf = std::max(step_inf, std::abs(xt[i] - x[i]));
      }
      Residuals next = eval_residuals(alpha, modes, xt, nullptr);
      if (next.cost < cur.cost) {
        x = xt;
        cur = eval_residuals(alpha, modes, x, &jac);
        lambda = std::max(lambda / 3.0, 1e-14);
        accepted = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted || step_inf < 1e-13) break;
    if ((iters + 1) % 20 == 0) {
      resolve_weights(x, cur);
      // Stagnation window: stop once 20 iterations move the cost by < 1e-12.
      if (window_cost - cur.cost < 1e-12 * std::max(cur.cost, 1e-300)) {
        ++iters;
        break;
      }
      window_cost = cur.cost;
    }
  }
  return {std::move(x), std::move(cur), iters};
}

// Re-seed modes that collapsed onto the lower weight bound into the widest
// gaps of the surviving relaxation spectrum.
bool revive_collapsed(std::vector<double>& x, int N) {
  double max_lb = -1e300;
  for (int m = 0; m < N; ++m) max_lb = std::max(max_lb, x[1 + m]);
  std::vector<int> dead, alive;
  for (int m = 0; m < N; ++m)
    (x[1 + m] < max_lb - 18.0 ? dead : alive).push_back(m);
  if (dead.empty() || alive.size() < 2) return false;

  for (int d : dead) {
    std::vector<double> taus;
    for (int m : alive) taus.push_back(x[1 + N + m]);
    std::sort(taus.begin(), taus.end());
    double best_lo = taus[0], best_gap = 0.0;
    for (std::size_t i = 0; i + 1 < taus.size(); ++i)
      if (taus[i + 1] - taus[i] > best_gap) {
        best_gap = taus[i + 1] - taus[i];
        best_lo = taus[i];
      }
    x[1 + N + d] = best_lo + 0.5 * best_gap;
    x[1 + d] = max_lb - 3.0;
    alive.push_back(d);
  }
  return true;
}

}  // namespace

void FitConfig::validate() const {
  FractionalOrder check(alpha);
  if (n_terms < 3 || n_terms > 15)
    throw std::invalid_argument("FitConfig: n_terms must lie in [3, 15]");
  if (modes() < 10 * n_terms)
    throw std::invalid_argument("FitConfig: need n_modes >= 10 * n_terms");
  if (!(scale >= 1.0))
    throw std::invalid_argument("FitConfig: scale must be >= 1");
  if (!(t_problem > 0.0))
    throw std::invalid_argument("FitConfig: t_problem must be > 0");
  if (max_iterations < 1 || !(tolerance > 0.0))
    throw std::invalid_argument("FitConfig: bad solver settings");
}

double FitConfig::omega_star() const { return 2.0 * kPi / (scale * t_problem); }

std::vector<double> assemble_constraints(const FitConfig& cfg, double bhat0,
                                         const std::vector<double>& beta_hat,
                                         const std::vector<double>& tau_hat) {
  if (beta_hat.size() != tau_hat.size())
    throw std::invalid_argument("assemble_constraints: beta/tau size mismatch");
  const int N = static_cast<int>(beta_hat.size());
  std::vector<double> x(2 * static_cast<std::size_t>(N) + 1);
  x[0] = std::log(bhat0);
  for (int m = 0; m < N; ++m) {
    x[1 + m] = std::log(beta_hat[m]);
    x[1 + N + m] = std::log(tau_hat[m]);
  }
  std::vector<double> modes(cfg.modes());
  std::iota(modes.begin(), modes.end(), 1.0);
  return eval_residuals(cfg.alpha, modes, x, nullptr).r;
}

FitReport optimize(const FitConfig& cfg) {
  cfg.validate();
  const int N = cfg.n_terms;
  const int M = cfg.modes();
  const int P = 2 * N + 1;
  const std::vector<double> modes = solver_modes(M);
  const int K = static_cast<int>(modes.size());

  // Initialization: log-spaced time constants across the harmonic band,
  // weights from one exact linear least-squares pass.  A dashpot seeded from
  // the k = M imaginary constraint backs the linear pass up if it degenerates.
  std::vector<double> tau0(N);
  for (int m = 0; m < N; ++m)
    tau0[m] = std::exp(std::log(1.0 / M) * (1.0 - static_cast<double>(m) / (N - 1)));
  double b0_init;
  std::vector<double> beta_init;
  solve_linear_weights(cfg.alpha, modes, tau0, b0_init, beta_init);
  if (!(b0_init > 0.0) || !std::isfinite(b0_init))
    b0_init = std::sin(0.5 * kPi * cfg.alpha) *
              std::pow(static_cast<double>(M), cfg.alpha - 1.0);

  std::vector<double> x(P);
  x[0] = std::log(b0_init);
  for (int m = 0; m < N; ++m) {
    x[1 + m] = std::log(beta_init[m]);
    x[1 + N + m] = std::log(tau0[m]);
  }

  // Weight bounds keep every mode strictly positive; the time constants stay
  // within a generous halo of the fitted band so e_k = exp(-dt/(2 tau_k))
  // never degenerates to 0 or 1.
  const Bounds bounds{-30.0, 30.0, std::log(1.0 / (50.0 * M)), std::log(50.0)};

  LmRun best = run_lm(cfg.alpha, modes, x, cfg.max_iterations, bounds);
  int iters = best.iterations;

  // Collapsed modes signal a local minimum of the over-parameterized model;
  // re-seed them inside the surviving spectrum and re-run.
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> xr = best.x;
    if (!revive_collapsed(xr, N)) break;
    LmRun retry = run_lm(cfg.alpha, modes, xr, cfg.max_iterations, bounds);
    iters += retry.iterations;
    if (retry.res.cost < best.res.cost) best = std::move(retry);
  }
  x = best.x;
  const Residuals& cur = best.res;

  // Assemble the result, modes sorted by time constant.
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return x[1 + N + a] < x[1 + N + b];
  });

  FitReport report;
  PronySeries hat;
  hat.alpha = cfg.alpha;
  hat.omega_star = cfg.omega_star();
  hat.scale = cfg.scale;
  hat.normalized = true;
  hat.beta0 = std::exp(x[0]);
  hat.beta.resize(N);
  hat.tau.resize(N);
  for (int m = 0; m < N; ++m) {
    hat.beta[m] = std::exp(x[1 + order[m]]);
    hat.tau[m] = std::exp(x[1 + N + order[m]]);
  }
  report.series = hat.denormalized();
  report.series.validate();
  report.residual_rms = std::sqrt(2.0 * cur.cost / (2.0 * K));
  report.iterations = iters;
  const double w_star = cfg.omega_star();
  report.spectral_error =
      spectral_error(report.series, 2.0 * w_star, 0.5 * M * w_star);
  report.converged = report.residual_rms <= cfg.tolerance;
  return report;
}

PronySeries rescale_timescale(double alpha, int n_terms, double t_problem,
                              double s) {
  FitConfig cfg;
  cfg.alpha = alpha;
  cfg.n_terms = n_terms;
  cfg.scale = s;
  cfg.t_problem = t_problem;
  return optimize(cfg).series;
}

std::complex<double> prony_transfer(const PronySeries& series, double omega) {
  if (!(omega > 0.0))
    throw std::invalid_argument("prony_transfer: omega must be > 0");
  const PronySeries s = series.denormalized();
  std::complex<double> h(0.0, s.beta0 * omega);
  for (std::size_t k = 0; k < s.beta.size(); ++k) {
    const double tw = s.tau[k] * omega;
    h += s.beta[k] * tw * std::complex<double>(tw, 1.0) / (tw * tw + 1.0);
  }
  return h;
}

double spectral_error(const PronySeries& series, double omega_lo,
                      double omega_hi, int n_sweep) {
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
    throw std::invalid_argument("spectral_error: bad sweep band");
  const PronySeries s = series.denormalized();
  const FractionalOrder a(s.alpha);
  double worst = 0.0;
  for (int i = 0; i < n_sweep; ++i) {
    const double w = omega_lo * std::pow(omega_hi / omega_lo,
                                         static_cast<double>(i) / (n_sweep - 1));
    const std::complex<double> diff = prony_transfer(s, w) - fourier_symbol(a, w);
    worst = std::max(worst, std::abs(diff) / std::pow(w, s.alpha));
  }
  return worst;
}

PronySeries materialize(const PronySeries& normalized, double t_problem,
                        double scale) {
  if (!normalized.normalized)
    throw std::invalid_argument("materialize: series is not in normalized form");
  if (!(t_problem > 0.0) || !(scale >= 1.0))
    throw std::invalid_argument("materialize: need t_problem > 0 and scale >= 1");
  PronySeries hat = normalized;
  hat.omega_star = 2.0 * kPi / (scale * t_problem);
  hat.scale = scale;
  return hat.denormalized();
}

ParameterTable ParameterTable::build(const std::vector<double>& alphas,
                                     int n_min, int n_max, double scale,
                                     int n_modes) {
  if (alphas.empty())
    throw std::invalid_argument("ParameterTable: empty alpha grid");
  for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
    if (!(alphas[i] < alphas[i + 1]))
      throw std::invalid_argument("ParameterTable: alphas must strictly increase");
  if (n_min < 3 || n_max > 15 || n_min > n_max)
    throw std::invalid_argument("ParameterTable: N range must lie in [3, 15]");

  ParameterTable table;
  table.alpha_grid_ = alphas;
  table.n_min_ = n_min;
  table.n_max_ = n_max;
  table.scale_ = scale;
  table.cells_.reserve(alphas.size() * (n_max - n_min + 1));
  for (double a : alphas) {
    for (int n = n_min; n <= n_max; ++n) {
      FitConfig cfg;
      cfg.alpha = a;
      cfg.n_terms = n;
      cfg.n_modes = n_modes;
      cfg.scale = scale;
      cfg.t_problem = 1.0;
      table.cells_.push_back(optimize(cfg).series.normalized_form());
    }
  }
  return table;
}

const PronySeries& ParameterTable::cell(std::size_t ai, int n) const {
  return cells_[ai * (n_max_ - n_min_ + 1) + (n - n_min_)];
}

PronySeries ParameterTable::lookup(double alpha, int n_terms) const {
  if (cells_.empty()) throw std::logic_error("ParameterTable: empty table");
  if (n_terms < n_min_ || n_terms > n_max_)
    throw std::out_of_range("ParameterTable: N outside the stored range");
  if (alpha < alpha_grid_.front() || alpha > alpha_grid_.back())
    throw std::out_of_range("ParameterTable: alpha outside the stored grid");

  for (std::size_t i = 0; i < alpha_grid_.size(); ++i)
    if (alpha == alpha_grid_[i]) return cell(i, n_terms);

  // Componentwise monotone-cubic interpolation across the alpha grid.
  const int N = n_terms;
  std::vector<double> ys(alpha_grid_.size());
  PronySeries out = cell(0, N);
  out.alpha = alpha;
  auto interp_component = [&](auto getter) {
    for (std::size_t i = 0; i < alpha_grid_.size(); ++i)
      ys[i] = getter(cell(i, N));
    return interp_monotone_cubic(alpha_grid_, ys, alpha);
  };
  out.beta0 = interp_component([](const PronySeries& s) { return s.beta0; });
  for (int k = 0; k < N; ++k) {
    out.beta[k] =
        interp_component([k](const PronySeries& s) { return s.beta[k]; });
    out.tau[k] =
        interp_component([k](const PronySeries& s) { return s.tau[k]; });
  }
  out.validate();
  return out;
}

std::string ParameterTable::to_json() const {
  nlohmann::json j;
  j["header"] = {{"alpha_grid", alpha_grid_},
                 {"n_min", n_min_},
                 {"n_max", n_max_},
                 {"scale", scale_},
                 {"fit_version", fit_version_}};
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : cells_) arr.push_back(nlohmann::json::parse(s.to_json()));
  j["series"] = arr;
  return j.dump(2);
}

ParameterTable ParameterTable::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ParameterTable t;
  const auto& h = j.at("header");
  t.alpha_grid_ = h.at("alpha_grid").get<std::vector<double>>();
  t.n_min_ = h.at("n_min").get<int>();
  t.n_max_ = h.at("n_max").get<int>();
  t.scale_ = h.at("scale").get<double>();
  t.fit_version_ = h.at("fit_version").get<std::string>();
  for (const auto& cell : j.at("series"))
    t.cells_.push_back(from_json_object(cell));
  const std::size_t expect =
      t.alpha_grid_.size() * static_cast<std::size_t>(t.n_max_ - t.n_min_ + 1);
  if (t.cells_.size() != expect)
    throw std::invalid_argument("ParameterTable: cell count mismatch");
  return t;
}

void ParameterTable::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("ParameterTable: cannot write " + tmp);
    out << to_json() << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("ParameterTable: cannot move table into " + path);
}

ParameterTable ParameterTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ParameterTable: cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

}  // namespace caputo
