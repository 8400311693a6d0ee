#include "caputo/studies.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace caputo {

const Polynomial& study_polynomial() {
  static const Polynomial p({2.17, 101.54, -977.47, 3368.61, -5636.44, 4937.49,
                             -2191.59, 398.40});
  return p;
}

SeriesProvider SeriesProvider::from_file(const std::string& path) {
  return SeriesProvider(ParameterTable::load(path));
}

PronySeries SeriesProvider::get(double alpha, int n_terms, double t_problem,
                                double scale) {
  const auto key = std::make_tuple(alpha, n_terms, t_problem, scale);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  PronySeries s = table_
                      ? materialize(table_->lookup(alpha, n_terms), t_problem, scale)
                      : rescale_timescale(alpha, n_terms, t_problem, scale);
  cache_.emplace(key, s);
  return s;
}

namespace {

// L2(0, T) of (approx - exact) by trapezoid on the sample grid, starting at
// the given index.
double l2_error_from(const std::vector<double>& approx,
                     const std::vector<double>& exact, double dt, int begin) {
  std::vector<double> diff;
  diff.reserve(approx.size() - begin);
  for (std::size_t i = begin; i < approx.size(); ++i)
    diff.push_back(approx[i] - exact[i]);
  return l2_norm_trapezoid(diff, dt);
}

UniformGrid poly_grid(double dt, double horizon) {
  const int steps = static_cast<int>(std::llround(horizon / dt));
  return UniformGrid(dt, steps);
}

}  // namespace

double poly_method_error(const std::string& method, double alpha, double dt,
                         double horizon) {
  const FractionalOrder a(alpha);
  const Polynomial& p = study_polynomial();
  const UniformGrid grid = poly_grid(dt, horizon);
  SampleSeries f =
      SampleSeries::sample(grid, [&](double t) { return p.eval(t); });

  MethodOutput out = [&] {
    if (method == "mp") return midpoint_derivative(f, a);
    if (method == "gl") return grunwald_letnikov(f, a);
    if (method == "diethelm")
      return diethelm_trapezoidal(f, a, {f.value(0)});
    if (method == "gao") return gao_weights_derivative(f, a);
    throw std::invalid_argument("poly_method_error: unknown method " + method);
  }();

  std::vector<double> approx(grid.points()), exact(grid.points());
  for (int n = 0; n <= grid.steps; ++n) {
    approx[n] = out.series.value(n);
    exact[n] = caputo_polynomial(p, a, grid.time(n));
  }
  return l2_error_from(approx, exact, dt, method == "gl" ? 1 : 0);
}

double poly_prony_error(const PronySeries& series, double alpha, double dt,
                        double horizon) {
  const FractionalOrder a(alpha);
  const Polynomial& p = study_polynomial();
  const UniformGrid grid = poly_grid(dt, horizon);

  PronyState state(series, 1, dt);
  const double f0 = p.eval(0.0);
  state.seed(std::span<const double>(&f0, 1));

  std::vector<double> diff(grid.points());
  diff[0] = 0.0;  // zero-history start matches the exact derivative at t = 0
  for (int n = 1; n <= grid.steps; ++n) {
    const double fn = p.eval(grid.time(n));
    double dval;
    state.advance(std::span<const double>(&fn, 1), std::span<double>(&dval, 1));
    diff[n] = dval - caputo_polynomial(p, a, grid.time(n));
  }
  return l2_norm_trapezoid(diff, dt);
}

std::vector<PolyStudyRow> run_poly_study(const PolyStudyConfig& cfg,
                                         SeriesProvider& provider) {
  std::vector<PolyStudyRow> rows;
  for (double alpha : cfg.alphas) {
    for (double dt : cfg.dts) {
      rows.push_back(
          {alpha, "mp", 0, dt, poly_method_error("mp", alpha, dt, cfg.horizon)});
      rows.push_back(
          {alpha, "gl", 0, dt, poly_method_error("gl", alpha, dt, cfg.horizon)});
      for (int N : cfg.terms) {
        const PronySeries s = provider.get(alpha, N, cfg.horizon, cfg.scale);
        rows.push_back(
            {alpha, "prony", N, dt, poly_prony_error(s, alpha, dt, cfg.horizon)});
      }
    }
    if (cfg.include_eps_rows) {
      for (int N : cfg.terms) {
        const PronySeries s = provider.get(alpha, N, cfg.horizon, cfg.scale);
        rows.push_back({alpha, "eps", N, 0.0,
                        truncation_norms(s, cfg.horizon, 4000).eps_l2});
      }
    }
  }
  return rows;
}

std::vector<ConvergenceTable> run_fde_study(const FdeStudyConfig& cfg,
                                            SeriesProvider& provider) {
  std::vector<ConvergenceTable> tables;
  for (double alpha : cfg.alphas) {
    for (const std::string& method : cfg.methods) {
      if (method == "gao") {
        int fixed = cfg.fixed_other;
        if (cfg.axis == StudyAxis::space && !cfg.long_mode) fixed = 320;
        tables.push_back(convergence_study(cfg.axis, "gao", alpha, nullptr,
                                           cfg.refinements, fixed));
      } else {
        for (int N : cfg.terms) {
          const PronySeries s = provider.get(alpha, N, 1.0, cfg.scale);
          tables.push_back(convergence_study(cfg.axis, "prony", alpha, &s,
                                             cfg.refinements, cfg.fixed_other));
        }
      }
    }
  }
  return tables;
}

std::vector<LiverRow> run_liver(const LiverRunConfig& cfg,
                                SeriesProvider& provider,
                                const LiverModel& model) {
  const StressEngine engine = parse_engine(cfg.engine);
  const int steps = static_cast<int>(std::llround(cfg.horizon / cfg.dt));
  const UniformGrid grid(cfg.dt, steps);

  PronySeries series;
  const PronySeries* sp = nullptr;
  if (engine == StressEngine::prony) {
    series = provider.get(model.alpha, cfg.terms, cfg.horizon, cfg.scale);
    sp = &series;
  }

  const Vec3 edge = {model.radius, 0.0, model.height};
  const StressHistory point =
      stress_history(edge, model, engine, grid, sp, cfg.output_every);
  const TractionHistory trac =
      torque_and_normal(model, engine, grid, cfg.n_quad, sp, cfg.output_every);

  std::vector<LiverRow> rows;
  rows.reserve(point.times.size());
  for (std::size_t i = 0; i < point.times.size(); ++i)
    rows.push_back({point.times[i], point.sigma[i][4], point.sigma[i][5],
                    trac.torque[i], trac.normal_force[i]});
  return rows;
}

StabilitySweep run_stability_sweep(const StabilitySweepConfig& cfg) {
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // One coarse normalized table serves every trial through interpolation.
  std::vector<double> grid_alphas;
  for (double a = 0.05; a < 0.96; a += 0.10) grid_alphas.push_back(a);
  const ParameterTable table = ParameterTable::build(grid_alphas, 3, 9, 10.0);

  StabilitySweep sweep;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const double rho = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    const double E = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    const double eta = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    const double alpha = 0.05 + 0.90 * unit(rng);
    const int N = 3 * (1 + static_cast<int>(unit(rng) * 3.0) % 3);
    double dt = std::pow(10.0, -4.0 + 3.0 * unit(rng));
    double En = E;
    if (cfg.stiff_probe && trial % 10 == 9) {
      dt = 10.0;  // unconditional-in-dt probe
      En = 100.0 * E;
    }
    const int n_x = 16 + static_cast<int>(unit(rng) * 32.0);
    const int steps = std::min(120, std::max(20, static_cast<int>(2.0 / dt)));

    std::array<double, 4> au{}, av{};
    for (auto& c : au) c = 2.0 * unit(rng) - 1.0;
    for (auto& c : av) c = 2.0 * unit(rng) - 1.0;
    auto fourier = [](const std::array<double, 4>& c) {
      return [c](double x) {
        double acc = 0.0;
        for (int j = 0; j < 4; ++j)
          acc += c[j] * std::sin((j + 1) * std::numbers::pi * x);
        return acc;
      };
    };

    LinearViscoParams params;
    params.rho = rho;
    params.stiffness = En;
    params.eta = eta;
    params.series = materialize(table.lookup(alpha, N), 1.0, 10.0);
    params.n_x = n_x;
    params.grid = UniformGrid(dt, steps);

    const LinearRun run = run_linear(params, fourier(au), fourier(av));
    const StabilityReport report = check_lemma3(run.ledger);

    // Record the worst step of the trial.
    std::size_t worst = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t nstep = 0; nstep < run.ledger.steps(); ++nstep) {
      const double margin = run.ledger.rhs[nstep] - run.ledger.lhs(nstep);
      if (margin < worst_margin) {
        worst_margin = margin;
        worst = nstep;
      }
    }
    sweep.rows.push_back({trial, static_cast<int>(worst),
                          run.ledger.lhs(worst), run.ledger.rhs[worst],
                          worst_margin, !report.all_satisfied});
    if (!report.all_satisfied) ++sweep.violations;
  }
  return sweep;
}

std::vector<BenchRow> bench_poly(const std::vector<double>& dts,
                                 const std::vector<int>& terms, double alpha,
                                 SeriesProvider& provider) {
  const FractionalOrder a(alpha);
  const Polynomial& p = study_polynomial();
  std::vector<BenchRow> rows;
  for (double dt : dts) {
    const UniformGrid grid = poly_grid(dt, 0.9);
    SampleSeries f =
        SampleSeries::sample(grid, [&](double t) { return p.eval(t); });
    MethodOutput mp = midpoint_derivative(f, a);
    rows.push_back({"poly", "mp", 0, dt, mp.seconds, mp.ops});
    for (int N : terms) {
      const PronySeries s = provider.get(alpha, N, 0.9, 10.0);
      PronyState state(s, 1, dt);
      const auto t0 = std::chrono::steady_clock::now();
      double f0 = f.value(0);
      state.seed(std::span<const double>(&f0, 1));
      double out;
      for (int n = 1; n <= grid.steps; ++n) {
        const double fn = f.value(n);
        state.advance(std::span<const double>(&fn, 1), std::span<double>(&out, 1));
      }
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      rows.push_back({"poly", "prony", N, dt, secs, state.ops()});
    }
  }
  return rows;
}

std::vector<BenchRow> bench_liver(const std::vector<double>& dts,
                                  const std::vector<int>& terms,
                                  SeriesProvider& provider,
                                  const LiverModel& model) {
  auto series_for = [&](int N) {
    return provider.get(model.alpha, N, 2.0, 10.0);
  };
  std::vector<BenchRow> rows;
  for (const TimingRow& r :
       timing_matrix(model, dts, terms, series_for, 2.0))
    rows.push_back({"liver", r.engine, r.terms, r.dt, r.seconds, r.ops});
  return rows;
}

}  // namespace caputo
