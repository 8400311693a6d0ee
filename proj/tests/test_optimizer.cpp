#include <cmath>
#include <complex>
#include <numbers>

#include "caputo/optimizer.hpp"
#include "doctest.h"

using namespace caputo;

TEST_SUITE_BEGIN("optimizer");

TEST_CASE("config validation") {
  FitConfig cfg;
  cfg.n_terms = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.n_terms = 6;
  cfg.n_modes = 30;  // < 10 N
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.n_modes = 0;
  cfg.scale = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.scale = 10.0;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.modes() == 600);
}

TEST_CASE("constraint residuals match the complex transfer mismatch") {
  // The interleaved residuals must equal H(i k w*)/ (k w*)^a minus the unit
  // symbol phase, which pins the sign of the relaxation sum in the imaginary
  // part.
  FitConfig cfg;
  cfg.alpha = 0.35;
  cfg.n_terms = 3;
  cfg.n_modes = 40;
  cfg.scale = 10.0;
  cfg.t_problem = 1.0;

  const double b0 = 0.02;
  const std::vector<double> beta = {0.8, 0.4, 0.2};
  const std::vector<double> tau = {0.05, 0.3, 1.5};
  const auto r = assemble_constraints(cfg, b0, beta, tau);
  REQUIRE(r.size() == 80);

  PronySeries hat;
  hat.alpha = cfg.alpha;
  hat.omega_star = cfg.omega_star();
  hat.normalized = true;
  hat.beta0 = b0;
  hat.beta = beta;
  hat.tau = tau;
  const PronySeries s = hat.denormalized();

  const double w_star = cfg.omega_star();
  for (int k = 1; k <= 40; ++k) {
    const double w = k * w_star;
    const std::complex<double> rel =
        prony_transfer(s, w) / std::pow(w, cfg.alpha);
    const std::complex<double> sym(std::cos(0.5 * std::numbers::pi * cfg.alpha),
                                   std::sin(0.5 * std::numbers::pi * cfg.alpha));
    CHECK(r[2 * (k - 1)] == doctest::Approx((rel - sym).real()).epsilon(1e-12));
    CHECK(r[2 * (k - 1) + 1] == doctest::Approx((rel - sym).imag()).epsilon(1e-12));
  }
}

TEST_CASE("single slow mode approaches the spring limit") {
  FitConfig cfg;
  cfg.alpha = 0.5;
  cfg.n_modes = 20;
  const auto r = assemble_constraints(cfg, 1e-12, {0.7}, {1e8});
  const double ca = std::cos(0.25 * std::numbers::pi);
  for (int k = 1; k <= 20; ++k) {
    const double real_sum = r[2 * (k - 1)] + ca;
    CHECK(real_sum == doctest::Approx(0.7 / std::pow(k, 0.5)).epsilon(1e-8));
  }
}

TEST_CASE("fit quality at alpha=0.5, N=6") {
  FitConfig cfg;
  cfg.alpha = 0.5;
  cfg.n_terms = 6;
  FitReport rep = optimize(cfg);
  CHECK(rep.converged);
  CHECK(rep.residual_rms < 0.02);
  // Relative modulus error over the central fitted band.
  const double w_star = cfg.omega_star();
  const double lo = 2.0 * w_star, hi = 0.5 * cfg.modes() * w_star;
  for (int i = 0; i < 64; ++i) {
    const double w = lo * std::pow(hi / lo, i / 63.0);
    const double mod = std::abs(prony_transfer(rep.series, w));
    CHECK(std::abs(mod - std::pow(w, 0.5)) <= 0.05 * std::pow(w, 0.5));
  }
  // Positivity comes out of the log-space parameterization.
  CHECK(rep.series.beta0 > 0.0);
  for (int k = 0; k < 6; ++k) {
    CHECK(rep.series.beta[k] > 0.0);
    CHECK(rep.series.tau[k] > 0.0);
  }
}

TEST_CASE("shipped (0.4, 9) residuals stay small") {
  FitConfig cfg;
  cfg.alpha = 0.4;
  cfg.n_terms = 9;
  cfg.scale = 10.0;
  cfg.t_problem = 0.9;
  FitReport rep = optimize(cfg);
  const PronySeries hat = rep.series.normalized_form();
  const auto r = assemble_constraints(cfg, hat.beta0, hat.beta, hat.tau);
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  CHECK(worst <= 0.05);
}

TEST_CASE("residual improves with more terms at fixed modes") {
  for (double alpha : {0.3, 0.7}) {
    double prev = 1e300;
    for (int n : {3, 6, 9}) {
      FitConfig cfg;
      cfg.alpha = alpha;
      cfg.n_terms = n;
      cfg.n_modes = 900;
      const double rms = optimize(cfg).residual_rms;
      CHECK(rms <= prev * (1.0 + 1e-9));
      prev = rms;
    }
  }
}

TEST_CASE("optimize is deterministic") {
  FitConfig cfg;
  cfg.alpha = 0.62;
  cfg.n_terms = 7;
  const FitReport a = optimize(cfg);
  const FitReport b = optimize(cfg);
  CHECK(a.series.to_json() == b.series.to_json());
  CHECK(a.residual_rms == b.residual_rms);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("time-scale stretching trades weights for time constants") {
  const PronySeries s1 = rescale_timescale(0.4, 9, 0.9, 1.0);
  const PronySeries s10 = rescale_timescale(0.4, 9, 0.9, 10.0);
  // Stretching the window grows the time constants and shrinks the Maxwell
  // weights, which collapses the step-size constant of the a-priori bound.
  CHECK(s10.tau.back() > s1.tau.back());
  CHECK(s10.tau.front() > s1.tau.front());
  double sum1 = 0.0, sum10 = 0.0;
  for (double b : s1.beta) sum1 += b;
  for (double b : s10.beta) sum10 += b;
  CHECK(sum10 < sum1);
  const double c1 = ErrorBound(s1, 1.0).c_btau;
  const double c10 = ErrorBound(s10, 1.0).c_btau;
  CHECK(c10 < 0.1 * c1);
  // Net effect on the discretization term of the error estimate at the
  // step sizes the studies use.
  for (double dt : {1e-2, 1e-3, 1e-4})
    CHECK(ErrorBound(s10, 0.0)(dt, 0.0, 0.0, 1.0) <
          ErrorBound(s1, 0.0)(dt, 0.0, 0.0, 1.0));
}

TEST_CASE("parameter table: exact at grid, interpolated between") {
  const ParameterTable table = ParameterTable::build({0.3, 0.4}, 3, 4, 10.0);

  const PronySeries at_grid = table.lookup(0.3, 3);
  const PronySeries again = table.lookup(0.3, 3);
  CHECK(at_grid.to_json() == again.to_json());

  const PronySeries mid = table.lookup(0.35, 4);
  CHECK(mid.alpha == doctest::Approx(0.35));
  const double err_mid = spectral_error(materialize(mid, 1.0, 10.0),
                                        2.0 * 2.0 * std::numbers::pi / 10.0,
                                        200.0 * 2.0 * std::numbers::pi / 10.0);
  double worst_neighbor = 0.0;
  for (double a : {0.3, 0.4}) {
    const PronySeries s = materialize(table.lookup(a, 4), 1.0, 10.0);
    worst_neighbor = std::max(
        worst_neighbor,
        spectral_error(s, 2.0 * 2.0 * std::numbers::pi / 10.0,
                       200.0 * 2.0 * std::numbers::pi / 10.0));
  }
  CHECK(err_mid <= 2.0 * worst_neighbor);

  CHECK_THROWS_AS(table.lookup(0.2, 3), std::out_of_range);
  CHECK_THROWS_AS(table.lookup(0.5, 3), std::out_of_range);
  CHECK_THROWS_AS(table.lookup(0.35, 9), std::out_of_range);
}

TEST_CASE("parameter table json round trip") {
  const ParameterTable table = ParameterTable::build({0.4, 0.6}, 3, 3, 10.0);
  const std::string text = table.to_json();
  const ParameterTable back = ParameterTable::from_json(text);
  CHECK(back.to_json() == text);
  CHECK(back.lookup(0.4, 3).to_json() == table.lookup(0.4, 3).to_json());
}

TEST_SUITE_END();
