#include "caputo/stability.hpp"

#include <cmath>

#include "caputo/fde.hpp"

namespace caputo {

namespace {

// Quadratic form x^T A x for a tridiagonal A.
double quad_form(const Tridiag& A, const std::vector<double>& x) {
  const int n = A.size();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = A.diag[i] * x[i];
    if (i > 0) row += A.lower[i - 1] * x[i - 1];
    if (i + 1 < n) row += A.upper[i] * x[i + 1];
    acc += x[i] * row;
  }
  return acc;
}

}  // namespace

void LinearViscoParams::validate() const {
  if (!(rho > 0.0 && stiffness > 0.0 && eta > 0.0))
    throw std::invalid_argument("LinearViscoParams: rho, E, eta must be > 0");
  if (n_x < 2) throw std::invalid_argument("LinearViscoParams: n_x must be >= 2");
  series.denormalized().validate();
}

LinearRun run_linear(const LinearViscoParams& params,
                     const std::function<double(double)>& u0,
                     const std::function<double(double)>& v0,
                     const std::function<double(double, double)>* b) {
  params.validate();
  const PronySeries s = params.series.denormalized();
  const int n_x = params.n_x;
  const int n = n_x + 1;
  const double h = 1.0 / n_x;
  const double dt = params.grid.dt;
  const double rho = params.rho, E = params.stiffness, eta = params.eta;
  const int N = s.terms();

  Tridiag M, K;
  assemble_fe(n_x, M, K);

  std::vector<double> e(N), e2(N);
  for (int k = 0; k < N; ++k) {
    e[k] = std::exp(-dt / (2.0 * s.tau[k]));
    e2[k] = e[k] * e[k];
  }

  // System matrix rho M / dt + kappa K, kappa = E dt + eta beta0
  //   + eta dt sum_k beta_k e_k; Dirichlet rows pinned.
  double kappa = E * dt + eta * s.beta0;
  for (int k = 0; k < N; ++k) kappa += eta * dt * s.beta[k] * e[k];
  Tridiag A;
  A.diag.resize(n);
  A.lower.resize(n - 1);
  A.upper.resize(n - 1);
  for (int i = 0; i < n; ++i) A.diag[i] = rho / dt * M.diag[i] + kappa * K.diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    A.lower[i] = rho / dt * M.lower[i] + kappa * K.lower[i];
    A.upper[i] = rho / dt * M.upper[i] + kappa * K.upper[i];
  }
  A.diag.front() = 1.0;
  A.upper.front() = 0.0;
  A.diag.back() = 1.0;
  A.lower.back() = 0.0;
  if (!(kappa > 0.0))
    throw std::runtime_error("run_linear: assembly lost positivity");

  std::vector<double> u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u[i] = u0(i * h);
    v[i] = v0(i * h);
  }
  if (std::abs(u.front()) > 1e-12 || std::abs(u.back()) > 1e-12 ||
      std::abs(v.front()) > 1e-12 || std::abs(v.back()) > 1e-12)
    throw std::invalid_argument("run_linear: initial data must vanish at the ends");
  u.front() = u.back() = 0.0;
  v.front() = v.back() = 0.0;

  // Memory variables at the element quadrature points (2-pt Gauss).  Du is
  // elementwise constant for linear elements, so both points carry the same
  // value; the storage mirrors the quadrature-point layout regardless.
  std::vector<std::vector<double>> Q(N, std::vector<double>(2 * n_x, 0.0));

  const double c_omega = b ? korn_poincare_constant(n_x) : 0.0;
  auto b_norm_sq = [&](double t) {
    // ||b(., t)||_0^2 by 2-pt Gauss per element.
    if (!b) return 0.0;
    const double g1 = 0.5 - 0.5 / std::sqrt(3.0), g2 = 0.5 + 0.5 / std::sqrt(3.0);
    double acc = 0.0;
    for (int el = 0; el < n_x; ++el) {
      const double xl = el * h;
      const double b1 = (*b)(xl + g1 * h, t);
      const double b2 = (*b)(xl + g2 * h, t);
      acc += 0.5 * h * (b1 * b1 + b2 * b2);
    }
    return acc;
  };
  auto b_load = [&](double t, std::vector<double>& load) {
    load.assign(n, 0.0);
    if (!b) return;
    const double g1 = 0.5 - 0.5 / std::sqrt(3.0), g2 = 0.5 + 0.5 / std::sqrt(3.0);
    for (int el = 0; el < n_x; ++el) {
      const double xl = el * h;
      for (double xi : {g1, g2}) {
        const double w = 0.5 * h;
        const double bv = (*b)(xl + xi * h, t);
        load[el] += w * bv * (1.0 - xi);
        load[el + 1] += w * bv * xi;
      }
    }
  };

  auto memory_norm = [&](int k) {
    double acc = 0.0;
    for (double q : Q[k]) acc += 0.5 * h * q * q;
    return acc;
  };
  auto memory_total = [&](void) {
    double acc = 0.0;
    for (int k = 0; k < N; ++k) {
      const double nk = memory_norm(k);
      if (nk > 0.0) acc += eta * nk / (s.beta[k] * e[k]);
    }
    return acc;
  };

  LinearRun run;
  EnergyLedger& led = run.ledger;
  const double e0 = rho * quad_form(M, v) + E * quad_form(K, u);
  led.kinetic.push_back(rho * quad_form(M, v));
  led.elastic.push_back(E * quad_form(K, u));
  led.dissipation_cum.push_back(0.0);
  led.memory.push_back(0.0);
  led.rhs.push_back(e0);

  std::vector<double> rhs(n), load, dv(n_x), prev_state;
  double diss = 0.0, b_cum = 0.0;
  for (int step = 1; step <= params.grid.steps; ++step) {
    const double t = params.grid.time(step);

    // Pre-step snapshot for the per-step defect.
    const double pre =
        rho * quad_form(M, v) + E * quad_form(K, u) + [&] {
          double acc = 0.0;
          for (int k = 0; k < N; ++k) {
            const double nk = memory_norm(k);
            if (nk > 0.0)
              acc += eta * e2[k] * e2[k] * nk / (s.beta[k] * e[k]);
          }
          return acc;
        }();

    // rhs = rho M v / dt + load(b) - (E Du_prev + eta sum e^2 Q, Dy).
    M.multiply(v, rhs);
    for (int i = 0; i < n; ++i) rhs[i] *= rho / dt;
    b_load(t, load);
    if (b)
      for (int i = 0; i < n; ++i) rhs[i] += load[i];
    for (int el = 0; el < n_x; ++el) {
      const double du = (u[el + 1] - u[el]) / h;
      double g = E * du;
      for (int k = 0; k < N; ++k)
        g += eta * e2[k] * 0.5 * (Q[k][2 * el] + Q[k][2 * el + 1]);
      // (g, Dphi_i) over the element: -g at the left node, +g at the right.
      rhs[el] += g;      // Dphi = -1/h against measure h, sign folded in
      rhs[el + 1] -= g;
    }
    rhs.front() = 0.0;
    rhs.back() = 0.0;

    std::vector<double> v_new = thomas_solve(A, rhs);
    for (int i = 0; i < n; ++i) u[i] += dt * v_new[i];
    v = std::move(v_new);

    for (int el = 0; el < n_x; ++el) {
      const double dvn = (v[el + 1] - v[el]) / h;
      for (int k = 0; k < N; ++k) {
        const double upd = s.beta[k] * e[k] * dt * dvn;
        Q[k][2 * el] = e2[k] * Q[k][2 * el] + upd;
        Q[k][2 * el + 1] = e2[k] * Q[k][2 * el + 1] + upd;
      }
    }

    diss += eta * s.beta0 * dt * quad_form(K, v);
    if (b) b_cum += dt * c_omega * c_omega / (eta * s.beta0) * b_norm_sq(t);

    led.kinetic.push_back(rho * quad_form(M, v));
    led.elastic.push_back(E * quad_form(K, u));
    led.dissipation_cum.push_back(diss);
    led.memory.push_back(memory_total());
    led.rhs.push_back(e0 + b_cum);

    const double post = led.kinetic.back() + led.elastic.back() +
                        eta * s.beta0 * dt * quad_form(K, v) +
                        led.memory.back();
    const double b_step =
        b ? dt * c_omega * c_omega / (eta * s.beta0) * b_norm_sq(t) : 0.0;
    run.step_defect.push_back(pre + b_step - post);
  }

  run.final_u = u;
  run.final_v = v;
  return run;
}

StabilityReport check_lemma3(const EnergyLedger& ledger) {
  StabilityReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t nstep = 0; nstep < ledger.steps(); ++nstep) {
    const double margin = ledger.rhs[nstep] - ledger.lhs(nstep);
    if (margin < report.worst_margin) report.worst_margin = margin;
    const double tol = 1e-10 * std::max(1.0, ledger.rhs[nstep]);
    if (margin < -tol && report.first_violation < 0) {
      report.all_satisfied = false;
      report.first_violation = static_cast<int>(nstep);
    }
  }
  return report;
}

double korn_poincare_constant(int n_x) {
  // Largest mu with M x = mu K x on the Dirichlet-constrained space; power
  // iteration on K^-1 M over the interior nodes.
  Tridiag M, K;
  assemble_fe(n_x, M, K);
  const int ni = n_x - 1;
  Tridiag Ki;
  Ki.diag.assign(K.diag.begin() + 1, K.diag.end() - 1);
  Ki.lower.assign(K.lower.begin() + 1, K.lower.end() - 1);
  Ki.upper.assign(K.upper.begin() + 1, K.upper.end() - 1);
  Tridiag Mi;
  Mi.diag.assign(M.diag.begin() + 1, M.diag.end() - 1);
  Mi.lower.assign(M.lower.begin() + 1, M.lower.end() - 1);
  Mi.upper.assign(M.upper.begin() + 1, M.upper.end() - 1);

  std::vector<double> x(ni, 1.0), y;
  double mu = 0.0;
  for (int it = 0; it < 200; ++it) {
    Mi.multiply(x, y);
    std::vector<double> z = thomas_solve(Ki, y);
    double norm = 0.0;
    for (double v : z) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : z) v /= norm;
    Mi.multiply(z, y);
    double num = 0.0;
    for (int i = 0; i < ni; ++i) num += z[i] * y[i];
    Ki.multiply(z, y);
    double den = 0.0;
    for (int i = 0; i < ni; ++i) den += z[i] * y[i];
    const double mu_new = num / den;
    const bool done = std::abs(mu_new - mu) < 1e-14 * mu_new;
    mu = mu_new;
    x = std::move(z);
    if (done) break;
  }
  return std::sqrt(mu);
}

}  // namespace caputo
