#ifndef CAPUTO_STABILITY_HPP
#define CAPUTO_STABILITY_HPP

#include <functional>
#include <vector>

#include "caputo/core.hpp"
#include "caputo/prony.hpp"

namespace caputo {

// 1D linear fractional viscoelastic bar on [0, 1] with homogeneous Dirichlet
// ends: rho v_t - d/dx Sigma = b, Sigma = E u_x + eta D^alpha(u_x), v = u_t.
// Backward Euler in time with u^n = u^(n-1) + dt v^n; the fractional term
// uses the recursion with per-quadrature-point memory variables Q_k.
struct LinearViscoParams {
  double rho = 1.0;
  double stiffness = 1.0;  // E
  double eta = 1.0;
  PronySeries series;      // supplies alpha, beta0, beta_k, tau_k
  int n_x = 32;
  UniformGrid grid{1e-2, 100};

  void validate() const;
};

// Per-step grouping of the energy-estimate terms.  lhs(n) collects
//   rho ||v^n||^2 + E ||Du^n||^2 + eta beta0 sum_m dt ||Dv^m||^2
//   + sum_k eta/(beta_k e_k) ||Q_k^n||^2,
// and rhs is the initial energy (plus the forcing sum when b is nonzero).
struct EnergyLedger {
  std::vector<double> kinetic;
  std::vector<double> elastic;
  std::vector<double> dissipation_cum;
  std::vector<double> memory;
  std::vector<double> rhs;  // per-step bound (constant when b = 0)
  double lhs(std::size_t n) const {
    return kinetic[n] + elastic[n] + dissipation_cum[n] + memory[n];
  }
  std::size_t steps() const { return kinetic.size(); }
};

struct LinearRun {
  EnergyLedger ledger;
  std::vector<double> final_u;
  std::vector<double> final_v;
  // Per-step defect of the pre-induction inequality (>= 0 when b = 0).
  std::vector<double> step_defect;
};

// Run the discrete scheme from nodal initial data u0(x), v0(x) (both must
// vanish at the endpoints).  b is an optional forcing density b(x, t); the
// ledger's rhs then uses the per-step bound with the discrete Korn-Poincare
// constant estimated from the mass/stiffness eigenproblem.
LinearRun run_linear(const LinearViscoParams& params,
                     const std::function<double(double)>& u0,
                     const std::function<double(double)>& v0,
                     const std::function<double(double, double)>* b = nullptr);

struct StabilityReport {
  bool all_satisfied = true;
  double worst_margin = 0.0;  // min over steps of rhs - lhs
  int first_violation = -1;
};

StabilityReport check_lemma3(const EnergyLedger& ledger);

// Largest eigenvalue of M x = mu K x via inverse stiffness power iteration:
// the square of the discrete Korn-Poincare constant ||v|| <= C ||Dv||.
double korn_poincare_constant(int n_x);

}  // namespace caputo

#endif
