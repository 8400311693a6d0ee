#ifndef CAPUTO_FDE_HPP
#define CAPUTO_FDE_HPP

#include <string>
#include <vector>

#include "caputo/core.hpp"
#include "caputo/prony.hpp"

namespace caputo {

// 1D fractional diffusion test problem on x in [0,1], t in [0,1]:
//   D_t^a u - u_xx = f(x,t),
//   f(x,t) = (x-1)^2 e^-x t^3 [ Gamma(4+a)(x-1)^2/6 - (21 - 10x + x^2) t^a ]
//            - 4 x^2 (x-1)^2 (14 x^2 - 14 x + 3),
//   u(x,0) = x^4 (x-1)^4,  u(0,t) = t^(3+a),  u(1,t) = 0,
// with analytic solution u = (x-1)^4 (e^-x t^(3+a) + x^4).
struct FdeProblem {
  double alpha = 0.5;
  int n_x = 10;      // spatial elements, h = 1 / n_x
  UniformGrid grid;  // time grid over [0, 1]

  // Problem data; the constructor installs the closed forms above, and
  // paper_data marks that the fast precomputed source decomposition applies.
  std::function<double(double, double)> source_fn;
  std::function<double(double)> left_bc;
  std::function<double(double)> initial_fn;
  std::function<double(double, double)> exact;  // reference for E(h, dt)
  bool paper_data = true;

  FdeProblem(double alpha_, int n_x_, UniformGrid grid_);
  static FdeProblem homogeneous(double alpha_, int n_x_, UniformGrid grid_);

  double source(double x, double t) const { return source_fn(x, t); }
  double dirichlet_left(double t) const { return left_bc(t); }
  double initial(double x) const { return initial_fn(x); }
};

double fde_analytic_solution(double x, double t, double alpha);

// max_i |u_i - exact(x_i, t)| against the problem's reference solution.
double fde_nodal_error(const FdeProblem& problem, const std::vector<double>& u,
                       double t);

// Tridiagonal matrix stored by bands.
struct Tridiag {
  std::vector<double> lower, diag, upper;  // lower/upper have n-1 entries
  int size() const { return static_cast<int>(diag.size()); }
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

// Standard linear-element matrices on uniform nodes: mass rows (h/6)[1 4 1],
// stiffness rows (1/h)[-1 2 -1].
void assemble_fe(int n_x, Tridiag& mass, Tridiag& stiffness);

// Thomas solve of a tridiagonal system (destroys nothing; O(n)).
std::vector<double> thomas_solve(const Tridiag& A, std::vector<double> rhs);

struct FdeSolution {
  double max_error = 0.0;          // E(h, dt): max over space and time
  std::vector<double> final_u;     // nodal values at t = 1
  std::size_t history_bytes = 0;   // storage consumed by the time stepper
  std::uint64_t ops = 0;           // history-combination multiply-adds
  double seconds = 0.0;
};

// Prony time stepping: per step solve (gamma M + K) u^n =
//   F^n + M (gamma u^(n-1) - sum_k e_k^2 q_k^(n-1)), Dirichlet rows replaced.
FdeSolution solve_fde_prony(const FdeProblem& problem, const PronySeries& series);

// Gao (L1) time stepping with the full solution history.
FdeSolution solve_fde_gao(const FdeProblem& problem);

enum class StudyAxis { time, space };

struct ConvergenceRow {
  int n_x = 0;
  int n_t = 0;
  double error = 0.0;
  double rate = 0.0;      // log2(E_i / E_(i+1)); absent on the last row
  bool has_rate = false;
};

struct ConvergenceTable {
  double alpha = 0.0;
  std::string method;  // "gao" or "prony"
  int terms = 0;       // 0 for gao
  std::vector<ConvergenceRow> rows;
};

// Sweep one refinement axis with the other held fixed.  refinements are the
// swept counts (n_t for the time axis, n_x for the space axis), in refining
// order; rate_i compares row i against row i+1.
ConvergenceTable convergence_study(StudyAxis axis, const std::string& method,
                                   double alpha, const PronySeries* series,
                                   const std::vector<int>& refinements,
                                   int fixed_other);

}  // namespace caputo

#endif
