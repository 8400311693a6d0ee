#ifndef CAPUTO_PRONY_HPP
#define CAPUTO_PRONY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "caputo/core.hpp"

namespace caputo {

// Prony (generalized Maxwell) surrogate of the Caputo kernel:
//   D^a f ~ beta0 f'(t) + sum_k q_k,   q_k' + q_k / tau_k = beta_k f'(t).
// Stored either de-normalized (physical beta/tau) or in the frequency-
// normalized "hatted" form used by the optimizer, with
//   beta0 = bhat0 w*^(a-1),  beta_k = bhat_k w*^a,  tau_k = that_k / w*.
struct PronySeries {
  double alpha = 0.5;
  double omega_star = 1.0;  // base fitting frequency 2*pi / T_fit, rad/s
  double scale = 1.0;       // time-scale multiplier used for the fit
  double beta0 = 0.0;
  std::vector<double> beta;
  std::vector<double> tau;
  bool normalized = false;

  int terms() const { return static_cast<int>(beta.size()); }

  // Positivity and matching mode counts.  The [3, 15] term-count window is
  // enforced by the optimizer, not here; degenerate N = 0 series are legal
  // for the consolidated-coefficient algebra.
  void validate() const;

  PronySeries denormalized() const;  // apply the w* maps; no-op if already so
  PronySeries normalized_form() const;

  std::string to_json() const;
  static PronySeries from_json(const std::string& text);
};

// Per-channel recursion state.  Fixed storage: N x C intermediate variables
// plus the previous sample, independent of how many steps were taken.
class PronyState {
 public:
  PronyState(const PronySeries& series, int channels, double dt);

  int channels() const { return channels_; }
  double dt() const { return dt_; }
  const std::vector<double>& decay() const { return e_; }
  bool seeded() const { return seeded_; }
  double q(int k, int c) const { return q_[static_cast<std::size_t>(k) * channels_ + c]; }
  std::uint64_t ops() const { return ops_; }
  std::size_t state_bytes() const;

  // Register f(0); must be called once before the first advance.
  void seed(std::span<const double> f0);

  // One time step: consumes f^n, returns the discrete fractional derivative
  //   (beta0/dt)(f^n - f^(n-1)) + sum_k q_k^n,
  //   q_k^n = e_k^2 q_k^(n-1) + e_k beta_k (f^n - f^(n-1)).
  void advance(std::span<const double> f_n, std::span<double> out);

  std::vector<double> advance(std::span<const double> f_n);

 private:
  int channels_;
  double dt_;
  double beta0_;
  std::vector<double> beta_;
  std::vector<double> e_;     // e_k = exp(-dt / (2 tau_k))
  std::vector<double> q_;     // N x C, mode-major
  std::vector<double> prev_;  // previous sample per channel
  bool seeded_ = false;
  std::uint64_t ops_ = 0;
};

// Consolidated implicit-step coefficient gamma = beta0/dt + sum_k beta_k e_k:
// the factor multiplying the current increment in one advance.
double consolidated_gamma(const PronySeries& series, double dt);

// Pointwise truncation error of the kernel surrogate,
//   eps(z) = z^(1-a)/Gamma(2-a) - beta0 + sum_k beta_k tau_k (e^(-z/tau_k) - 1).
double truncation_error(const PronySeries& series, double z);

struct TruncationProfile {
  PronySeries series;
  double horizon = 0.0;
  std::vector<double> z;        // dense sample locations
  std::vector<double> eps;      // eps(z) at those locations
  double eps_inf = 0.0;         // L_inf(0, T), refined near interior extrema
  double eps_l2 = 0.0;          // L2(0, T) by trapezoid
};

// Dense sampling plus golden-section refinement near interior extrema of
// |eps|; n_samples >= 1000 keeps the norms grid-converged.
TruncationProfile truncation_norms(const PronySeries& series, double T,
                                   int n_samples);

// Evaluator of the a-priori error estimate
//   |err| <= eps_inf (|f'(0)| + ||f''||_L1) + dt (beta0/2 + C(b,t) dt) ||f||_W3inf,
// with C(b,t) = sum_k (beta_k / 24) max{tau_k^-2, tau_k^-1, 1 + e_k} and the
// decay factor bounded by its supremum e_k <= 1 so the constant is dt-free.
struct ErrorBound {
  double eps_inf = 0.0;
  double beta0 = 0.0;
  double c_btau = 0.0;

  ErrorBound(const PronySeries& series, double eps_inf_);
  double operator()(double dt, double fprime0, double f2_l1, double f_w3inf) const;
};

double theorem1_bound(const ErrorBound& bound, double dt, double fprime0,
                      double f2_l1, double f_w3inf);

}  // namespace caputo

#endif
