#ifndef CAPUTO_OPTIMIZER_HPP
#define CAPUTO_OPTIMIZER_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "caputo/prony.hpp"

namespace caputo {

// Configuration of one Prony-parameter fit.  The fit works in frequency-
// normalized (hatted) variables against the symbol (i w)^a sampled at the
// harmonics w_k = k w*, k = 1..M, with w* = 2 pi / (scale * t_problem).
struct FitConfig {
  double alpha = 0.5;
  int n_terms = 6;        // N, restricted to [3, 15]
  int n_modes = 0;        // M; 0 selects the default 100 N; must be >= 10 N
  double scale = 10.0;    // time-scale multiplier s >= 1
  double t_problem = 1.0; // problem horizon T; the fit window is s T
  int max_iterations = 2000;
  double tolerance = 0.02;  // residual_rms threshold for the converged flag
  unsigned seed = 0;        // reserved; the default path is fully deterministic

  void validate() const;
  int modes() const { return n_modes > 0 ? n_modes : 100 * n_terms; }
  double omega_star() const;
};

struct FitReport {
  PronySeries series;       // de-normalized, ready for direct use
  double residual_rms = 0.0;
  double spectral_error = 0.0;  // max relative complex mismatch, central band
  int iterations = 0;
  bool converged = false;
};

// The 2M constraint residuals of the normalized system, interleaved
// (real_k, imag_k) for k = 1..M:
//   real_k = (1/k^a) sum_m bhat_m (k that_m)^2 / ((k that_m)^2 + 1) - cos(pi a/2)
//   imag_k = bhat0 k^(1-a)
//            + (1/k^a) sum_m bhat_m (k that_m) / ((k that_m)^2 + 1) - sin(pi a/2)
// The sign of the relaxation sum in the imaginary part follows the complex
// expansion of the transfer function (plus), which the spectral oracle
// validates.
std::vector<double> assemble_constraints(const FitConfig& cfg, double bhat0,
                                         const std::vector<double>& beta_hat,
                                         const std::vector<double>& tau_hat);

// Damped Gauss-Newton least squares over the logarithms of (bhat0, bhat,
// that); deterministic given the config.  Non-convergence is reported via
// converged = false with the best parameters found.
FitReport optimize(const FitConfig& cfg);

// Fit against the stretched window s * t_problem and return the
// de-normalized series.
PronySeries rescale_timescale(double alpha, int n_terms, double t_problem,
                              double s);

// Transfer function of the series acting on exp(i w t):
//   H(i w) = beta0 i w + sum_k beta_k tau_k w (tau_k w + i) / ((tau_k w)^2 + 1).
std::complex<double> prony_transfer(const PronySeries& series, double omega);

// max over a log-spaced sweep of |H(i w) - (i w)^a| / w^a.
double spectral_error(const PronySeries& series, double omega_lo,
                      double omega_hi, int n_sweep = 200);

// Fix the base frequency w* = 2 pi / (scale * t_problem) on a normalized
// series and return its de-normalized form.
PronySeries materialize(const PronySeries& normalized, double t_problem,
                        double scale);

// Persisted grid of normalized fits over (alpha, N), with componentwise
// monotone-cubic interpolation between alpha grid points.
class ParameterTable {
 public:
  ParameterTable() = default;

  static ParameterTable build(const std::vector<double>& alphas, int n_min,
                              int n_max, double scale, int n_modes = 0);

  // Stored series at grid alpha (bit-exact); interpolated off-grid.  Queries
  // outside the alpha grid or the N range throw.
  PronySeries lookup(double alpha, int n_terms) const;

  const std::vector<double>& alpha_grid() const { return alpha_grid_; }
  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  double scale() const { return scale_; }

  std::string to_json() const;
  static ParameterTable from_json(const std::string& text);
  void save(const std::string& path) const;
  static ParameterTable load(const std::string& path);

 private:
  const PronySeries& cell(std::size_t ai, int n) const;
  std::vector<double> alpha_grid_;
  int n_min_ = 0, n_max_ = -1;
  double scale_ = 10.0;
  std::string fit_version_ = "1";
  std::vector<PronySeries> cells_;  // alpha-major, N within
};

}  // namespace caputo

#endif
