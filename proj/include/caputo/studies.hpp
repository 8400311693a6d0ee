#ifndef CAPUTO_STUDIES_HPP
#define CAPUTO_STUDIES_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "caputo/cumulative.hpp"
#include "caputo/fde.hpp"
#include "caputo/mechanics.hpp"
#include "caputo/optimizer.hpp"
#include "caputo/stability.hpp"

namespace caputo {

// The polynomial driving the approximation study; b_k multiplies t^(k-1).
const Polynomial& study_polynomial();

// Hands out fitted parameters, either from a persisted table (lookup +
// materialize) or by fitting on demand; results are cached per call site.
class SeriesProvider {
 public:
  SeriesProvider() = default;
  explicit SeriesProvider(ParameterTable table) : table_(std::move(table)) {}
  static SeriesProvider from_file(const std::string& path);

  PronySeries get(double alpha, int n_terms, double t_problem, double scale);

 private:
  std::optional<ParameterTable> table_;
  std::map<std::tuple<double, int, double, double>, PronySeries> cache_;
};

// --- polynomial study -------------------------------------------------------

struct PolyStudyConfig {
  std::vector<double> alphas = {0.1, 0.4, 0.8};
  std::vector<double> dts = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<int> terms = {3, 6, 9, 12};
  double horizon = 0.9;
  double scale = 10.0;
  bool include_eps_rows = true;  // dt = 0 rows carrying ||eps||_L2(0, T)
};

struct PolyStudyRow {
  double alpha;
  std::string method;  // "mp", "gl", "prony", "eps"
  int terms;           // 0 for the cumulative methods
  double dt;           // 0 for the truncation-norm rows
  double l2_error;
};

std::vector<PolyStudyRow> run_poly_study(const PolyStudyConfig& cfg,
                                         SeriesProvider& provider);

// L2(0, T) error of one cumulative method against the power-rule reference
// on the study polynomial (GL is integrated from t_1; the others from t_0).
double poly_method_error(const std::string& method, double alpha, double dt,
                         double horizon);
double poly_prony_error(const PronySeries& series, double alpha, double dt,
                        double horizon);

// --- fractional diffusion study ---------------------------------------------

struct FdeStudyConfig {
  StudyAxis axis = StudyAxis::time;
  std::vector<double> alphas = {0.5, 2.0 / 3.0};
  std::vector<std::string> methods = {"gao", "prony"};
  std::vector<int> terms = {3, 6, 9, 12};
  std::vector<int> refinements = {10, 20, 40, 80, 160, 320};
  int fixed_other = 20000;
  double scale = 100.0;
  // The paper-faithful spatial Gao column needs the full 20000-step history
  // at every h; the short mode swaps in a 320-step grid whose temporal error
  // sits far below the spatial error of every tabulated h.
  bool long_mode = false;
};

std::vector<ConvergenceTable> run_fde_study(const FdeStudyConfig& cfg,
                                            SeriesProvider& provider);

// --- liver benchmark ----------------------------------------------------------

struct LiverRunConfig {
  double dt = 1e-3;
  int terms = 9;
  std::string engine = "prony";
  double horizon = 2.0;
  int n_quad = 8;
  int output_every = 1;
  double scale = 10.0;
};

struct LiverRow {
  double t;
  double sigma13;
  double sigma23;
  double torque;
  double normal_force;
};

std::vector<LiverRow> run_liver(const LiverRunConfig& cfg,
                                SeriesProvider& provider,
                                const LiverModel& model = LiverModel{});

// --- stability sweep ----------------------------------------------------------

struct StabilitySweepConfig {
  int trials = 100;
  unsigned seed = 42;
  bool stiff_probe = true;  // include dt = 10 runs with stiff E
};

struct StabilityRow {
  int trial;
  int step;
  double lhs;
  double rhs;
  double margin;
  bool violated;
};

struct StabilitySweep {
  std::vector<StabilityRow> rows;  // worst step per trial
  int violations = 0;
};

StabilitySweep run_stability_sweep(const StabilitySweepConfig& cfg);

// --- benchmarks ---------------------------------------------------------------

struct BenchRow {
  std::string mode;    // "poly" or "liver"
  std::string method;  // "mp", "gl", "prony"
  int terms;
  double dt;
  double seconds;
  std::uint64_t ops;
};

// Wall time of the midpoint rule versus the recursion on the polynomial
// study window [0, 0.9].
std::vector<BenchRow> bench_poly(const std::vector<double>& dts,
                                 const std::vector<int>& terms, double alpha,
                                 SeriesProvider& provider);

std::vector<BenchRow> bench_liver(const std::vector<double>& dts,
                                  const std::vector<int>& terms,
                                  SeriesProvider& provider,
                                  const LiverModel& model = LiverModel{});

}  // namespace caputo

#endif
