// fracbench: experiment harness for the fractional-derivative library.
// Subcommands mirror the studies: optimize, table, poly, fde, liver,
// stability, bench.  Every option can also come from a flat key=value config
// file (--config); command-line flags win.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "caputo/csv.hpp"
#include "caputo/studies.hpp"

namespace {

using namespace caputo;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("empty list: " + text);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw CLI::ValidationError("empty list: " + text);
  return out;
}

// "10..320" doubles from 10 to 320; a plain integer is a single level.
std::vector<int> parse_refinements(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {std::stoi(text)};
  const int lo = std::stoi(text.substr(0, dots));
  const int hi = std::stoi(text.substr(dots + 2));
  if (lo < 1 || hi < lo) throw CLI::ValidationError("bad range: " + text);
  std::vector<int> out;
  for (int v = lo; v <= hi; v *= 2) out.push_back(v);
  return out;
}

std::string config_hash_line(const CLI::App& app) {
  std::string canon;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_name().empty() || opt->count() == 0) continue;
    canon += opt->get_name();
    canon += '=';
    for (const auto& v : opt->results()) canon += v + ";";
    canon += '\n';
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(canon)));
  return std::string("config_hash=") + buf;
}

SeriesProvider make_provider(const std::string& params_path) {
  if (params_path.empty()) return SeriesProvider{};
  return SeriesProvider::from_file(params_path);
}

void add_config_option(CLI::App* cmd) {
  static std::string sink;
  cmd->add_option("--config", sink, "flat key=value config file");
}

// Splice `key=value` lines from --config FILE into the argument list right
// after the subcommand, so explicit flags (parsed last) win and unknown keys
// fail option matching.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::vector<std::string> spliced;
  spliced.push_back(args.front());  // the subcommand
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line is not key=value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw std::runtime_error("bad config key in line: " + line);
    spliced.push_back("--" + key);
    if (!value.empty()) spliced.push_back(value);
  }
  spliced.insert(spliced.end(), args.begin() + 1, args.end());
  return spliced;
}

// Later occurrences (explicit flags) override config-provided values.
void take_last_everywhere(CLI::App& app) {
  for (CLI::App* sub : app.get_subcommands({}))
    for (CLI::Option* opt : sub->get_options())
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Caputo derivative benchmark harness"};
  app.require_subcommand(1);

  // --- optimize ---------------------------------------------------------
  auto* opt_cmd = app.add_subcommand("optimize", "fit one Prony parameter set");
  double o_alpha = 0.5, o_scale = 10.0, o_tproblem = 1.0;
  int o_terms = 6, o_modes = 0;
  std::string o_out = "prony.json";
  opt_cmd->add_option("--alpha", o_alpha, "fractional order in (0,1)");
  opt_cmd->add_option("--terms", o_terms, "Prony terms N in [3,15]");
  opt_cmd->add_option("--modes", o_modes, "harmonic count M (0 = 100 N)");
  opt_cmd->add_option("--scale", o_scale, "time-scale multiplier s");
  opt_cmd->add_option("--tproblem", o_tproblem, "problem horizon T");
  opt_cmd->add_option("--out", o_out, "output JSON path");
  add_config_option(opt_cmd);

  // --- table ------------------------------------------------------------
  auto* tab_cmd = app.add_subcommand("table", "build a parameter table");
  double t_amin = 0.05, t_amax = 0.95, t_astep = 0.05, t_scale = 10.0;
  int t_nmin = 3, t_nmax = 12;
  std::string t_out = "prony_table.json";
  tab_cmd->add_option("--alpha-min", t_amin, "first grid alpha");
  tab_cmd->add_option("--alpha-max", t_amax, "last grid alpha");
  tab_cmd->add_option("--alpha-step", t_astep, "alpha grid spacing");
  tab_cmd->add_option("--terms-min", t_nmin, "smallest N");
  tab_cmd->add_option("--terms-max", t_nmax, "largest N");
  tab_cmd->add_option("--scale", t_scale, "time-scale multiplier");
  tab_cmd->add_option("--out", t_out, "output JSON path");
  add_config_option(tab_cmd);

  // --- poly ---------------------------------------------------------------
  auto* poly_cmd = app.add_subcommand("poly", "polynomial convergence study");
  std::string p_alphas = "0.1,0.4,0.8", p_dts = "1e-1,1e-2,1e-3,1e-4";
  std::string p_terms = "3,6,9,12", p_params, p_out = "poly.csv";
  poly_cmd->add_option("--alpha", p_alphas, "comma list of alphas");
  poly_cmd->add_option("--dt", p_dts, "comma list of step sizes");
  poly_cmd->add_option("--terms", p_terms, "comma list of Prony terms");
  poly_cmd->add_option("--params", p_params, "parameter table JSON (optional)");
  poly_cmd->add_option("--out", p_out, "output CSV path");
  add_config_option(poly_cmd);

  // --- fde ----------------------------------------------------------------
  auto* fde_cmd = app.add_subcommand("fde", "fractional diffusion study");
  std::string f_alphas = "0.5", f_nx = "20000", f_nt = "10..320";
  std::string f_methods = "prony", f_terms = "3,6,9,12", f_params,
              f_out = "fde.csv";
  bool f_long = false;
  fde_cmd->add_option("--alpha", f_alphas, "comma list of alphas");
  fde_cmd->add_option("--nx", f_nx, "spatial elements (int or a..b sweep)");
  fde_cmd->add_option("--nt", f_nt, "time steps (int or a..b sweep)");
  fde_cmd->add_option("--method", f_methods, "comma list from {prony,gao}");
  fde_cmd->add_option("--terms", f_terms, "comma list of Prony terms");
  fde_cmd->add_option("--params", f_params, "parameter table JSON (optional)");
  fde_cmd->add_option("--out", f_out, "output CSV path");
  fde_cmd->add_flag("--long", f_long, "paper-faithful Gao spatial column");
  add_config_option(fde_cmd);

  // --- liver ----------------------------------------------------------------
  auto* liv_cmd = app.add_subcommand("liver", "rheometer benchmark trace");
  double l_dt = 1e-3, l_horizon = 2.0;
  int l_terms = 9, l_nquad = 8, l_every = 1;
  std::string l_engine = "prony", l_params, l_out = "liver.csv";
  liv_cmd->add_option("--dt", l_dt, "time step");
  liv_cmd->add_option("--terms", l_terms, "Prony terms");
  liv_cmd->add_option("--engine", l_engine, "prony | gl | mp | hyperelastic");
  liv_cmd->add_option("--horizon", l_horizon, "end time");
  liv_cmd->add_option("--nquad", l_nquad, "radial quadrature points");
  liv_cmd->add_option("--output-every", l_every, "record every k-th step");
  liv_cmd->add_option("--params", l_params, "parameter table JSON (optional)");
  liv_cmd->add_option("--out", l_out, "output CSV path");
  add_config_option(liv_cmd);

  // --- stability ---------------------------------------------------------------
  auto* st_cmd = app.add_subcommand("stability", "energy-inequality sweep");
  int s_trials = 100;
  unsigned s_seed = 42;
  std::string s_out = "ledger.csv";
  st_cmd->add_option("--trials", s_trials, "number of randomized trials");
  st_cmd->add_option("--seed", s_seed, "RNG seed");
  st_cmd->add_option("--out", s_out, "output CSV path");
  add_config_option(st_cmd);

  // --- bench ----------------------------------------------------------------
  auto* b_cmd = app.add_subcommand("bench", "timing comparisons");
  std::string b_mode = "poly", b_dts = "1e-4,5e-5,1e-5", b_terms = "3,6,9,12";
  std::string b_params, b_out = "bench.csv";
  double b_alpha = 0.4;
  b_cmd->add_option("--mode", b_mode, "poly | liver");
  b_cmd->add_option("--dt", b_dts, "comma list of step sizes");
  b_cmd->add_option("--terms", b_terms, "comma list of Prony terms");
  b_cmd->add_option("--alpha", b_alpha, "fractional order (poly mode)");
  b_cmd->add_option("--params", b_params, "parameter table JSON (optional)");
  b_cmd->add_option("--out", b_out, "output CSV path");
  add_config_option(b_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*opt_cmd) {
      FitConfig cfg;
      cfg.alpha = o_alpha;
      cfg.n_terms = o_terms;
      cfg.n_modes = o_modes;
      cfg.scale = o_scale;
      cfg.t_problem = o_tproblem;
      const FitReport report = optimize(cfg);
      std::ofstream out(o_out + ".tmp", std::ios::trunc);
      out << report.series.to_json() << '\n';
      out.close();
      if (std::rename((o_out + ".tmp").c_str(), o_out.c_str()) != 0)
        throw std::runtime_error("cannot write " + o_out);
      std::printf("alpha=%g N=%d rms=%s spectral=%s converged=%d -> %s\n",
                  o_alpha, o_terms, format_sci(report.residual_rms).c_str(),
                  format_sci(report.spectral_error).c_str(),
                  report.converged, o_out.c_str());
      return report.converged ? 0 : 3;
    }

    if (*tab_cmd) {
      std::vector<double> alphas;
      for (double a = t_amin; a <= t_amax + 1e-12; a += t_astep)
        alphas.push_back(a);
      const ParameterTable table =
          ParameterTable::build(alphas, t_nmin, t_nmax, t_scale);
      table.save(t_out);
      std::printf("table: %zu alphas x N in [%d,%d] -> %s\n", alphas.size(),
                  t_nmin, t_nmax, t_out.c_str());
      return 0;
    }

    if (*poly_cmd) {
      PolyStudyConfig cfg;
      cfg.alphas = parse_double_list(p_alphas);
      cfg.dts = parse_double_list(p_dts);
      cfg.terms = parse_int_list(p_terms);
      SeriesProvider provider = make_provider(p_params);
      CsvTable csv({"alpha", "method", "terms", "dt", "l2_error"});
      csv.comment(config_hash_line(*poly_cmd));
      for (const PolyStudyRow& r : run_poly_study(cfg, provider))
        csv.add_row({CsvTable::cell(r.alpha), r.method, CsvTable::cell(r.terms),
                     CsvTable::cell(r.dt), CsvTable::cell(r.l2_error)});
      csv.write(p_out);
      std::printf("poly study -> %s\n", p_out.c_str());
      return 0;
    }

    if (*fde_cmd) {
      const std::vector<int> nx = parse_refinements(f_nx);
      const std::vector<int> nt = parse_refinements(f_nt);
      if ((nx.size() > 1) == (nt.size() > 1))
        throw std::runtime_error("exactly one of --nx/--nt must be a sweep");
      FdeStudyConfig cfg;
      cfg.axis = nx.size() > 1 ? StudyAxis::space : StudyAxis::time;
      cfg.alphas = parse_double_list(f_alphas);
      cfg.methods.clear();
      {
        std::stringstream ss(f_methods);
        std::string m;
        while (std::getline(ss, m, ',')) cfg.methods.push_back(m);
      }
      cfg.terms = parse_int_list(f_terms);
      cfg.refinements = nx.size() > 1 ? nx : nt;
      cfg.fixed_other = nx.size() > 1 ? nt[0] : nx[0];
      cfg.long_mode = f_long;
      SeriesProvider provider = make_provider(f_params);
      CsvTable csv({"alpha", "method", "terms", "nx", "nt", "error", "rate"});
      csv.comment(config_hash_line(*fde_cmd));
      for (const ConvergenceTable& t : run_fde_study(cfg, provider))
        for (const ConvergenceRow& r : t.rows)
          csv.add_row({CsvTable::cell(t.alpha), t.method,
                       CsvTable::cell(t.terms), CsvTable::cell(r.n_x),
                       CsvTable::cell(r.n_t), CsvTable::cell(r.error),
                       r.has_rate ? CsvTable::cell(r.rate) : "*"});
      csv.write(f_out);
      std::printf("fde study -> %s\n", f_out.c_str());
      return 0;
    }

    if (*liv_cmd) {
      LiverRunConfig cfg;
      cfg.dt = l_dt;
      cfg.terms = l_terms;
      cfg.engine = l_engine;
      cfg.horizon = l_horizon;
      cfg.n_quad = l_nquad;
      cfg.output_every = l_every;
      SeriesProvider provider = make_provider(l_params);
      CsvTable csv({"t", "sigma13", "sigma23", "torque", "normal_force"});
      csv.comment(config_hash_line(*liv_cmd));
      csv.comment("engine=" + l_engine + " dt=" + format_sci(l_dt) +
                  " alpha=" + format_sci(LiverModel{}.alpha));
      for (const LiverRow& r : run_liver(cfg, provider))
        csv.add_row({CsvTable::cell(r.t), CsvTable::cell(r.sigma13),
                     CsvTable::cell(r.sigma23), CsvTable::cell(r.torque),
                     CsvTable::cell(r.normal_force)});
      csv.write(l_out);
      std::printf("liver trace -> %s\n", l_out.c_str());
      return 0;
    }

    if (*st_cmd) {
      StabilitySweepConfig cfg;
      cfg.trials = s_trials;
      cfg.seed = s_seed;
      const StabilitySweep sweep = run_stability_sweep(cfg);
      CsvTable csv({"trial", "step", "lhs", "rhs", "margin", "violated"});
      csv.comment(config_hash_line(*st_cmd));
      for (const StabilityRow& r : sweep.rows)
        csv.add_row({CsvTable::cell(r.trial), CsvTable::cell(r.step),
                     CsvTable::cell(r.lhs), CsvTable::cell(r.rhs),
                     CsvTable::cell(r.margin), CsvTable::cell(int(r.violated))});
      csv.write(s_out);
      std::printf("stability sweep: %d violations over %d trials -> %s\n",
                  sweep.violations, cfg.trials, s_out.c_str());
      return sweep.violations == 0 ? 0 : 2;
    }

    if (*b_cmd) {
      SeriesProvider provider = make_provider(b_params);
      const std::vector<double> dts = parse_double_list(b_dts);
      const std::vector<int> terms = parse_int_list(b_terms);
      const std::vector<BenchRow> rows =
          b_mode == "liver" ? bench_liver(dts, terms, provider)
                            : bench_poly(dts, terms, b_alpha, provider);
      CsvTable csv({"mode", "method", "terms", "dt", "seconds", "ops"});
      csv.comment(config_hash_line(*b_cmd));
      for (const BenchRow& r : rows)
        csv.add_row({r.mode, r.method, CsvTable::cell(r.terms),
                     CsvTable::cell(r.dt), CsvTable::cell(r.seconds),
                     CsvTable::cell(r.ops)});
      csv.write(b_out);
      std::printf("bench -> %s\n", b_out.c_str());
      return 0;
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
