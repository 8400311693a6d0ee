#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "caputo/csv.hpp"
#include "caputo/studies.hpp"
#include "doctest.h"

using namespace caputo;

TEST_SUITE_BEGIN("studies");

TEST_CASE("study polynomial carries the published coefficients") {
  const Polynomial& p = study_polynomial();
  CHECK(p.coeffs.size() == 8);
  CHECK(p.eval(0.0) == doctest::Approx(2.17));
  CHECK(p.coeffs[2] == doctest::Approx(-977.47));
}

TEST_CASE("midpoint study cell lands near the published value") {
  // alpha = 0.1, dt = 1e-2 tabulates 2.64e-1.
  const double err = poly_method_error("mp", 0.1, 1e-2, 0.9);
  CHECK(err > 0.5 * 2.64e-1);
  CHECK(err < 2.0 * 2.64e-1);
  CHECK_THROWS_AS(poly_method_error("nope", 0.1, 1e-2, 0.9),
                  std::invalid_argument);
}

TEST_CASE("series provider caches and honors tables") {
  SeriesProvider fresh;
  const PronySeries a = fresh.get(0.4, 6, 0.9, 10.0);
  const PronySeries b = fresh.get(0.4, 6, 0.9, 10.0);
  CHECK(a.to_json() == b.to_json());

  const ParameterTable table = ParameterTable::build({0.35, 0.45}, 6, 6, 10.0);
  SeriesProvider tabled(table);
  const PronySeries c = tabled.get(0.4, 6, 0.9, 10.0);
  CHECK(c.alpha == doctest::Approx(0.4));
  CHECK(!c.normalized);
}

TEST_CASE("csv formatting and atomic write round trip") {
  CHECK(format_sci(0.000123456789) == "1.23457e-04");
  CHECK(format_sci(1.0) == "1.00000e+00");

  CsvTable t({"a", "b"});
  t.comment("config_hash=deadbeef");
  t.add_row({CsvTable::cell(1), CsvTable::cell(2.5)});
  CHECK_THROWS_AS(t.add_row({"only-one"}), std::invalid_argument);

  const std::string path = "studies_test_roundtrip.csv";
  t.write(path);
  const ParsedCsv parsed = read_csv(path);
  REQUIRE(parsed.columns.size() == 2);
  CHECK(parsed.columns[0] == "a");
  REQUIRE(parsed.rows.size() == 1);
  CHECK(parsed.rows[0][1] == "2.50000e+00");
  CHECK(parsed.comments.size() == 1);
  std::remove(path.c_str());
}

TEST_CASE("poly study emits the documented schema") {
  PolyStudyConfig cfg;
  cfg.alphas = {0.4};
  cfg.dts = {1e-1, 1e-2};
  cfg.terms = {6};
  SeriesProvider provider;
  const auto rows = run_poly_study(cfg, provider);
  // mp + gl + prony per dt, plus one eps row.
  CHECK(rows.size() == 2 * 3 + 1);
  bool saw_eps = false;
  for (const auto& r : rows) {
    CHECK(r.alpha == 0.4);
    if (r.method == "eps") {
      saw_eps = true;
      CHECK(r.dt == 0.0);
      CHECK(r.l2_error > 0.0);
    }
  }
  CHECK(saw_eps);
}

TEST_CASE("fde study swaps the short-mode Gao grid") {
  FdeStudyConfig cfg;
  cfg.axis = StudyAxis::space;
  cfg.alphas = {0.5};
  cfg.methods = {"gao"};
  cfg.refinements = {10, 20};
  cfg.fixed_other = 20000;
  cfg.long_mode = false;
  SeriesProvider provider;
  const auto tables = run_fde_study(cfg, provider);
  REQUIRE(tables.size() == 1);
  CHECK(tables[0].rows[0].n_t == 320);  // budget-friendly substitute
  CHECK(tables[0].rows[0].n_x == 10);
}

TEST_CASE("liver run produces aligned traces") {
  LiverRunConfig cfg;
  cfg.dt = 5e-3;
  cfg.terms = 6;
  cfg.horizon = 1.5;
  const auto rows = [&] {
    SeriesProvider provider;
    return run_liver(cfg, provider);
  }();
  REQUIRE(rows.size() == 301);
  CHECK(rows.front().t == 0.0);
  CHECK(rows.back().t == doctest::Approx(1.5));
  for (const auto& r : rows)
    if (r.t < 1.0) CHECK(std::abs(r.torque) < 1e-15);
}

TEST_CASE("stability sweep is quiet on a small batch") {
  StabilitySweepConfig cfg;
  cfg.trials = 6;
  cfg.seed = 7;
  const StabilitySweep sweep = run_stability_sweep(cfg);
  CHECK(sweep.violations == 0);
  CHECK(sweep.rows.size() == 6);
}

TEST_SUITE_END();

#ifdef FRACBENCH_PATH
TEST_SUITE_BEGIN("cli");

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FRACBENCH_PATH) + " " + args +
                          " > cli_test_stdout.txt 2> cli_test_stderr.txt";
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("optimize subcommand writes a loadable series") {
  CHECK(run_cli("optimize --alpha 0.45 --terms 6 --out cli_fit.json") == 0);
  std::ifstream in("cli_fit.json");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const PronySeries s = PronySeries::from_json(text);
  CHECK(s.alpha == doctest::Approx(0.45));
  CHECK(s.terms() == 6);
  std::remove("cli_fit.json");
}

TEST_CASE("poly subcommand emits the documented csv") {
  CHECK(run_cli("poly --alpha 0.4 --dt 1e-1,1e-2 --terms 6 --out cli_poly.csv") ==
        0);
  const ParsedCsv parsed = read_csv("cli_poly.csv");
  REQUIRE(parsed.columns ==
          std::vector<std::string>({"alpha", "method", "terms", "dt", "l2_error"}));
  CHECK(parsed.rows.size() == 7);
  bool has_hash = false;
  for (const auto& c : parsed.comments)
    if (c.rfind("config_hash=", 0) == 0) has_hash = true;
  CHECK(has_hash);
  std::remove("cli_poly.csv");
}

TEST_CASE("config file feeds options and unknown keys are rejected") {
  {
    std::ofstream cfg("cli_cfg.ini");
    cfg << "alpha=0.35\nterms=6\nout=cli_cfg_fit.json\n";
  }
  CHECK(run_cli("optimize --config cli_cfg.ini") == 0);
  std::ifstream in("cli_cfg_fit.json");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(PronySeries::from_json(text).alpha == doctest::Approx(0.35));

  // Flags win over the config file.
  CHECK(run_cli("optimize --config cli_cfg.ini --alpha 0.55 --out cli_cfg_fit.json") ==
        0);
  std::ifstream in2("cli_cfg_fit.json");
  std::string text2((std::istreambuf_iterator<char>(in2)),
                    std::istreambuf_iterator<char>());
  CHECK(PronySeries::from_json(text2).alpha == doctest::Approx(0.55));

  {
    std::ofstream cfg("cli_bad.ini");
    cfg << "alpha=0.35\nnot_a_key=1\n";
  }
  CHECK(run_cli("optimize --config cli_bad.ini") != 0);
  std::remove("cli_cfg.ini");
  std::remove("cli_bad.ini");
  std::remove("cli_cfg_fit.json");
}

TEST_CASE("stability subcommand exit code reflects violations") {
  CHECK(run_cli("stability --trials 4 --seed 3 --out cli_ledger.csv") == 0);
  const ParsedCsv parsed = read_csv("cli_ledger.csv");
  REQUIRE(parsed.columns ==
          std::vector<std::string>(
              {"trial", "step", "lhs", "rhs", "margin", "violated"}));
  CHECK(parsed.rows.size() == 4);
  std::remove("cli_ledger.csv");
}

TEST_SUITE_END();
#endif
