#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "solitonlab/scenario.hpp"

using namespace solitonlab;

namespace {

const char* kOneSoliton = R"({
  "spectral_data": [
    {"k": {"re": 0.2, "im": 0.03}, "c": {"re": -2.0, "im": 0.0}, "d": {"re": -4.0, "im": 0.0}}
  ]
})";

// Unit-amplitude, unit-decay soliton: every scattering window stays small.
const char* kBigSoliton = R"({
  "spectral_data": [
    {"k": {"re": 0.1, "im": 0.5}, "c": {"re": 1.0, "im": 0.0}, "d": {"re": 1.4142135623730951, "im": 0.0}}
  ]
})";

// Fast carrier keeps the stencil truncation well above rounding noise, so
// the residual halving ratio is a real order measurement (~16) here.
const char* kStrongSoliton = R"({
  "spectral_data": [
    {"k": {"re": 0.8, "im": 0.5}, "c": {"re": 1.0, "im": 0.0}, "d": {"re": 1.5811388300841898, "im": 0.0}}
  ]
})";

std::string expect_config_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected ConfigError");
  return {};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const CheckResult& find_check(const RunReport& r, const std::string& name) {
  for (const CheckResult& c : r.checks)
    if (c.name == name) return c;
  REQUIRE(false);
  static CheckResult dummy;
  return dummy;
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
  const ScenarioConfig cfg = parse_scenario(kOneSoliton);
  REQUIRE(cfg.data.size() == 1);
  CHECK(cfg.data[0].k == Cx(0.2, 0.03));
  CHECK(cfg.xgrid.n == 401);
  CHECK(cfg.tgrid.n == 101);
  CHECK(cfg.verify.stencil_h == 0.01);
  CHECK(cfg.verify.closed_form_points == 1000);
  CHECK(cfg.scatter.L == 0.0);
  CHECK(cfg.scatter.k_real == std::vector<double>{0.3, 0.7, 1.5});
  CHECK(cfg.simulate.n == 4096);
  CHECK(cfg.tolerance_overrides.empty());
}

TEST_CASE("full config round-trips every section") {
  const ScenarioConfig cfg = parse_scenario(R"({
    "spectral_data": [
      {"k": {"re": 0.1, "im": 0.5}, "c": {"re": 1, "im": 0}, "d": {"re": 2, "im": 0}}
    ],
    "grid": {"x": {"start": -10, "stop": 10, "n": 41}, "t": {"start": 0, "stop": 1, "n": 3}},
    "verify": {"stencil_h": 0.02, "zc_k": [{"re": 1, "im": 1}],
               "mass_times": [0, 1, 2], "mass_half_width": 80, "closed_form_points": 50},
    "scatter": {"L": 40, "n_steps": 5000, "k": [0.5], "eigen_guesses": [{"re": 0.1, "im": 0.4}],
                "t0": 0.5, "t1": 1.5},
    "simulate": {"L": 20, "n": 256, "dt": 0.01, "T": 0.5, "t0": 0.1, "snapshots": [0.4, 0.2]},
    "tolerances": {"pde_residual": 1e-5}
  })");
  CHECK(cfg.xgrid.n == 41);
  CHECK(cfg.verify.zc_k.size() == 1);
  CHECK(cfg.verify.mass_times.size() == 3);
  CHECK(cfg.verify.mass_half_width == 80.0);
  CHECK(cfg.scatter.n_steps == 5000);
  CHECK(cfg.scatter.eigen_guesses.size() == 1);
  CHECK(cfg.scatter.t0 == 0.5);
  CHECK(cfg.simulate.t0 == 0.1);
  CHECK(cfg.simulate.snapshots == std::vector<double>{0.2, 0.4});  // sorted
  CHECK(cfg.tolerance_overrides.at("pde_residual") == 1e-5);
}

TEST_CASE("parse errors carry the json path") {
  CHECK(expect_config_error("nonsense").find("not valid JSON") != std::string::npos);
  CHECK(expect_config_error("[1,2]").find("top level") != std::string::npos);
  CHECK(expect_config_error("{}").find("$.spectral_data") != std::string::npos);
  CHECK(expect_config_error(R"({"spectral_data": [], "bogus": 1})")
            .find("$.bogus") != std::string::npos);
  CHECK(expect_config_error(R"({"spectral_data": [{"k": 1, "c": {"re":1,"im":0}, "d": {"re":2,"im":0}}]})")
            .find("$.spectral_data[0].k") != std::string::npos);
  CHECK(expect_config_error(R"({"spectral_data": [{"k": {"re": 0.1}, "c": {"re":1,"im":0}, "d": {"re":2,"im":0}}]})")
            .find("re") != std::string::npos);
  CHECK(expect_config_error(R"({"spectral_data": [], "tolerances": {"nope": 1}})")
            .find("$.tolerances.nope") != std::string::npos);
  CHECK(expect_config_error(R"({"spectral_data": [], "grid": {"x": {"start": 1, "stop": 0, "n": 5}}})")
            .find("$.grid.x") != std::string::npos);
  CHECK(expect_config_error(R"({"spectral_data": [], "simulate": {"n": 1000}})")
            .find("$.simulate.n") != std::string::npos);
  CHECK(expect_config_error(R"({"spectral_data": [], "verify": {"zc_k": []}})")
            .find("$.verify.zc_k") != std::string::npos);
  CHECK(expect_config_error(R"({"spectral_data": [], "scatter": {"L": -3}})")
            .find("$.scatter.L") != std::string::npos);

  // Spectral-plane validation is routed through the same error channel.
  CHECK(expect_config_error(R"({
    "spectral_data": [{"k": {"re": 0.2, "im": -0.3}, "c": {"re":1,"im":0}, "d": {"re":2,"im":0}}]
  })").find("$.spectral_data") != std::string::npos);
}

TEST_CASE("missing file is a config error") {
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("soliton subcommand writes deterministic artifacts") {
  ScenarioConfig cfg = parse_scenario(kOneSoliton);
  cfg.xgrid = uniform_grid(-40.0, 0.0, 21);
  cfg.tgrid = uniform_grid(-1.0, 1.0, 3);

  RunOptions a{"scenario_out_a", {}, 1.0};
  RunOptions b{"scenario_out_b", {}, 1.0};
  const RunReport ra = run_scenario(cfg, "soliton", a);
  REQUIRE(ra.checks.size() == 1);
  CHECK(ra.checks[0].name == "field_grid");
  CHECK(ra.checks[0].kind == CheckKind::kInfo);
  CHECK(ra.checks[0].value == 0.0);  // regular branch: no singular samples
  CHECK(ra.all_passed());

  run_scenario(cfg, "soliton", b);
  for (const char* f : {"fields.csv", "q1_abs.dat", "q2_abs.dat", "slice_q1_mid.dat"}) {
    const std::string fa = read_file(std::filesystem::path(a.out_dir) / f);
    CHECK(fa == read_file(std::filesystem::path(b.out_dir) / f));
    CHECK(!fa.empty());
  }
  CHECK(std::filesystem::exists(std::filesystem::path(a.out_dir) / "report.json"));
}

TEST_CASE("verify subcommand passes on an exact solution") {
  ScenarioConfig cfg = parse_scenario(kOneSoliton);
  RunOptions opts{"scenario_out_verify", {}, 1.0};
  const RunReport r = run_scenario(cfg, "verify", opts);
  REQUIRE(r.checks.size() == 5);
  CHECK(r.all_passed());
  CHECK(find_check(r, "closed_form_equivalence").value < 1e-12);
  CHECK(find_check(r, "pde_residual").value < 1e-6);
  // This weak soliton's residual bottoms out at rounding noise, where the
  // halving ratio stops being an order measurement; the check must say so
  // and pass rather than fail on noise.
  CHECK(find_check(r, "pde_residual_convergence").value >= 12.0);
  CHECK(find_check(r, "pde_residual_convergence").note.find("rounding floor") !=
        std::string::npos);
  CHECK(find_check(r, "zero_curvature").value < 1e-6);
  CHECK(find_check(r, "mass_conservation").value < 1e-8);
  CHECK(std::filesystem::exists("scenario_out_verify/residuals.csv"));
  CHECK(std::filesystem::exists("scenario_out_verify/masses.csv"));
}

TEST_CASE("only-filter, overrides and tol-scale gating") {
  ScenarioConfig cfg = parse_scenario(kOneSoliton);

  RunOptions only{"scenario_out_only", {"zero_curvature"}, 1.0};
  const RunReport r1 = run_scenario(cfg, "verify", only);
  REQUIRE(r1.checks.size() == 1);
  CHECK(r1.checks[0].name == "zero_curvature");

  // An override can make a healthy check fail...
  cfg.tolerance_overrides["pde_residual"] = 1e-30;
  RunOptions strict{"scenario_out_strict", {"pde_residual"}, 1.0};
  const RunReport r2 = run_scenario(cfg, "verify", strict);
  CHECK(!r2.all_passed());

  // ...and tol-scale > 1 loosens it back (upper bounds are multiplied).
  RunOptions loose{"scenario_out_loose", {"pde_residual"}, 1e25};
  const RunReport r3 = run_scenario(cfg, "verify", loose);
  CHECK(r3.all_passed());
  CHECK(r3.checks[0].tolerance == 1e-30 * 1e25);

  // Lower bounds are divided: scaling by 0.5 demands a ratio of 24, which a
  // 4th order stencil (ratio ~ 16) cannot meet. Needs data whose residual
  // stays above the rounding floor, or the ratio is not measured at all.
  const ScenarioConfig strong_cfg = parse_scenario(kStrongSoliton);
  RunOptions tight{"scenario_out_tight", {"pde_residual_convergence"}, 0.5};
  const RunReport r4 = run_scenario(strong_cfg, "verify", tight);
  CHECK(!r4.all_passed());
  CHECK(r4.checks[0].value > 12.0);
  CHECK(r4.checks[0].value < 24.0);
}

TEST_CASE("library errors inside a check fail it with a note") {
  ScenarioConfig cfg = parse_scenario(kOneSoliton);
  cfg.verify.mass_half_width = 5.0;  // far inside the envelope: no decay
  RunOptions opts{"scenario_out_err", {"mass_conservation"}, 1.0};
  const RunReport r = run_scenario(cfg, "verify", opts);
  REQUIRE(r.checks.size() == 1);
  CHECK(!r.checks[0].passed);
  CHECK(std::isnan(r.checks[0].value));
  CHECK(!r.checks[0].note.empty());

  // The failed check serializes with a null value.
  const auto root = nlohmann::json::parse(report_to_json(r, opts));
  CHECK(root["checks"][0]["value"].is_null());
  CHECK(root["all_pass"] == false);
}

TEST_CASE("scatter subcommand on a fast-decay soliton") {
  ScenarioConfig cfg = parse_scenario(kBigSoliton);
  cfg.scatter.L = 60.0;
  RunOptions opts{"scenario_out_scatter", {}, 1.0};
  const RunReport r = run_scenario(cfg, "scatter", opts);
  REQUIRE(r.checks.size() == 5);
  CHECK(r.all_passed());
  CHECK(find_check(r, "det_unimodular").value < 1e-8);
  CHECK(find_check(r, "sigma_symmetry").value < 1e-8);
  CHECK(find_check(r, "reflectionless").value < 1e-6);
  CHECK(find_check(r, "eigenvalue_roundtrip").value < 1e-6);
  CHECK(find_check(r, "scattering_time_evolution").value < 1e-7);
  CHECK(std::filesystem::exists("scenario_out_scatter/smatrix.csv"));
  CHECK(std::filesystem::exists("scenario_out_scatter/eigenvalues.csv"));
}

TEST_CASE("simulate subcommand at friendly parameters") {
  ScenarioConfig cfg = parse_scenario(kBigSoliton);
  cfg.simulate.L = 30.0;
  cfg.simulate.n = 512;
  cfg.simulate.dt = 5e-3;
  cfg.simulate.T = 0.5;
  cfg.simulate.snapshots = {0.25};
  RunOptions opts{"scenario_out_sim", {}, 1.0};
  const RunReport r = run_scenario(cfg, "simulate", opts);
  REQUIRE(r.checks.size() == 3);
  CHECK(r.all_passed());
  CHECK(find_check(r, "splitstep_linf").value < 1e-4);
  CHECK(find_check(r, "splitstep_mass_drift").value < 1e-12);
  CHECK(find_check(r, "splitstep_dt_convergence").value < 0.5);
  CHECK(std::filesystem::exists("scenario_out_sim/state_initial.csv"));
  CHECK(std::filesystem::exists("scenario_out_sim/snapshot_0.csv"));
  CHECK(std::filesystem::exists("scenario_out_sim/state_final.csv"));
}

TEST_CASE("report json shape") {
  ScenarioConfig cfg = parse_scenario(kOneSoliton);
  cfg.xgrid = uniform_grid(-30.0, -10.0, 11);
  cfg.tgrid = uniform_grid(0.0, 1.0, 2);
  RunOptions opts{"scenario_out_report", {}, 2.0};
  const RunReport r = run_scenario(cfg, "soliton", opts);

  const auto root = nlohmann::json::parse(read_file("scenario_out_report/report.json"));
  CHECK(root["subcommand"] == "soliton");
  CHECK(root["all_pass"] == true);
  REQUIRE(root["checks"].is_array());
  CHECK(root["checks"][0]["name"] == "field_grid");
  CHECK(root["checks"][0]["kind"] == "info");
  CHECK(root["meta"]["tol_scale"] == 2.0);
  CHECK(root["meta"].contains("version"));
  CHECK(root["meta"]["elapsed_seconds"].contains("field_grid"));
  // In-memory serialization matches the file byte for byte apart from timing;
  // easiest stable assertion: same parsed check set.
  const auto again = nlohmann::json::parse(report_to_json(r, opts));
  CHECK(again["checks"] == root["checks"]);
}

TEST_CASE("unknown subcommand is rejected") {
  const ScenarioConfig cfg = parse_scenario(kOneSoliton);
  CHECK_THROWS_AS(run_scenario(cfg, "bogus", RunOptions{}), InvalidInputError);
}
