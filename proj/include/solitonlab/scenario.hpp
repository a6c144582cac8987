#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solitonlab/grid.hpp"
#include "solitonlab/spectral_data.hpp"

namespace solitonlab {

// Parsed scenario file. One config drives every subcommand; sections that a
// subcommand does not use are simply ignored, and every knob has a default
// so a minimal file is just {"spectral_data": [...]}.
struct VerifyParams {
  double stencil_h = 0.01;
  std::vector<Cx> zc_k = {{1.0, 0.5}, {-0.7, 0.3}, {0.2, 1.1}, {-1.2, 0.8}, {0.5, 0.25}};
  std::vector<double> mass_times = {0.0, 5.0};
  double mass_half_width = 0.0;  // 0 = derive from the data
  std::size_t closed_form_points = 1000;
};

struct ScatterParams {
  double L = 0.0;          // 0 = auto from boundary decay
  std::size_t n_steps = 0; // 0 = auto from the phase-error model
  std::vector<double> k_real = {0.3, 0.7, 1.5};
  std::vector<Cx> eigen_guesses;  // empty = displace the configured data
  double t0 = 0.0;
  double t1 = 1.0;
};

struct SimulateParams {
  double L = 100.0;
  std::size_t n = 4096;
  double dt = 1e-3;
  double T = 5.0;
  double t0 = 0.0;
  std::vector<double> snapshots;
};

struct ScenarioConfig {
  SolitonData data;
  Grid1D xgrid{-100.0, 100.0, 401};
  Grid1D tgrid{-50.0, 50.0, 101};
  VerifyParams verify;
  ScatterParams scatter;
  SimulateParams simulate;
  std::map<std::string, double> tolerance_overrides;
};

// Strict parser: unknown keys are errors, complex numbers are {"re": , "im": }
// objects, and every reported problem names the JSON path. Throws ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);

enum class CheckKind {
  kUpperBound,  // pass iff value <= tolerance (scaled up by tol-scale)
  kLowerBound,  // pass iff value >= tolerance (scaled down by tol-scale)
  kInfo,        // recorded, never gates
};

struct CheckResult {
  std::string name;
  CheckKind kind = CheckKind::kUpperBound;
  bool passed = true;
  double value = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string note;
};

struct RunReport {
  std::string subcommand;
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

struct RunOptions {
  std::string out_dir = "out";
  std::vector<std::string> only;  // empty = every check of the subcommand
  double tol_scale = 1.0;
};

// Executes one subcommand (soliton | verify | scatter | simulate), writes
// its artifacts under out_dir and returns the check report. Output files
// are deterministic for a fixed config; the report JSON carries timing in
// a separate meta block.
RunReport run_scenario(const ScenarioConfig& cfg, const std::string& subcommand,
                       const RunOptions& opts);

// Serialized report (also written to <out_dir>/report.json by run_scenario).
std::string report_to_json(const RunReport& report, const RunOptions& opts);

}  // namespace solitonlab
