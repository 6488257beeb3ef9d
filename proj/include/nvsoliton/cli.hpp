#pragma once

// Experiment runner behind the `nvsoliton` executable.
//
// Configuration is a flat `key = value` text file ('#' starts a comment);
// command-line flags `--key=value` use the same keys and override the file.
// Every run writes its CSV files and a `manifest.json` into the output
// directory, the manifest also on failure. Exit codes: 0 all checks passed,
// 1 a check failed, 2 invalid input, 3 numerical failure.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvsoliton/grid.hpp"
#include "nvsoliton/potentials.hpp"
#include "nvsoliton/scattering.hpp"

namespace nvsoliton::cli {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kOutputRootVariable = "NVSOLITON_OUTPUT_ROOT";

enum ExitCode : int { kPassed = 0, kCheckFailed = 1, kInvalidInput = 2, kNumericalFailure = 3 };

enum class Experiment { Scatter, VerifyTranslation, VerifyEvolution, SolitonTest, KdvCheck, TorusCheck };

struct ExperimentInfo {
  Experiment id;
  std::string name;
  std::string anchor;
  std::string description;
};

const std::vector<ExperimentInfo>& experiment_catalog();
/// One line per experiment: name, anchor, description.
std::string list_experiments();
/// Throws InvalidInput with a "did you mean" suggestion for unknown names.
Experiment parse_experiment(const std::string& name);
std::string to_string(Experiment experiment);
/// Closest candidate by edit distance (empty if candidates is empty).
std::string nearest_match(const std::string& word, const std::vector<std::string>& candidates);

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines. Throws InvalidInput on malformed lines.
KeyValues parse_key_values(std::istream& in);
KeyValues read_config_file(const std::filesystem::path& path);
/// Later entries win.
KeyValues merge(KeyValues base, const KeyValues& overrides);
/// Documented keys; anything else is rejected with a suggestion.
const std::vector<std::string>& known_keys();

/// Potential spec from `family` and its parameter keys:
///   gaussian / exponential-bump: amplitude, sigma, center = "x1,x2"
///   multi-gaussian:              bumps = "A:sigma:x1:x2; ..."
///   kdv-line:                    kappa, phi
///   custom-grid:                 grid_file (CSV, see read_field_csv)
PotentialSpec parse_potential_spec(const KeyValues& keys);
/// Inverse of parse_potential_spec for the analytic families (custom grids
/// serialize as family + grid_file, which the caller provides).
KeyValues serialize_potential_spec(const PotentialSpec& spec, const std::string& grid_file = {});

/// Field CSV: header `x1,x2,value`, N*N rows in storage order (x1 fastest).
/// L and N are recovered from the node coordinates.
void write_field_csv(const std::filesystem::path& path, const Field2D& field);
Field2D read_field_csv(const std::filesystem::path& path);

struct RunConfig {
  Experiment experiment = Experiment::Scatter;
  PotentialSpec potential{};
  double energy = 1.0;
  double side_length = 20.0;
  int points = 128;
  int angles = 64;
  double final_time = 0.05;
  double dt = 0.0;  // 0: stability bound
  Vec2 shift{1.0, 0.0};
  std::vector<Vec2> velocities;  // empty: default sweep
  double tolerance = -1.0;       // < 0: per-experiment default
  double tol_r = 1e-8;
  double tol_f = 1e-9;
  SolverOptions solver{};
  int samples = 1000;
  unsigned seed = 12345;
  std::filesystem::path output_dir;
  KeyValues echo;  // every key with its effective value
};

/// Validates ranges (E > 0, N even >= 8, M >= 16, ...). Throws InvalidInput.
RunConfig make_run_config(const KeyValues& keys);

/// Default velocity sweep: 8 directions x speeds {0.5, 1, 2}.
std::vector<Vec2> default_velocities();

/// Output directory for a key set: `output` (relative paths resolve against
/// $NVSOLITON_OUTPUT_ROOT, else the working directory), default runs/<experiment>.
std::filesystem::path resolve_output_dir(const KeyValues& keys);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

/// Executes the experiment and writes all artifacts. Throws on invalid
/// input or numerical failure; check failures are reported in the result.
struct RunResult {
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;  // relative to the output directory
  nlohmann::json summary = nlohmann::json::object();
  nlohmann::json tolerances = nlohmann::json::object();
  bool passed() const;
};
RunResult execute(const RunConfig& config);
/// Same, filling `result` as artifacts are written (kept on exceptions).
void execute(const RunConfig& config, RunResult& result);

/// Full contract: parse, run, write manifest.json, map errors to exit codes.
/// Diagnostics go to `err`.
int run(const KeyValues& keys, std::ostream& err);

}  // namespace nvsoliton::cli
