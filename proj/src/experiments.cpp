#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

#include "nvsoliton/cli.hpp"
#include "nvsoliton/error.hpp"
#include "nvsoliton/identities.hpp"
#include "nvsoliton/kdv.hpp"
#include "nvsoliton/nv_evolution.hpp"

namespace nvsoliton::cli {
namespace {

namespace fs = std::filesystem;

// Single writer per file; 17 significant digits so CSVs round-trip.
class CsvWriter {
 public:
  CsvWriter(const RunConfig& config, RunResult& result, const std::string& name, const std::string& header)
      : out_(config.output_dir / name) {
    if (!out_) throw InvalidInput("cannot write " + (config.output_dir / name).string());
    out_ << header << "\n" << std::setprecision(17);
    result.artifacts.push_back(name);
  }

  template <typename... Ts>
  void row(const Ts&... values) {
    int i = 0;
    ((out_ << (i++ ? "," : "") << values), ...);
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

void add_check(RunResult& result, const std::string& name, double value, double threshold, bool passed) {
  result.checks.push_back({name, passed, value, threshold});
}

double tolerance_or(const RunConfig& config, double fallback) {
  return config.tolerance > 0.0 ? config.tolerance : fallback;
}

Grid2D grid_of(const RunConfig& config) { return Grid2D(config.side_length, config.points); }

Potential localized_potential(const RunConfig& config) {
  if (!config.potential.localized())
    throw InvalidInput("experiment needs a localized potential; kdv-line is x2-independent");
  return sample_potential(config.potential, grid_of(config));
}

void write_amplitude(const RunConfig& config, RunResult& result, const std::string& name,
                     const ScatteringAmplitude& f) {
  CsvWriter csv(config, result, name, "theta_k,theta_l,re_f,im_f");
  for (int a = 0; a < f.angles_per_axis; ++a)
    for (int b = 0; b < f.angles_per_axis; ++b) csv.row(f.angle(a), f.angle(b), f.at(a, b).real(), f.at(a, b).imag());
}

nlohmann::json solver_summary(const ScatteringAmplitude& f) {
  int iterations = 0;
  double residual = 0.0;
  double condition = 1.0;
  std::vector<std::string> warnings;
  for (const auto& s : f.stats) {
    iterations = std::max(iterations, s.iterations);
    residual = std::max(residual, s.relative_residual);
    condition = std::max(condition, s.condition_estimate);
    for (const auto& w : s.warnings)
      if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
  }
  return {{"max_iterations", iterations},
          {"max_relative_residual", residual},
          {"max_condition_estimate", condition},
          {"warnings", warnings}};
}

nlohmann::json potential_summary(const Potential& v) {
  return {{"sup_norm", v.sup_norm},
          {"decay_alpha", v.decay.alpha},
          {"super_exponential", v.decay.super_exponential},
          {"decay_certified", v.decay_certified},
          {"decay_note", v.decay_certified ? "analytic family" : "unverified decay"}};
}

double relative_sup_error(std::span<const cplx> actual, std::span<const cplx> expected) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t q = 0; q < actual.size(); ++q) {
    diff = std::max(diff, std::abs(actual[q] - expected[q]));
    scale = std::max(scale, std::abs(expected[q]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

void run_scatter(const RunConfig& config, RunResult& result) {
  const Potential v = localized_potential(config);
  const LippmannSchwinger solver(v, config.energy, config.solver);
  const ScatteringAmplitude f = compute_amplitude(solver, config.angles);
  write_amplitude(config, result, "amplitude.csv", f);
  {
    CsvWriter xy(config, result, "far_field_k0.csv", "theta_l,abs_f");
    for (int b = 0; b < f.angles_per_axis; ++b) xy.row(f.angle(b), std::abs(f.at(0, b)));
  }

  bool finite = true;
  for (const auto& s : f.samples) finite = finite && std::isfinite(s.real()) && std::isfinite(s.imag());
  const double second = f.max_second_difference();
  const auto stats = solver_summary(f);
  add_check(result, "amplitude_finite", finite ? 0.0 : 1.0, 0.0, finite);
  add_check(result, "continuity_proxy_finite", second, 0.0, std::isfinite(second));
  const double residual = stats["max_relative_residual"];
  add_check(result, "solver_residual", residual, config.solver.tolerance, residual <= config.solver.tolerance);

  result.summary["sup_f"] = amplitude_norm(f);
  result.summary["max_second_difference"] = second;
  result.summary["active_cells"] = solver.active_cells();
  result.summary["solver"] = stats;
  result.summary["potential"] = potential_summary(v);
}

void run_verify_translation(const RunConfig& config, RunResult& result) {
  const double tol = tolerance_or(config, 1e-3);
  result.tolerances["phase_law_relative"] = tol;
  const Potential v = localized_potential(config);
  const Potential v_shifted = sample_potential(translate_spec(config.potential, config.shift), grid_of(config));
  const ScatteringAmplitude f = compute_amplitude(v, config.energy, config.angles, config.solver);
  const ScatteringAmplitude g = compute_amplitude(v_shifted, config.energy, config.angles, config.solver);

  std::vector<cplx> predicted(f.samples.size());
  const double r = std::sqrt(config.energy);
  CsvWriter csv(config, result, "translation.csv", "theta_k,theta_l,re_f,im_f,re_f_shifted,im_f_shifted,re_pred,im_pred");
  for (int a = 0; a < f.angles_per_axis; ++a)
    for (int b = 0; b < f.angles_per_axis; ++b) {
      const Vec2 k{r * std::cos(f.angle(a)), r * std::sin(f.angle(a))};
      const Vec2 l{r * std::cos(f.angle(b)), r * std::sin(f.angle(b))};
      const std::size_t q = static_cast<std::size_t>(a) * f.angles_per_axis + b;
      predicted[q] = translation_phase(config.shift, k, l) * f.samples[q];
      csv.row(f.angle(a), f.angle(b), f.samples[q].real(), f.samples[q].imag(), g.samples[q].real(),
              g.samples[q].imag(), predicted[q].real(), predicted[q].imag());
    }
  const double err = relative_sup_error(g.samples, predicted);
  add_check(result, "translation_phase_law", err, tol, err <= tol);
  result.summary["relative_error"] = err;
  result.summary["sup_f"] = amplitude_norm(f);
  result.summary["shift"] = {config.shift.x1, config.shift.x2};
  result.summary["solver"] = solver_summary(f);
}

void run_verify_evolution(const RunConfig& config, RunResult& result) {
  const double tol = tolerance_or(config, 5e-2);
  result.tolerances["phase_law_relative"] = tol;
  const Potential v0 = localized_potential(config);
  EvolutionOptions options;
  options.dt = config.dt;
  const EvolutionResult evolved = evolve(v0, config.energy, config.final_time, options);
  {
    CsvWriter diag(config, result, "diagnostics.csv", "t,mean,l2,sup");
    for (const auto& d : evolved.diagnostics) diag.row(d.t, d.mean, d.l2, d.sup);
  }
  write_field_csv(config.output_dir / "state_T.csv", real_part(evolved.state.v));
  result.artifacts.push_back("state_T.csv");

  const Potential vT = sample_potential(PotentialSpec::custom_grid(real_part(evolved.state.v)), grid_of(config));
  const ScatteringAmplitude f0 = compute_amplitude(v0, config.energy, config.angles, config.solver);
  const ScatteringAmplitude fT = compute_amplitude(vT, config.energy, config.angles, config.solver);

  std::vector<cplx> predicted(f0.samples.size());
  const double r = std::sqrt(config.energy);
  CsvWriter csv(config, result, "evolution.csv", "theta_k,theta_l,re_f0,im_f0,re_fT,im_fT,re_pred,im_pred");
  for (int a = 0; a < f0.angles_per_axis; ++a)
    for (int b = 0; b < f0.angles_per_axis; ++b) {
      const Vec2 k{r * std::cos(f0.angle(a)), r * std::sin(f0.angle(a))};
      const Vec2 l{r * std::cos(f0.angle(b)), r * std::sin(f0.angle(b))};
      const std::size_t q = static_cast<std::size_t>(a) * f0.angles_per_axis + b;
      predicted[q] = evolution_phase(evolved.state.t, k, l) * f0.samples[q];
      csv.row(f0.angle(a), f0.angle(b), f0.samples[q].real(), f0.samples[q].imag(), fT.samples[q].real(),
              fT.samples[q].imag(), predicted[q].real(), predicted[q].imag());
    }
  const double err = relative_sup_error(fT.samples, predicted);
  add_check(result, "evolution_phase_law", err, tol, err <= tol);

  const double drift = std::abs(evolved.diagnostics.back().mean - evolved.diagnostics.front().mean);
  const double drift_tol = 1e-12 * std::max(1.0, v0.sup_norm);
  result.tolerances["mean_drift"] = drift_tol;
  add_check(result, "mean_conserved", drift, drift_tol, drift <= drift_tol);

  result.summary["relative_error"] = err;
  result.summary["final_time"] = evolved.state.t;
  result.summary["dt"] = evolved.dt;
  result.summary["steps"] = evolved.steps;
  result.summary["constraint_residual"] = constraint_residual(evolved.state);
  result.summary["solver"] = solver_summary(fT);
}

void run_soliton_test(const RunConfig& config, RunResult& result) {
  const Potential v = localized_potential(config);
  const ScatteringAmplitude f = compute_amplitude(v, config.energy, config.angles, config.solver);
  write_amplitude(config, result, "amplitude.csv", f);

  const PipelineTolerances tolerances{config.tol_r, config.tol_f};
  CsvWriter csv(config, result, "sweep.csv", "c1,c2,residual,max_f,m1,m2,median_phi,consistent,forbidden");
  nlohmann::json reports = nlohmann::json::array();
  double min_residual = std::numeric_limits<double>::infinity();
  int forbidden = 0;
  int consistent = 0;
  for (const Vec2 c : config.velocities) {
    const Theorem1Report report = theorem1_report(config.potential, v, f, c, config.energy, tolerances);
    csv.row(c.x1, c.x2, report.residual, report.max_amplitude, report.verdict.m1, report.verdict.m2,
            report.verdict.median_phi, report.verdict.consistent_with_traveling_wave ? 1 : 0,
            report.forbidden_outcome ? 1 : 0);
    min_residual = std::min(min_residual, report.residual);
    forbidden += report.forbidden_outcome ? 1 : 0;
    consistent += report.verdict.consistent_with_traveling_wave ? 1 : 0;
    auto j = to_json(report);
    j["amplitude_csv"] = "amplitude.csv";
    reports.push_back(std::move(j));
  }

  add_check(result, "no_forbidden_outcome", forbidden, 0.0, forbidden == 0);
  if (!v.is_zero()) add_check(result, "residual_above_tol_r", min_residual, config.tol_r, min_residual > config.tol_r);
  result.summary["trivial"] = v.is_zero();
  result.summary["min_residual"] = min_residual;
  result.summary["sup_f"] = amplitude_norm(f);
  result.summary["verdicts_consistent"] = consistent;
  result.summary["velocities"] = config.velocities.size();
  result.summary["reports"] = std::move(reports);
  result.summary["potential"] = potential_summary(v);
}

void run_kdv_check(const RunConfig& config, RunResult& result) {
  const double tol = tolerance_or(config, 1e-6);
  result.tolerances["residual"] = tol;
  const Grid1D grid(config.side_length, config.points);
  const double kappa = config.potential.kappa;
  const double phi = config.potential.phi;
  {
    CsvWriter csv(config, result, "profile.csv", "x,u");
    for (int i = 0; i < grid.points; ++i) csv.row(grid.node(i), kdv_soliton_profile(kappa, phi, grid.node(i)));
  }
  const double soliton = kdv_residual_soliton(kappa, phi, grid);
  add_check(result, "kdv_soliton_residual", soliton, tol, soliton <= tol);
  result.summary["soliton_residual"] = soliton;
  const auto u = kdv_soliton(kappa, phi);
  for (double e : {0.0, config.energy}) {
    const double reduction = kdv_reduction_map_check(u, e, grid);
    std::ostringstream name;
    name << "reduction_residual_E" << e;
    add_check(result, name.str(), reduction, tol, reduction <= tol);
    result.summary[name.str()] = reduction;
  }
}

void run_torus_check(const RunConfig& config, RunResult& result) {
  const double tol = tolerance_or(config, 1e-12);
  result.tolerances["identity"] = tol;
  const double e = config.energy;
  const double r = std::sqrt(e);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> time(0.0, 1.0);

  double translation = 0.0, evolution = 0.0, round_trip = 0.0, imag_phi = 0.0, antisym = 0.0;
  for (int s = 0; s < config.samples; ++s) {
    const double a = angle(rng), b = angle(rng);
    const Vec2 k{r * std::cos(a), r * std::sin(a)};
    const Vec2 l{r * std::cos(b), r * std::sin(b)};
    const Vec2 y{coord(rng), coord(rng)};
    const Vec2 c{coord(rng), coord(rng)};
    const double t = time(rng);
    const TorusPoint lk = torus_from_k(k, e), ll = torus_from_k(l, e);
    translation = std::max(translation, std::abs(translation_phase(y, k, l) - translation_phase_torus(y, lk, ll, e)));
    evolution = std::max(evolution, std::abs(evolution_phase(t, k, l) - evolution_phase_torus(t, lk, ll, e)));
    const Vec2 back = k_from_torus(lk, e);
    round_trip = std::max(round_trip, std::hypot(back.x1 - k.x1, back.x2 - k.x2));
    imag_phi = std::max(imag_phi, std::abs(traveling_phase_mismatch_complex(lk, ll, c, e).imag()));
    antisym = std::max(antisym, std::abs(traveling_phase_mismatch(lk, ll, c, e) + traveling_phase_mismatch(ll, lk, c, e)));
  }
  const double scale = std::max(1.0, e * r);
  const double round_tol = tol * std::max(1.0, r);
  add_check(result, "translation_cartesian_vs_torus", translation, tol, translation <= tol);
  add_check(result, "evolution_cartesian_vs_torus", evolution, tol * scale, evolution <= tol * scale);
  add_check(result, "torus_round_trip", round_trip, round_tol, round_trip <= round_tol);
  add_check(result, "phi_real", imag_phi, tol * scale, imag_phi <= tol * scale);
  add_check(result, "phi_antisymmetric", antisym, tol * scale, antisym <= tol * scale);

  const auto gram = gram_matrix(0.0, 2.0 * M_PI, 64);
  double orth = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) orth = std::max(orth, std::abs(gram[i * 5 + j] - (i == j ? 1.0 : 0.0)));
  add_check(result, "full_circle_gram_orthogonality", orth, tol, orth <= tol);

  CsvWriter csv(config, result, "gram.csv", "arc,sigma_min");
  for (double arc : {0.1, 0.5, M_PI, 2.0 * M_PI}) {
    const double sigma = linear_independence_gram(0.0, arc, 256);
    csv.row(arc, sigma);
    std::ostringstream name;
    name << "gram_sigma_min_arc_" << arc;
    add_check(result, name.str(), sigma, 0.0, sigma > 0.0);
  }
  result.summary["samples"] = config.samples;
  result.summary["seed"] = config.seed;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace

bool RunResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void execute(const RunConfig& config, RunResult& result) {
  fs::create_directories(config.output_dir);
  result.tolerances["tol_r"] = config.tol_r;
  result.tolerances["tol_f"] = config.tol_f;
  result.tolerances["solver_tol"] = config.solver.tolerance;
  switch (config.experiment) {
    case Experiment::Scatter: run_scatter(config, result); break;
    case Experiment::VerifyTranslation: run_verify_translation(config, result); break;
    case Experiment::VerifyEvolution: run_verify_evolution(config, result); break;
    case Experiment::SolitonTest: run_soliton_test(config, result); break;
    case Experiment::KdvCheck: run_kdv_check(config, result); break;
    case Experiment::TorusCheck: run_torus_check(config, result); break;
  }
}

RunResult execute(const RunConfig& config) {
  RunResult result;
  execute(config, result);
  return result;
}

int run(const KeyValues& keys, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  nlohmann::json manifest = {
      {"schema_version", kSchemaVersion},
      {"toolkit_version", kToolkitVersion},
      {"started_at", utc_timestamp()},
      {"experiment", keys.count("experiment") ? keys.at("experiment") : ""},
  };
  RunResult result;
  int code = kPassed;
  std::string error;
  fs::path output_dir = resolve_output_dir(keys);
  nlohmann::json config_echo = keys;

  try {
    const RunConfig config = make_run_config(keys);
    output_dir = config.output_dir;
    config_echo = config.echo;
    execute(config, result);
    code = result.passed() ? kPassed : kCheckFailed;
  } catch (const InvalidInput& e) {
    code = kInvalidInput;
    error = e.what();
  } catch (const NumericalFailure& e) {
    code = kNumericalFailure;
    error = e.what();
  } catch (const std::exception& e) {
    code = kNumericalFailure;
    error = std::string("unexpected failure: ") + e.what();
  }

  static const char* kStatus[] = {"passed", "check-failed", "invalid-input", "numerical-failure"};
  manifest["status"] = kStatus[code];
  manifest["exit_code"] = code;
  manifest["error"] = error.empty() ? nlohmann::json(nullptr) : nlohmann::json(error);
  manifest["config"] = config_echo;
  manifest["tolerances"] = result.tolerances;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : result.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold}});
  manifest["checks"] = checks;
  manifest["artifacts"] = result.artifacts;
  manifest["summary"] = result.summary;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!error.empty()) err << "nvsoliton: " << kStatus[code] << ": " << error << "\n";
  for (const auto& c : result.checks)
    if (!c.passed) err << "nvsoliton: check '" << c.name << "' failed: " << c.value << " vs " << c.threshold << "\n";

  std::error_code ec;
  fs::create_directories(output_dir, ec);
  std::ofstream out(output_dir / "manifest.json");
  if (out) {
    out << manifest.dump(2) << "\n";
  } else {
    err << "nvsoliton: cannot write manifest to " << (output_dir / "manifest.json").string() << "\n";
  }
  return code;
}

}  // namespace nvsoliton::cli
