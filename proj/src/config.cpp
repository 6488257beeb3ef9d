#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "nvsoliton/cli.hpp"
#include "nvsoliton/error.hpp"

namespace nvsoliton::cli {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty() || !std::isfinite(value))
    throw InvalidInput("key '" + key + "': expected a finite number, got '" + text + "'");
  return value;
}

long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw InvalidInput("key '" + key + "': expected an integer, got '" + text + "'");
  return value;
}

Vec2 to_vec2(const std::string& key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InvalidInput("key '" + key + "': expected 'x1,x2', got '" + text + "'");
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::string format_number(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

std::string get(const KeyValues& keys, const std::string& key, const std::string& fallback) {
  const auto it = keys.find(key);
  return it == keys.end() ? fallback : it->second;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog = {
      {Experiment::Scatter, "scatter", "scattering amplitude f(k,l)",
       "solve the Lippmann-Schwinger equation for M incident directions and export f on the M x M angle grid"},
      {Experiment::VerifyTranslation, "verify-translation", "Lemma 1",
       "translation phase law: f for V(x - y) equals e^{i y.(k-l)} f for V"},
      {Experiment::VerifyEvolution, "verify-evolution", "Lemma 2",
       "evolve V under NV to time T and compare f(T) with the cubic phase law"},
      {Experiment::SolitonTest, "soliton-test", "Theorem 1",
       "traveling-wave residual and transparency verdict over a velocity sweep"},
      {Experiment::KdvCheck, "kdv-check", "KdV reduction",
       "soliton residual of KdV and the x2-independent reduction map at E = 0 and E"},
      {Experiment::TorusCheck, "torus-check", "torus identities",
       "Cartesian vs torus phase laws, Phi realness/antisymmetry and the Gram certificate"},
  };
  return catalog;
}

std::string list_experiments() {
  std::ostringstream out;
  for (const auto& e : experiment_catalog())
    out << std::left << std::setw(20) << e.name << std::setw(30) << ("[" + e.anchor + "]") << e.description << "\n";
  return out.str();
}

std::string nearest_match(const std::string& word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(word, c);
    if (d < best_distance) {
      best_distance = d;
      best = c;
    }
  }
  return best;
}

Experiment parse_experiment(const std::string& name) {
  std::vector<std::string> names;
  for (const auto& e : experiment_catalog()) {
    if (e.name == name) return e.id;
    names.push_back(e.name);
  }
  throw InvalidInput("unknown experiment '" + name + "'; did you mean '" + nearest_match(name, names) + "'?");
}

std::string to_string(Experiment experiment) {
  for (const auto& e : experiment_catalog())
    if (e.id == experiment) return e.name;
  return "unknown";
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues keys;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config line " + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidInput("config line " + std::to_string(number) + ": empty key");
    keys[key] = trim(line.substr(eq + 1));
  }
  return keys;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path.string());
  return parse_key_values(in);
}

KeyValues merge(KeyValues base, const KeyValues& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "family", "amplitude", "sigma", "center", "bumps",    "kappa",      "phi",
      "grid_file",  "E",      "L",         "N",     "M",      "T",        "dt",         "y",
      "c",          "tol",    "tol_r",     "tol_f", "solver_tol", "diagonal", "backend", "samples",
      "seed",       "output",
  };
  return keys;
}

PotentialSpec parse_potential_spec(const KeyValues& keys) {
  const PotentialFamily family = parse_family(get(keys, "family", "gaussian"));
  const double amplitude = to_double("amplitude", get(keys, "amplitude", "1e-3"));
  const double sigma = to_double("sigma", get(keys, "sigma", "1"));
  const Vec2 center = to_vec2("center", get(keys, "center", "0,0"));
  switch (family) {
    case PotentialFamily::Gaussian:
      return PotentialSpec::gaussian(amplitude, sigma, center);
    case PotentialFamily::ExponentialBump:
      return PotentialSpec::exponential_bump(amplitude, sigma, center);
    case PotentialFamily::MultiGaussian: {
      std::vector<Bump> bumps;
      for (const auto& term : split(get(keys, "bumps", ""), ';')) {
        if (term.empty()) continue;
        const auto fields = split(term, ':');
        if (fields.size() != 4) throw InvalidInput("key 'bumps': each term must be 'A:sigma:x1:x2'");
        bumps.push_back({to_double("bumps", fields[0]), to_double("bumps", fields[1]),
                         {to_double("bumps", fields[2]), to_double("bumps", fields[3])}});
      }
      return PotentialSpec::multi_gaussian(std::move(bumps));
    }
    case PotentialFamily::KdvLine:
      return PotentialSpec::kdv_line(to_double("kappa", get(keys, "kappa", "1")),
                                     to_double("phi", get(keys, "phi", "0")));
    case PotentialFamily::CustomGrid: {
      const std::string file = get(keys, "grid_file", "");
      if (file.empty()) throw InvalidInput("custom-grid needs grid_file");
      return PotentialSpec::custom_grid(read_field_csv(file));
    }
  }
  throw InvalidInput("unsupported potential family");
}

KeyValues serialize_potential_spec(const PotentialSpec& spec, const std::string& grid_file) {
  KeyValues keys;
  keys["family"] = to_string(spec.family);
  switch (spec.family) {
    case PotentialFamily::Gaussian:
    case PotentialFamily::ExponentialBump: {
      const Bump& b = spec.bumps.front();
      keys["amplitude"] = format_number(b.amplitude);
      keys["sigma"] = format_number(b.width);
      keys["center"] = format_number(b.center.x1) + "," + format_number(b.center.x2);
      break;
    }
    case PotentialFamily::MultiGaussian: {
      std::string terms;
      for (const auto& b : spec.bumps) {
        if (!terms.empty()) terms += ";";
        terms += format_number(b.amplitude) + ":" + format_number(b.width) + ":" + format_number(b.center.x1) + ":" +
                 format_number(b.center.x2);
      }
      keys["bumps"] = terms;
      break;
    }
    case PotentialFamily::KdvLine:
      keys["kappa"] = format_number(spec.kappa);
      keys["phi"] = format_number(spec.phi);
      break;
    case PotentialFamily::CustomGrid:
      keys["grid_file"] = grid_file;
      break;
  }
  return keys;
}

void write_field_csv(const std::filesystem::path& path, const Field2D& field) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << "x1,x2,value\n" << std::setprecision(17);
  const Grid2D& g = field.grid();
  for (int i2 = 0; i2 < g.points(); ++i2)
    for (int i1 = 0; i1 < g.points(); ++i1) out << g.node(i1) << "," << g.node(i2) << "," << field(i1, i2).real() << "\n";
}

Field2D read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open field CSV " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x1,x2,value")
    throw InvalidInput("field CSV " + path.string() + ": expected header 'x1,x2,value'");
  std::vector<double> x1, x2, value;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) throw InvalidInput("field CSV: expected 3 columns in '" + line + "'");
    x1.push_back(to_double("x1", fields[0]));
    x2.push_back(to_double("x2", fields[1]));
    value.push_back(to_double("value", fields[2]));
  }
  const auto n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(value.size()))));
  if (n < 2 || static_cast<std::size_t>(n) * n != value.size())
    throw InvalidInput("field CSV: row count is not a perfect square");
  const double h = x1[1] - x1[0];
  const Grid2D grid(n * h, n);
  Field2D field(grid);
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) {
      const std::size_t q = grid.index(i1, i2);
      if (std::abs(x1[q] - grid.node(i1)) > 1e-9 * grid.side_length() ||
          std::abs(x2[q] - grid.node(i2)) > 1e-9 * grid.side_length())
        throw InvalidInput("field CSV: node coordinates do not form the grid [-L/2, L/2)^2 in storage order");
      field(i1, i2) = value[q];
    }
  return field;
}

std::vector<Vec2> default_velocities() {
  std::vector<Vec2> velocities;
  for (double speed : {0.5, 1.0, 2.0})
    for (int j = 0; j < 8; ++j) {
      const double a = 2.0 * M_PI * j / 8.0;
      velocities.push_back({speed * std::cos(a), speed * std::sin(a)});
    }
  return velocities;
}

std::filesystem::path resolve_output_dir(const KeyValues& keys) {
  std::filesystem::path dir = get(keys, "output", "runs/" + get(keys, "experiment", "unnamed"));
  if (dir.is_relative()) {
    const char* root = std::getenv(kOutputRootVariable);
    if (root != nullptr && *root != '\0') dir = std::filesystem::path(root) / dir;
  }
  return dir;
}

RunConfig make_run_config(const KeyValues& keys) {
  const auto& allowed = known_keys();
  for (const auto& [k, v] : keys)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw InvalidInput("unknown key '" + k + "'; did you mean '" + nearest_match(k, allowed) + "'?");

  const auto experiment = keys.find("experiment");
  if (experiment == keys.end()) throw InvalidInput("missing key 'experiment'");

  RunConfig config;
  config.experiment = parse_experiment(experiment->second);
  config.energy = to_double("E", get(keys, "E", "1"));
  config.side_length = to_double("L", get(keys, "L", "20"));
  config.points = static_cast<int>(to_integer("N", get(keys, "N", "128")));
  config.angles = static_cast<int>(to_integer("M", get(keys, "M", "64")));
  config.final_time = to_double("T", get(keys, "T", "0.05"));
  config.dt = to_double("dt", get(keys, "dt", "0"));
  config.shift = to_vec2("y", get(keys, "y", "1,0"));
  config.tolerance = to_double("tol", get(keys, "tol", "-1"));
  config.tol_r = to_double("tol_r", get(keys, "tol_r", "1e-8"));
  config.tol_f = to_double("tol_f", get(keys, "tol_f", "1e-9"));
  config.solver.tolerance = to_double("solver_tol", get(keys, "solver_tol", "1e-10"));
  config.samples = static_cast<int>(to_integer("samples", get(keys, "samples", "1000")));
  config.seed = static_cast<unsigned>(to_integer("seed", get(keys, "seed", "12345")));

  const std::string diagonal = get(keys, "diagonal", "lattice");
  if (diagonal == "lattice") config.solver.diagonal = DiagonalRule::LatticeCorrected;
  else if (diagonal == "cell-average") config.solver.diagonal = DiagonalRule::CellAverage;
  else throw InvalidInput("key 'diagonal': expected 'lattice' or 'cell-average'");
  const std::string backend = get(keys, "backend", "fft-gmres");
  if (backend == "fft-gmres") config.solver.backend = SolverBackend::FftGmres;
  else if (backend == "dense-lu") config.solver.backend = SolverBackend::DenseLu;
  else throw InvalidInput("key 'backend': expected 'fft-gmres' or 'dense-lu'");

  const std::string velocities = get(keys, "c", "");
  for (const auto& item : split(velocities, ';'))
    if (!item.empty()) config.velocities.push_back(to_vec2("c", item));
  if (config.velocities.empty()) config.velocities = default_velocities();

  if (!(config.energy > 0.0)) throw InvalidInput("E must be positive");
  if (!(config.side_length > 0.0)) throw InvalidInput("L must be positive");
  if (config.points < 8 || config.points % 2 != 0) throw InvalidInput("N must be even and >= 8");
  if (config.angles < 16) throw InvalidInput("M must be >= 16");
  if (!(config.final_time >= 0.0)) throw InvalidInput("T must be >= 0");
  if (!(config.dt >= 0.0)) throw InvalidInput("dt must be >= 0");
  if (!(config.tol_r > 0.0) || !(config.tol_f > 0.0)) throw InvalidInput("tol_r and tol_f must be positive");
  if (!(config.solver.tolerance > 0.0)) throw InvalidInput("solver_tol must be positive");
  if (config.samples < 1) throw InvalidInput("samples must be >= 1");

  if (config.experiment == Experiment::KdvCheck)
    config.potential = PotentialSpec::kdv_line(to_double("kappa", get(keys, "kappa", "1")),
                                               to_double("phi", get(keys, "phi", "0")));
  else if (config.experiment != Experiment::TorusCheck)
    config.potential = parse_potential_spec(keys);

  config.output_dir = resolve_output_dir(keys);
  config.echo = keys;
  // Echo effective defaults too, so the manifest records every parameter.
  const KeyValues defaults = {
      {"family", "gaussian"}, {"amplitude", "1e-3"}, {"sigma", "1"}, {"center", "0,0"}, {"E", "1"},
      {"L", "20"}, {"N", "128"}, {"M", "64"}, {"T", "0.05"}, {"dt", "0"}, {"y", "1,0"}, {"tol_r", "1e-8"},
      {"tol_f", "1e-9"}, {"solver_tol", "1e-10"}, {"diagonal", "lattice"}, {"backend", "fft-gmres"},
      {"samples", "1000"}, {"seed", "12345"}, {"kappa", "1"}, {"phi", "0"},
  };
  for (const auto& [k, v] : defaults) config.echo.emplace(k, v);
  config.echo["output"] = config.output_dir.string();
  return config;
}

}  // namespace nvsoliton::cli
