#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nvsoliton/cli.hpp"
#include "nvsoliton/error.hpp"

using namespace nvsoliton;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nvsoliton_cli_tests" / name;
  fs::remove_all(dir);
  return dir;
}

nlohmann::json read_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  REQUIRE(in);
  return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_keys(cli::KeyValues keys, std::string* diagnostics = nullptr) {
  std::ostringstream err;
  const int code = cli::run(keys, err);
  if (diagnostics) *diagnostics = err.str();
  return code;
}

}  // namespace

TEST_CASE("catalog") {
  CHECK(cli::experiment_catalog().size() == 6);
  const std::string text = cli::list_experiments();
  CHECK(text.find("Lemma 1") != std::string::npos);
  CHECK(text.find("Lemma 2") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  CHECK(cli::nearest_match("verify-evoluton", {"scatter", "verify-evolution", "kdv-check"}) == "verify-evolution");
}

TEST_CASE("key=value parsing") {
  std::istringstream in("# comment\nexperiment = scatter\n  E=2.5 # trailing\n\nN = 64\n");
  const auto keys = cli::parse_key_values(in);
  CHECK(keys.size() == 3);
  CHECK(keys.at("E") == "2.5");
  std::istringstream bad("experiment scatter\n");
  CHECK_THROWS_AS(cli::parse_key_values(bad), InvalidInput);
  const auto merged = cli::merge(keys, {{"E", "1"}});
  CHECK(merged.at("E") == "1");
  CHECK(merged.at("N") == "64");
}

TEST_CASE("run config validation") {
  CHECK_THROWS_AS(cli::make_run_config({{"experiment", "scatter"}, {"E", "-1"}}), InvalidInput);
  CHECK_THROWS_AS(cli::make_run_config({{"experiment", "scatter"}, {"N", "63"}}), InvalidInput);
  CHECK_THROWS_AS(cli::make_run_config({{"experiment", "scatter"}, {"M", "8"}}), InvalidInput);
  CHECK_THROWS_AS(cli::make_run_config({{"experiment", "scatter"}, {"E", "abc"}}), InvalidInput);
  CHECK_THROWS_AS(cli::make_run_config({{"experiment", "scatter"}, {"Energy", "1"}}), InvalidInput);
  CHECK_THROWS_AS(cli::make_run_config({}), InvalidInput);
  try {
    cli::make_run_config({{"experiment", "scater"}});
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("did you mean 'scatter'") != std::string::npos);
  }
  const auto config = cli::make_run_config({{"experiment", "soliton-test"}, {"c", "1,0; 0,2"}});
  CHECK(config.velocities.size() == 2);
  CHECK(config.velocities[1] == Vec2{0.0, 2.0});
  CHECK(cli::default_velocities().size() == 24);
}

TEST_CASE("potential spec serialization round trip") {
  const PotentialSpec multi = PotentialSpec::multi_gaussian({{0.1, 1.0, {1.0, -1.0}}, {0.05, 0.7, {-2.0, 0.5}}});
  const auto keys = cli::serialize_potential_spec(multi);
  const PotentialSpec back = cli::parse_potential_spec(keys);
  REQUIRE(back.bumps.size() == 2);
  CHECK(back.bumps[1].width == 0.7);
  CHECK(back.bumps[1].center == Vec2{-2.0, 0.5});

  const PotentialSpec bump = cli::parse_potential_spec(cli::serialize_potential_spec(PotentialSpec::exponential_bump(0.3, 0.5, {1.0, 2.0})));
  CHECK(bump.family == PotentialFamily::ExponentialBump);
  CHECK(bump.bumps[0].amplitude == 0.3);

  const fs::path dir = scratch("field");
  fs::create_directories(dir);
  const Potential v = sample_potential(PotentialSpec::gaussian(0.2, 1.0), Grid2D(20.0, 32));
  cli::write_field_csv(dir / "v.csv", v.field);
  const PotentialSpec custom = cli::parse_potential_spec(cli::serialize_potential_spec(PotentialSpec::custom_grid(v.field), (dir / "v.csv").string()));
  REQUIRE(custom.samples.has_value());
  CHECK(custom.samples->grid() == v.grid());
  CHECK(sup_norm(*custom.samples - v.field) == 0.0);
}

TEST_CASE("kdv-check writes a passing manifest") {
  const fs::path out = scratch("kdv");
  const int code = run_keys({{"experiment", "kdv-check"}, {"kappa", "1"}, {"L", "40"}, {"N", "1024"}, {"output", out.string()}});
  CHECK(code == 0);
  const auto m = read_manifest(out);
  CHECK(m["schema_version"] == cli::kSchemaVersion);
  CHECK(m["status"] == "passed");
  bool found = false;
  for (const auto& c : m["checks"])
    if (c["name"] == "kdv_soliton_residual") {
      found = true;
      CHECK(c["value"].get<double>() <= 1e-6);
    }
  CHECK(found);
  for (const auto& a : m["artifacts"]) CHECK(fs::exists(out / a.get<std::string>()));
  CHECK(m["tolerances"].contains("residual"));
  CHECK(m["config"]["kappa"] == "1");
}

TEST_CASE("invalid input exits 2 and still writes a manifest") {
  const fs::path out = scratch("bad_energy");
  std::string diag;
  CHECK(run_keys({{"experiment", "scatter"}, {"E", "-1"}, {"output", out.string()}}, &diag) == cli::kInvalidInput);
  CHECK(diag.find("E must be positive") != std::string::npos);
  const auto m = read_manifest(out);
  CHECK(m["status"] == "invalid-input");
  CHECK(m["exit_code"] == 2);

  const fs::path out2 = scratch("bad_name");
  CHECK(run_keys({{"experiment", "verify-translaton"}, {"output", out2.string()}}, &diag) == cli::kInvalidInput);
  CHECK(diag.find("did you mean 'verify-translation'") != std::string::npos);
}

TEST_CASE("verify-translation passes at the documented tolerance") {
  const fs::path out = scratch("translation");
  CHECK(run_keys({{"experiment", "verify-translation"}, {"amplitude", "1e-3"}, {"y", "1,0"}, {"E", "1"},
                  {"output", out.string()}}) == 0);
  const auto m = read_manifest(out);
  CHECK(m["summary"]["relative_error"].get<double>() <= 1e-3);
  CHECK(m["tolerances"]["phase_law_relative"].get<double>() == 1e-3);
}

TEST_CASE("failed check exits 1") {
  const fs::path out = scratch("strict");
  CHECK(run_keys({{"experiment", "kdv-check"}, {"L", "10"}, {"N", "128"}, {"tol", "1e-14"}, {"output", out.string()}}) ==
        cli::kCheckFailed);
  CHECK(read_manifest(out)["status"] == "check-failed");
}

TEST_CASE("numerical failure exits 3") {
  const fs::path out = scratch("unstable");
  CHECK(run_keys({{"experiment", "verify-evolution"}, {"amplitude", "1e4"}, {"L", "20"}, {"N", "32"}, {"T", "0.05"},
                  {"M", "16"}, {"output", out.string()}}) == cli::kNumericalFailure);
  const auto m = read_manifest(out);
  CHECK(m["status"] == "numerical-failure");
  CHECK_FALSE(m["error"].is_null());
}

TEST_CASE("identical configs give bitwise-identical CSVs") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const cli::KeyValues base = {{"experiment", "scatter"}, {"amplitude", "0.2"}, {"N", "64"}, {"M", "16"}};
  CHECK(run_keys(cli::merge(base, {{"output", a.string()}})) == 0);
  CHECK(run_keys(cli::merge(base, {{"output", b.string()}})) == 0);
  const auto m = read_manifest(a);
  CHECK(m["artifacts"].size() == 2);
  for (const auto& f : m["artifacts"]) {
    const std::string name = f.get<std::string>();
    CHECK(slurp(a / name) == slurp(b / name));
  }
  std::ifstream csv(a / "amplitude.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "theta_k,theta_l,re_f,im_f");
}

TEST_CASE("executable: list, flags override the config file, output root") {
  const fs::path dir = scratch("exe");
  fs::create_directories(dir);
  const std::string exe = NVSOLITON_CLI_PATH;
  CHECK(std::system((exe + " list > " + (dir / "list.txt").string()).c_str()) == 0);
  CHECK(slurp(dir / "list.txt").find("Lemma 2") != std::string::npos);

  std::ofstream(dir / "run.cfg") << "experiment = kdv-check\nL = 10\nN = 128\ntol = 1e-14\noutput = from_file\n";
  const std::string prefix = "NVSOLITON_OUTPUT_ROOT=" + dir.string() + " " + exe;
  // The file alone fails the strict tolerance; the flags relax it.
  int status = std::system((prefix + " run --config " + (dir / "run.cfg").string() + " 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 1);
  status = std::system((prefix + " run --config " + (dir / "run.cfg").string() + " --L=40 --N 1024 --tol=1e-6").c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(dir / "from_file" / "manifest.json"));
  CHECK(read_manifest(dir / "from_file")["config"]["N"] == "1024");

  status = std::system((prefix + " scater 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 2);
  status = std::system((prefix + " torus-check --output=torus").c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(dir / "torus" / "gram.csv"));
}
