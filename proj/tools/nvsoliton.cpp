// nvsoliton: experiment runner.
//
//   nvsoliton list
//   nvsoliton run --config run.cfg [--key=value ...]
//   nvsoliton <experiment> [--config run.cfg] [--key=value ...]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nvsoliton/cli.hpp"
#include "nvsoliton/error.hpp"

namespace cli = nvsoliton::cli;

namespace {

// Leftover arguments are config overrides: --key=value or --key value.
cli::KeyValues parse_overrides(const std::vector<std::string>& args) {
  cli::KeyValues keys;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0 || a.size() < 3) throw nvsoliton::InvalidInput("unexpected argument '" + a + "'");
    const auto eq = a.find('=');
    if (eq != std::string::npos) {
      keys[a.substr(2, eq - 2)] = a.substr(eq + 1);
    } else {
      if (i + 1 >= args.size()) throw nvsoliton::InvalidInput("flag '" + a + "' needs a value");
      keys[a.substr(2)] = args[++i];
    }
  }
  return keys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Novikov-Veselov / fixed-energy scattering experiment runner"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "print the experiment catalog");
  std::string config_file;
  auto* run = app.add_subcommand("run", "run the experiment named by the `experiment` key");
  run->add_option("--config", config_file, "flat key=value config file");
  run->allow_extras();
  std::vector<CLI::App*> shortcuts;
  for (const auto& e : cli::experiment_catalog()) {
    auto* sub = app.add_subcommand(e.name, e.anchor + ": " + e.description);
    sub->add_option("--config", config_file, "flat key=value config file");
    sub->allow_extras();
    shortcuts.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (argc > 1 && std::string(argv[1]).rfind("-", 0) != 0) {
      std::vector<std::string> names = {"list", "run"};
      for (const auto& x : cli::experiment_catalog()) names.push_back(x.name);
      bool known = false;
      for (const auto& n : names) known = known || n == argv[1];
      if (!known) {
        std::cerr << "nvsoliton: unknown experiment '" << argv[1] << "'; did you mean '"
                  << cli::nearest_match(argv[1], names) << "'?\n";
        return cli::kInvalidInput;
      }
    }
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInvalidInput;
  }

  if (list->parsed()) {
    std::cout << cli::list_experiments();
    return cli::kPassed;
  }

  CLI::App* chosen = run;
  for (auto* sub : shortcuts)
    if (sub->parsed()) chosen = sub;

  cli::KeyValues keys;
  try {
    if (!config_file.empty()) keys = cli::read_config_file(config_file);
    keys = cli::merge(keys, parse_overrides(chosen->remaining()));
  } catch (const nvsoliton::InvalidInput& e) {
    std::cerr << "nvsoliton: invalid-input: " << e.what() << "\n";
    return cli::kInvalidInput;
  }
  if (chosen != run) keys["experiment"] = chosen->get_name();
  return cli::run(keys, std::cerr);
}
