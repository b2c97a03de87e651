#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pdhs/parallel.hpp"

int main(int argc, char** argv) {
  using namespace pdhs::cli;
  CLI::App app{"Partially dissipative hyperbolic systems: experiments and self-tests"};
  app.require_subcommand(1);
  std::string config_path, out_dir, fault;
  std::vector<std::string> settings;
  int threads = 0;
  long long seed = -1;
  app.add_option("--config", config_path, "Configuration file (key = value lines)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Seed of the random vectors in self-tests")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--set", settings, "Extra key=value assignment, applied after --config");
  app.add_option("--inject-fault", fault, "Deliberate fault for selftest")
      ->check(CLI::IsMember({"none", "partition"}));
  const std::pair<const char*, const char*> commands[] = {
      {"decay", "Time decay of the Euler pair and fitted rate"},
      {"relax-sweep", "Relaxation errors over an eps sweep and convergence orders"},
      {"relax-table", "Relaxation errors for each grid step in relaxation.h"},
      {"stability", "Amplification of the central and upwind schemes"},
      {"selftest", "Discrete identities on random data"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ExperimentConfig config;
  try {
    config = default_config(command);
    if (!config_path.empty()) config = load_config(config_path, config);
    for (const std::string& s : settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!out_dir.empty()) config.output.directory = out_dir;
    if (seed >= 0) config.selftest.seed = static_cast<std::uint64_t>(seed);
    if (!fault.empty()) config.selftest.fault = fault;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (threads > 0) pdhs::set_num_threads(threads);
  return run_command(command, config, std::cout, std::cerr);
}
