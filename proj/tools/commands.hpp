#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace pdhs::cli {

/// Process exit statuses, one per outcome.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitKalman = 3,
  kExitNumerical = 4,
};

int cmd_decay(const ExperimentConfig& c, std::ostream& log);
int cmd_relax_sweep(const ExperimentConfig& c, std::ostream& log);
int cmd_relax_table(const ExperimentConfig& c, std::ostream& log);
int cmd_stability(const ExperimentConfig& c, std::ostream& log);
int cmd_selftest(const ExperimentConfig& c, std::ostream& log);

/// Dispatches by name and maps errors to exit codes, printing the
/// diagnostic to `err`.
int run_command(const std::string& command, const ExperimentConfig& c, std::ostream& log,
                std::ostream& err);

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double limit = 0.0;
};

/// Invariant suites of the selftest command, in a fixed order.
std::vector<SuiteResult> run_selftest_suites(const ExperimentConfig& c);

}  // namespace pdhs::cli
