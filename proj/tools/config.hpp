#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdhs/analysis.hpp"
#include "pdhs/system.hpp"

namespace pdhs::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `section.key = value` text. Lists are space separated, matrix
/// rows separated by ';'.
struct ExperimentConfig {
  struct {
    double h = 0.0625;
    /// 0 derives the size from half_length.
    std::size_t n_points = 0;
    double offset = 0.0;
    double half_length = 32.0;
  } grid;
  struct {
    /// "euler" or "custom".
    std::string name = "euler";
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    int N2 = 1;
  } system;
  struct {
    double T = 5.0;
    std::size_t samples = 301;
    Spacing spacing = Spacing::kLog;
  } times;
  struct {
    std::vector<double> eps;
    double kappa = 0.5;
    double s = 2.25;
    double s_prime = 3.0;
    /// Grid widths of relax-table.
    std::vector<double> h;
  } relaxation;
  struct {
    double t_lo = 10.0;
    double t_hi = 200.0;
  } fit;
  struct {
    std::string directory = ".";
    std::string prefix;
  } output;
  struct {
    /// "none" or "partition".
    std::string fault = "none";
    std::uint64_t seed = 1;
  } selftest;

  bool operator==(const ExperimentConfig& o) const;
};

/// Defaults of a subcommand: decay, relax-sweep, relax-table, stability or
/// selftest.
ExperimentConfig default_config(const std::string& command);

/// Applies the assignments in `text` on top of `base`. Throws ConfigError
/// naming the offending line and key.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base);
void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value);
ExperimentConfig load_config(const std::string& path, ExperimentConfig base);
std::string serialize_config(const ExperimentConfig& c);

/// Throws ConfigError for values out of range.
void validate_config(const ExperimentConfig& c, const std::string& command);

/// Throws ConfigError for malformed systems, pdhs::Error(KalmanFails)
/// never; the Kalman test is left to the caller.
SystemSpec make_system(const ExperimentConfig& c);
Grid make_grid(const ExperimentConfig& c, double h);

}  // namespace pdhs::cli
