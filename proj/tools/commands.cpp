#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "pdhs/errors.hpp"

namespace pdhs::cli {
namespace {

constexpr double kDecaySlopeLo = -0.55;
constexpr double kDecaySlopeHi = -0.45;
constexpr double kOrderLo = 1.9;
constexpr double kOrderHi = 2.1;
constexpr double kSupSpreadLimit = 0.02;
constexpr double kDarcySpreadLimit = 0.10;

std::string output_path(const ExperimentConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.output.directory);
  return (std::filesystem::path(c.output.directory) / (c.output.prefix + name)).string();
}

std::ofstream open_output(const ExperimentConfig& c, const std::string& name) {
  const std::string path = output_path(c, name);
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  return os;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kKalmanFails:
      return kExitKalman;
    case ErrorCode::kNonSymmetric:
    case ErrorCode::kBadBlockStructure:
    case ErrorCode::kNotDissipative:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kInvalidGrid:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNonPositiveParameter:
    case ErrorCode::kParameterOrder:
    case ErrorCode::kInsufficientSamples:
    case ErrorCode::kSupportOverflow:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int cmd_decay(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c, "decay");
  const SystemSpec spec = make_system(c);
  // Kalman failures surface here, before any grid work.
  const CorrectorConstants consts = choose_corrector_constants(spec);
  const Grid grid = make_grid(c, c.grid.h);
  const InitialSpectra data = initial_spectra(InitialDataKind::kDecay, grid);
  const SpectralState U0(static_cast<std::size_t>(spec.N), data.rho0);
  const std::vector<double> times = make_times(c.times.T, c.times.samples, c.times.spacing);
  const DecayRecord rec = decay_record(spec, U0, times, consts);
  const LinearFit fit = decay_rate_fit(rec, c.fit.t_lo, c.fit.t_hi);
  const double constant = decay_constant(rec);

  auto cache = std::make_shared<const PropagatorCache>(grid, central_generator(spec.A, spec.B));
  const SpectralState UT = SpectralEvolution(cache, U0).at(c.times.T);
  double mass = 0.0;
  for (const auto& comp : UT) mass = std::max(mass, boundary_mass_fraction(idft_real(comp)));
  if (mass > kBoundaryMassLimit) {
    log << "warning: boundary mass fraction " << fmt("%.3e", mass) << " exceeds "
        << fmt("%.0e", kBoundaryMassLimit) << "; enlarge grid.half_length\n";
  }

  {
    auto os = open_output(c, "decay.csv");
    write_decay_csv(os, rec);
  }
  const bool ok = in_range(fit.slope, kDecaySlopeLo, kDecaySlopeHi);
  {
    auto os = open_output(c, "decay_fit.txt");
    os << "norm=" << fmt("%.6f", fit.slope) << "\xC2\xB1" << fmt("%.6f", fit.stderr_slope) << "\n"
       << "r_squared=" << fmt("%.6f", fit.r_squared) << "\n"
       << "decay_constant=" << fmt("%.6f", constant) << "\n";
  }
  log << "decay: slope " << fmt("%.4f", fit.slope) << " on [" << c.fit.t_lo << ", "
      << c.fit.t_hi << "], constant " << fmt("%.4f", constant) << ", eta0 "
      << fmt("%.3e", consts.eta0) << (ok ? " ok\n" : " outside [-0.55, -0.45]\n");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_relax_sweep(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c, "relax-sweep");
  const Grid grid = make_grid(c, c.grid.h);
  const InitialSpectra data = initial_spectra(InitialDataKind::kRelax, grid);
  std::vector<RelaxationErrorRecord> rows;
  for (double eps : c.relaxation.eps) {
    RelaxationSetup s;
    s.eps = eps;
    s.h = c.grid.h;
    s.T = c.times.T;
    s.s = c.relaxation.s;
    s.s_prime = c.relaxation.s_prime;
    s.kappa = c.relaxation.kappa;
    rows.push_back(relaxation_errors(s, data));
    log << "relax-sweep: eps " << fmt("%.6g", eps) << " sup_linf "
        << fmt("%.9e", rows.back().sup_error_linf) << " darcy_linf "
        << fmt("%.9e", rows.back().darcy_l1t_linf) << "\n";
  }
  const OrderReport report = convergence_order(rows);
  {
    auto os = open_output(c, "relax_sweep.csv");
    write_relaxation_csv(os, rows);
  }
  {
    auto os = open_output(c, "relax_sweep_fit.txt");
    write_fit_report(os, report);
  }
  const double sup = report.column("sup_linf").slope;
  const double darcy = report.column("darcy_linf").slope;
  const bool ok = in_range(sup, kOrderLo, kOrderHi) && in_range(darcy, kOrderLo, kOrderHi);
  log << "relax-sweep: slopes sup_linf " << fmt("%.4f", sup) << " darcy_linf "
      << fmt("%.4f", darcy) << (ok ? " ok\n" : " outside [1.9, 2.1]\n");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_relax_table(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c, "relax-table");
  std::vector<RelaxationErrorRecord> rows;
  std::vector<double> sup, darcy;
  for (double h : c.relaxation.h) {
    RelaxationSetup s;
    s.eps = c.relaxation.eps.front();
    s.h = h;
    s.T = c.times.T;
    s.s = c.relaxation.s;
    s.s_prime = c.relaxation.s_prime;
    s.kappa = c.relaxation.kappa;
    s.window_half_length = c.grid.half_length;
    s.offset = c.grid.offset;
    rows.push_back(relaxation_errors(s));
    sup.push_back(rows.back().sup_error_linf);
    darcy.push_back(rows.back().darcy_l1t_linf);
    log << "relax-table: h " << fmt("%.6g", h) << " sup_linf " << fmt("%.9e", sup.back())
        << " darcy_linf " << fmt("%.9e", darcy.back()) << "\n";
  }
  const double sup_spread = relative_spread(sup), darcy_spread = relative_spread(darcy);
  {
    auto os = open_output(c, "relax_table.csv");
    write_relaxation_csv(os, rows);
  }
  {
    auto os = open_output(c, "relax_table_spread.txt");
    os << "sup_linf_spread=" << fmt("%.6e", sup_spread) << "\n"
       << "darcy_linf_spread=" << fmt("%.6e", darcy_spread) << "\n";
  }
  const bool ok = sup_spread < kSupSpreadLimit && darcy_spread < kDarcySpreadLimit;
  log << "relax-table: spread sup " << fmt("%.3f%%", 100.0 * sup_spread) << " darcy "
      << fmt("%.3f%%", 100.0 * darcy_spread) << (ok ? " ok\n" : " too large\n");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_stability(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c, "stability");
  const SystemSpec spec = make_system(c);
  const Grid grid = make_grid(c, c.grid.h);
  auto os = open_output(c, "stability.csv");
  os << "scheme,max_amplification,stable,worst_frequency\n";
  bool central_stable = false;
  for (Scheme s : {Scheme::kCentral, Scheme::kPlus, Scheme::kMinus}) {
    const StabilityReport r = stability_report(s, spec, grid, c.times.T);
    char line[160];
    std::snprintf(line, sizeof line, "%s,%.17g,%d,%.17g\n", to_string(s), r.max_amplification,
                  r.stable ? 1 : 0, r.worst_frequency);
    os << line;
    log << "stability: " << to_string(s) << " amplification " << fmt("%.6e", r.max_amplification)
        << (r.stable ? " stable\n" : " unstable\n");
    if (s == Scheme::kCentral) central_stable = r.stable;
  }
  return central_stable ? kExitOk : kExitCheckFailed;
}

int cmd_selftest(const ExperimentConfig& c, std::ostream& log) {
  validate_config(c, "selftest");
  int failed = 0;
  for (const SuiteResult& r : run_selftest_suites(c)) {
    char line[160];
    std::snprintf(line, sizeof line, "%s %-22s worst %.3e limit %.3e\n",
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.worst, r.limit);
    log << line;
    if (!r.passed) ++failed;
  }
  log << (failed ? std::to_string(failed) + " suite(s) failed\n" : "all suites passed\n");
  return failed ? kExitCheckFailed : kExitOk;
}

int run_command(const std::string& command, const ExperimentConfig& c, std::ostream& log,
                std::ostream& err) {
  try {
    if (command == "decay") return cmd_decay(c, log);
    if (command == "relax-sweep") return cmd_relax_sweep(c, log);
    if (command == "relax-table") return cmd_relax_table(c, log);
    if (command == "stability") return cmd_stability(c, log);
    if (command == "selftest") return cmd_selftest(c, log);
    err << "error: unknown command '" << command << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace pdhs::cli
