#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "pdhs/analysis.hpp"
#include "pdhs/errors.hpp"
#include "pdhs/parallel.hpp"

namespace pdhs {
namespace {

constexpr double kLayerWidth = 40.0;
constexpr double kQuadratureLimit = 0.01;

double trapezoid(const std::vector<double>& t, const std::vector<double>& f, std::size_t stride) {
  double s = 0.0;
  std::size_t prev = 0;
  for (std::size_t i = stride; i < t.size(); i += stride) {
    s += 0.5 * (t[i] - t[prev]) * (f[i] + f[prev]);
    prev = i;
  }
  if (prev != t.size() - 1) {
    const std::size_t last = t.size() - 1;
    s += 0.5 * (t[last] - t[prev]) * (f[last] + f[prev]);
  }
  return s;
}

// Integral together with its relative change under halved density.
std::pair<double, double> integrate(const std::vector<double>& t, const std::vector<double>& f) {
  const double full = trapezoid(t, f, 1);
  const double half = trapezoid(t, f, 2);
  const double change = full > 0.0 ? std::abs(full - half) / full : 0.0;
  return {full, change};
}

void validate(const RelaxationSetup& s) {
  if (!(s.eps > 0.0 && s.eps < 1.0)) fail(ErrorCode::kNonPositiveParameter, "need eps in (0, 1)");
  if (!(s.T > 0.0)) fail(ErrorCode::kNonPositiveParameter, "need T > 0");
  if (!(s.kappa > 0.0)) fail(ErrorCode::kNonPositiveParameter, "need kappa > 0");
  if (!(s.s > 2.0 && s.s < s.s_prime)) fail(ErrorCode::kParameterOrder, "need 2 < s < s'");
}

}  // namespace

std::vector<double> relaxation_sample_times(double eps, double T, std::size_t layer,
                                            std::size_t bulk) {
  if (!(eps > 0.0) || !(T > 0.0) || layer < 1 || bulk < 1) {
    fail(ErrorCode::kNonPositiveParameter, "need eps, T > 0 and nonempty sample blocks");
  }
  const double edge = std::min(kLayerWidth * eps * eps, T);
  std::vector<double> t;
  t.reserve(layer + bulk + 1);
  for (std::size_t i = 0; i <= layer; ++i) {
    t.push_back(edge * static_cast<double>(i) / static_cast<double>(layer));
  }
  if (edge < T) {
    for (std::size_t i = 1; i <= bulk; ++i) {
      t.push_back(edge + (T - edge) * static_cast<double>(i) / static_cast<double>(bulk));
    }
  }
  t.back() = T;
  return t;
}

RelaxationErrorRecord relaxation_errors(const RelaxationSetup& setup) {
  const Grid grid = window_grid(setup.h, setup.window_half_length, setup.offset);
  return relaxation_errors(setup, initial_spectra(InitialDataKind::kRelax, grid));
}

RelaxationErrorRecord relaxation_errors(const RelaxationSetup& setup,
                                        const InitialSpectra& data) {
  validate(setup);
  const Grid& grid = data.rho0.grid();
  require_same_grid(grid, data.u0.grid());
  std::vector<double> times = setup.sample_times.empty()
                                  ? relaxation_sample_times(setup.eps, setup.T)
                                  : setup.sample_times;
  if (times.size() < 3 || times.front() != 0.0 || std::abs(times.back() - setup.T) > 1e-12 ||
      !std::is_sorted(times.begin(), times.end())) {
    fail(ErrorCode::kInvalidArgument, "sample times must ascend from 0 to T");
  }

  auto cache = std::make_shared<const PropagatorCache>(grid, relaxed_euler_generator(setup.eps));
  const SpectralEvolution relaxed(cache, {data.rho0, data.u0});
  const LPDecomposition lp(grid);
  const std::size_t n = grid.size();

  const std::size_t m = times.size();
  std::vector<double> l1_besov(m), darcy_besov(m), darcy_low(m), darcy_high(m), darcy_linf(m);
  RelaxationErrorRecord r;
  r.eps = setup.eps;
  r.h = grid.h();
  r.T = setup.T;

  parallel_for(0, m, [&](std::size_t i) {
    const double t = times[i];
    const SpectralState S = relaxed.at(t);
    SpectralFunction diff(grid), darcy(grid);
    for (std::size_t k = 0; k < n; ++k) {
      const double sigma = grid.symbol(k);
      const Complex heat = std::exp(-sigma * sigma * t) * data.rho0[k];
      diff[k] = S[0][k] - heat;
      darcy[k] = Complex(0.0, sigma) * S[0][k] + S[1][k];
    }
    l1_besov[i] = lp.besov_norm(diff, setup.s);
    darcy_besov[i] = lp.besov_norm(darcy, setup.s - 1.0);
    const SplitNorm split = lp.besov_norm_split(darcy, setup.s - 1.0, setup.kappa, setup.eps);
    darcy_low[i] = split.low;
    darcy_high[i] = split.high;
    darcy_linf[i] = linf_norm(idft_real(darcy));
    if (i == m - 1) {
      r.sup_error_besov = lp.besov_norm(diff, setup.s - 2.0);
      r.sup_error_linf = linf_norm(idft_real(diff));
    }
  });

  double change = 0.0;
  auto take = [&](const std::vector<double>& f) {
    const auto [value, c] = integrate(times, f);
    change = std::max(change, c);
    return value;
  };
  r.l1t_error_besov = take(l1_besov);
  r.darcy_l1t = take(darcy_besov);
  r.darcy_l1t_linf = take(darcy_linf);
  r.darcy_l1t_low = trapezoid(times, darcy_low, 1);
  r.darcy_l1t_high = trapezoid(times, darcy_high, 1);
  r.quadrature_change = change;
  if (change >= kQuadratureLimit) {
    fail(ErrorCode::kQuadratureUnresolved,
         "halving the sample density moves an L1_T value by " + std::to_string(100.0 * change) +
             "%");
  }
  return r;
}

const OrderReport::Column& OrderReport::column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return c;
  }
  fail(ErrorCode::kInvalidArgument, "no column '" + name + "'");
}

OrderReport convergence_order(const std::vector<RelaxationErrorRecord>& records) {
  std::map<double, const RelaxationErrorRecord*> by_eps;
  for (const auto& r : records) {
    if (!records.empty() && (r.h != records.front().h || r.T != records.front().T)) {
      fail(ErrorCode::kInvalidArgument, "records must share h and T");
    }
    by_eps[r.eps] = &r;
  }
  if (by_eps.size() < 4) {
    fail(ErrorCode::kInsufficientSamples,
         std::to_string(by_eps.size()) + " distinct eps values, need 4");
  }
  struct Field {
    const char* name;
    double RelaxationErrorRecord::*member;
  };
  static constexpr Field kFields[] = {
      {"sup_besov", &RelaxationErrorRecord::sup_error_besov},
      {"l1t_besov", &RelaxationErrorRecord::l1t_error_besov},
      {"darcy_besov", &RelaxationErrorRecord::darcy_l1t},
      {"sup_linf", &RelaxationErrorRecord::sup_error_linf},
      {"darcy_linf", &RelaxationErrorRecord::darcy_l1t_linf},
  };
  OrderReport report;
  for (const Field& f : kFields) {
    std::vector<double> x, y;
    for (const auto& [eps, rec] : by_eps) {
      const double v = rec->*f.member;
      if (!(v > 0.0)) fail(ErrorCode::kNonPositiveNorm, std::string(f.name) + " vanishes");
      x.push_back(std::log(eps));
      y.push_back(std::log(v));
    }
    const LinearFit fit = fit_line(x, y);
    report.columns.push_back({f.name, fit.slope, fit.stderr_slope});
  }
  return report;
}

void write_relaxation_csv(std::ostream& os, const std::vector<RelaxationErrorRecord>& rows) {
  os << "eps,h,T,sup_besov,l1t_besov,darcy_besov,sup_linf,darcy_linf\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.eps,
                  r.h, r.T, r.sup_error_besov, r.l1t_error_besov, r.darcy_l1t, r.sup_error_linf,
                  r.darcy_l1t_linf);
    os << line;
  }
}

void write_fit_report(std::ostream& os, const OrderReport& report) {
  char line[128];
  for (const auto& c : report.columns) {
    std::snprintf(line, sizeof line, "%s=%.6f\xC2\xB1%.6f\n", c.name.c_str(), c.slope,
                  c.stderr_slope);
    os << line;
  }
}

}  // namespace pdhs
