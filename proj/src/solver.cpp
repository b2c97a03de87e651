#include "pdhs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pdhs/errors.hpp"
#include "pdhs/parallel.hpp"

namespace pdhs {
namespace {

// out = a + s * b, componentwise.
void axpy(const VectorGridFunction& a, double s, const VectorGridFunction& b,
          VectorGridFunction& out) {
  for (int c = 0; c < a.dimension(); ++c) {
    const auto& x = a[c].values();
    const auto& y = b[c].values();
    auto& z = out[c].values();
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + s * y[i];
  }
}

bool all_finite(const VectorGridFunction& u) {
  for (const auto& comp : u.components()) {
    for (double x : comp.values()) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

void require_dimension(const VectorGridFunction& u, int n) {
  if (u.dimension() != n) {
    fail(ErrorCode::kDimensionMismatch, "state has " + std::to_string(u.dimension()) +
                                            " components, expected " + std::to_string(n));
  }
}

}  // namespace

VectorGridFunction::VectorGridFunction(const Grid& grid, int N)
    : components_(static_cast<std::size_t>(N), GridFunction(grid)) {
  if (N < 1) fail(ErrorCode::kDimensionMismatch, "need at least one component");
}

VectorGridFunction::VectorGridFunction(std::vector<GridFunction> components)
    : components_(std::move(components)) {
  if (components_.empty()) fail(ErrorCode::kDimensionMismatch, "need at least one component");
  for (const auto& c : components_) require_same_grid(c.grid(), components_.front().grid());
}

SpectralState dft(const VectorGridFunction& u) {
  SpectralState out;
  for (const auto& c : u.components()) out.push_back(dft(c));
  return out;
}

VectorGridFunction idft_real(const SpectralState& g) {
  std::vector<GridFunction> comps;
  for (const auto& c : g) comps.push_back(idft_real(c));
  return VectorGridFunction(std::move(comps));
}

double l2_norm(const VectorGridFunction& u) {
  double s = 0.0;
  for (const auto& c : u.components()) s += std::pow(l2_norm(c), 2);
  return std::sqrt(s);
}

double l2_norm(const SpectralState& g) {
  double s = 0.0;
  for (const auto& c : g) s += std::pow(l2_norm(c), 2);
  return std::sqrt(s);
}

VectorGridFunction d_central(const VectorGridFunction& u) {
  std::vector<GridFunction> comps;
  for (const auto& c : u.components()) comps.push_back(d_central(c));
  return VectorGridFunction(std::move(comps));
}

SemidiscreteRhs zero_rhs() {
  SemidiscreteRhs r;
  r.name = "zero";
  r.eval = [](double, const VectorGridFunction& u, VectorGridFunction& out) {
    for (int c = 0; c < u.dimension(); ++c) {
      std::fill(out[c].values().begin(), out[c].values().end(), 0.0);
    }
  };
  return r;
}

SemidiscreteRhs system_rhs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  SemidiscreteRhs r;
  r.name = "system";
  r.eval = [A, B](double, const VectorGridFunction& u, VectorGridFunction& out) {
    const int n = static_cast<int>(A.rows());
    require_dimension(u, n);
    const VectorGridFunction du = d_central(u);
    const std::size_t m = u.grid().size();
    for (int a = 0; a < n; ++a) {
      auto& z = out[a].values();
      std::fill(z.begin(), z.end(), 0.0);
      for (int b = 0; b < n; ++b) {
        const double ab = A(a, b), bb = B(a, b);
        if (ab == 0.0 && bb == 0.0) continue;
        const auto& x = u[b].values();
        const auto& dx = du[b].values();
        for (std::size_t i = 0; i < m; ++i) z[i] -= ab * dx[i] + bb * x[i];
      }
    }
  };
  return r;
}

SemidiscreteRhs system_rhs(const SystemSpec& spec) { return system_rhs(spec.A, spec.B); }

SemidiscreteRhs relaxed_euler_rhs(double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::kNonPositiveParameter, "eps must be positive");
  SemidiscreteRhs r;
  r.name = "relaxed-euler";
  r.max_dt = 0.25 * eps * eps;
  const double inv = 1.0 / (eps * eps);
  r.eval = [inv](double, const VectorGridFunction& u, VectorGridFunction& out) {
    require_dimension(u, 2);
    const GridFunction drho = d_central(u[0]);
    const GridFunction du = d_central(u[1]);
    for (std::size_t i = 0; i < u.grid().size(); ++i) {
      out[0][i] = -du[i];
      out[1][i] = -inv * (drho[i] + u[1][i]);
    }
  };
  return r;
}

SemidiscreteRhs heat_rhs() {
  SemidiscreteRhs r;
  r.name = "heat";
  r.eval = [](double, const VectorGridFunction& u, VectorGridFunction& out) {
    require_dimension(u, 1);
    out[0] = d_central(d_central(u[0]));
  };
  return r;
}

std::vector<VectorGridFunction> spectral_propagate(const SystemSpec& spec,
                                                   const VectorGridFunction& u0,
                                                   const std::vector<double>& times) {
  require_dimension(u0, spec.N);
  auto cache = std::make_shared<const PropagatorCache>(u0.grid(),
                                                       central_generator(spec.A, spec.B));
  const SpectralEvolution evo(cache, dft(u0));
  std::vector<VectorGridFunction> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t < 0.0) fail(ErrorCode::kInvalidArgument, "times must be nonnegative");
    out.push_back(idft_real(evo.at(t)));
  }
  return out;
}

std::vector<VectorGridFunction> rk4_evolve(const SemidiscreteRhs& rhs,
                                           const VectorGridFunction& u0, double dt,
                                           double T,
                                           const std::vector<double>& sample_times) {
  if (!(dt > 0.0) || !(T >= 0.0)) {
    fail(ErrorCode::kNonPositiveParameter, "dt must be positive and T nonnegative");
  }
  if (dt > rhs.max_dt) {
    fail(ErrorCode::kStiffnessGuard, "dt = " + std::to_string(dt) + " exceeds " +
                                         std::to_string(rhs.max_dt) + " for " + rhs.name);
  }
  std::vector<std::size_t> order(sample_times.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sample_times[a] < sample_times[b]; });
  for (double s : sample_times) {
    if (s < 0.0 || s > T * (1.0 + 1e-12)) {
      fail(ErrorCode::kInvalidArgument, "sample time outside [0, T]");
    }
  }

  std::vector<VectorGridFunction> out(sample_times.size(), u0);
  const int n = u0.dimension();
  const Grid& grid = u0.grid();
  VectorGridFunction y = u0, y1(grid, n), f0(grid, n), f1(grid, n);
  VectorGridFunction k2(grid, n), k3(grid, n), k4(grid, n), tmp(grid, n);
  rhs.eval(0.0, y, f0);

  std::size_t next = 0;
  while (next < order.size() && sample_times[order[next]] <= 0.0) ++next;

  const auto steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  double t = 0.0;
  for (long step = 0; step < steps && next < order.size(); ++step) {
    const double tn = (step + 1 == steps) ? T : (step + 1) * dt;
    const double h = tn - t;
    axpy(y, 0.5 * h, f0, tmp);
    rhs.eval(t + 0.5 * h, tmp, k2);
    axpy(y, 0.5 * h, k2, tmp);
    rhs.eval(t + 0.5 * h, tmp, k3);
    axpy(y, h, k3, tmp);
    rhs.eval(tn, tmp, k4);
    for (int c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        y1[c][i] = y[c][i] + h / 6.0 * (f0[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]);
      }
    }
    if (!all_finite(y1)) {
      fail(ErrorCode::kNonFinite, "RK4 state diverged at t = " + std::to_string(tn));
    }
    rhs.eval(tn, y1, f1);

    while (next < order.size() && sample_times[order[next]] <= tn + 1e-12 * T) {
      const double s = std::min(sample_times[order[next]], tn);
      const double th = (s - t) / h;
      const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
      const double h10 = th * (1 - th) * (1 - th);
      const double h01 = th * th * (3 - 2 * th);
      const double h11 = th * th * (th - 1);
      VectorGridFunction& dst = out[order[next]];
      for (int c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
          dst[c][i] = h00 * y[c][i] + h10 * h * f0[c][i] + h01 * y1[c][i] +
                      h11 * h * f1[c][i];
        }
      }
      ++next;
    }
    std::swap(y, y1);
    std::swap(f0, f1);
    t = tn;
  }
  return out;
}

std::vector<RelaxedState> solve_relaxed_euler(double eps, const GridFunction& rho0,
                                              const GridFunction& u0,
                                              const std::vector<double>& times) {
  if (!(eps > 0.0) || eps > 1.0) {
    fail(ErrorCode::kNonPositiveParameter, "eps must lie in (0, 1]");
  }
  require_same_grid(rho0.grid(), u0.grid());
  auto cache =
      std::make_shared<const PropagatorCache>(rho0.grid(), relaxed_euler_generator(eps));
  const SpectralEvolution evo(cache, {dft(rho0), dft(u0)});
  std::vector<RelaxedState> out;
  for (double t : times) {
    const SpectralState s = evo.at(t);
    out.push_back({idft_real(s[0]), idft_real(s[1])});
  }
  return out;
}

std::vector<HeatState> solve_discrete_heat(const GridFunction& rho0,
                                           const std::vector<double>& times) {
  const Grid& grid = rho0.grid();
  const SpectralFunction g0 = dft(rho0);
  std::vector<HeatState> out;
  for (double t : times) {
    SpectralFunction g(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double s = grid.symbol(k);
      g[k] = std::exp(-s * s * t) * g0[k];
    }
    GridFunction rho = idft_real(g);
    GridFunction u = d_central(rho);
    u *= -1.0;
    out.push_back({std::move(rho), std::move(u)});
  }
  return out;
}

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kPlus: return "plus";
    case Scheme::kMinus: return "minus";
    case Scheme::kCentral: return "central";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "plus" || name == "upwind") return Scheme::kPlus;
  if (name == "minus" || name == "downwind") return Scheme::kMinus;
  if (name == "central") return Scheme::kCentral;
  fail(ErrorCode::kInvalidArgument, "unknown scheme '" + name + "'");
}

StabilityReport stability_report(Scheme scheme, const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B, const Grid& grid, double T) {
  if (!(T > 0.0)) fail(ErrorCode::kNonPositiveParameter, "T must be positive");
  if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols()) {
    fail(ErrorCode::kDimensionMismatch, "A and B must be square of equal size");
  }
  const double h = grid.h();
  const Eigen::MatrixXcd Ac = A.cast<Complex>(), Bc = B.cast<Complex>();
  std::vector<double> amp(grid.size());
  parallel_for(0, grid.size(), [&](std::size_t k) {
    const double xi = grid.frequency(k);
    Complex m;
    switch (scheme) {
      case Scheme::kPlus: m = (std::polar(1.0, xi * h) - 1.0) / h; break;
      case Scheme::kMinus: m = (1.0 - std::polar(1.0, -xi * h)) / h; break;
      case Scheme::kCentral: m = Complex(0.0, grid.symbol(k)); break;
    }
    const Eigen::MatrixXcd E = matrix_exponential((-m * Ac - Bc) * T);
    amp[k] = Eigen::JacobiSVD<Eigen::MatrixXcd>(E).singularValues()(0);
  });
  StabilityReport r;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (amp[k] > r.max_amplification) {
      r.max_amplification = amp[k];
      r.worst_frequency = grid.frequency(k);
    }
  }
  r.stable = r.max_amplification <= 1.0 + 1e-10;
  return r;
}

StabilityReport stability_report(Scheme scheme, const SystemSpec& spec, const Grid& grid,
                                 double T) {
  return stability_report(scheme, spec.A, spec.B, grid, T);
}

GridFunction damped_mode(const GridFunction& rho, const GridFunction& u) {
  require_same_grid(rho.grid(), u.grid());
  return d_central(rho) + u;
}

}  // namespace pdhs
