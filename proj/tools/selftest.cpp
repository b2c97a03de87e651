#include <cmath>
#include <functional>
#include <random>

#include "commands.hpp"
#include "pdhs/lp.hpp"
#include "pdhs/solver.hpp"

namespace pdhs::cli {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct Context {
  std::vector<Grid> grids;
  PartitionOfUnity partition;
  std::mt19937_64 rng;

  GridFunction random_function(const Grid& g) {
    std::normal_distribution<double> d;
    GridFunction v(g);
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = d(rng);
    return v;
  }
};

SuiteResult suite(const std::string& name, double worst, double limit) {
  return {name, worst <= limit, worst, limit};
}

double max_abs_diff(const SpectralFunction& a, const SpectralFunction& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double max_abs(const SpectralFunction& a) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k]));
  return m;
}

SuiteResult parseval(Context& ctx) {
  double worst = 0.0;
  for (const Grid& g : ctx.grids) {
    const GridFunction v = ctx.random_function(g);
    const SpectralFunction vh = dft(v);
    double q = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) q += std::norm(vh[k]);
    q *= g.frequency_step();
    const double n2 = l2_norm(v) * l2_norm(v);
    worst = std::max(worst, std::abs(q - n2) / n2);
  }
  return suite("parseval", worst, 1e-12);
}

SuiteResult inversion(Context& ctx) {
  double worst = 0.0;
  for (const Grid& g : ctx.grids) {
    const GridFunction v = ctx.random_function(g);
    worst = std::max(worst, linf_norm(idft_real(dft(v)) - v) / linf_norm(v));
  }
  return suite("inversion", worst, 1e-12);
}

SuiteResult direct_sum(Context& ctx) {
  double worst = 0.0;
  for (const Grid& g : ctx.grids) {
    if (g.size() > 512) continue;
    const GridFunction v = ctx.random_function(g);
    SpectralFunction ref(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      Complex s = 0.0;
      for (std::size_t n = 0; n < g.size(); ++n) {
        s += std::polar(v[n], -g.frequency(k) * g.position(n));
      }
      ref[k] = g.h() / std::sqrt(2.0 * kPi) * s;
    }
    worst = std::max(worst, max_abs_diff(dft(v), ref) / max_abs(ref));
  }
  return suite("direct-sum-oracle", worst, 1e-12);
}

SuiteResult convolution(Context& ctx) {
  double worst = 0.0;
  for (const Grid& g : ctx.grids) {
    const GridFunction v = ctx.random_function(g), w = ctx.random_function(g);
    const SpectralFunction lhs = dft(convolve(v, w));
    const SpectralFunction vh = dft(v), wh = dft(w);
    SpectralFunction rhs(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      rhs[k] = std::sqrt(2.0 * kPi) * std::polar(1.0, -g.frequency(k) * g.offset()) * vh[k] *
               wh[k];
    }
    worst = std::max(worst, max_abs_diff(lhs, rhs) / max_abs(rhs));
  }
  return suite("convolution", worst, 1e-12);
}

SuiteResult ibp(Context& ctx) {
  double worst = 0.0;
  for (const Grid& g : ctx.grids) {
    const GridFunction u = ctx.random_function(g), v = ctx.random_function(g);
    const double scale = l2_norm(u) * l2_norm(d_central(v)) + l2_norm(d_central(u)) * l2_norm(v);
    worst = std::max(worst,
                     std::abs(inner_product(u, d_central(v)) + inner_product(d_central(u), v)) /
                         scale);
    const double scale_pm = l2_norm(d_plus(u)) * l2_norm(v) + l2_norm(u) * l2_norm(d_minus(v));
    worst = std::max(worst,
                     std::abs(inner_product(d_plus(u), v) + inner_product(u, d_minus(v))) /
                         scale_pm);
  }
  return suite("ibp", worst, 1e-12);
}

SuiteResult symbols(Context& ctx) {
  double worst = 0.0;
  for (const Grid& g : ctx.grids) {
    const GridFunction v = ctx.random_function(g);
    const SpectralFunction vh = dft(v);
    const SpectralFunction c = dft(d_central(v)), p = dft(d_plus(v)), m = dft(d_minus(v));
    const double h = g.h();
    const double scale = max_abs(vh) / h;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double xi = g.frequency(k);
      const Complex e = std::polar(1.0, xi * h);
      worst = std::max(worst, std::abs(c[k] - Complex(0.0, std::sin(xi * h) / h) * vh[k]) / scale);
      worst = std::max(worst, std::abs(p[k] - (e - 1.0) / h * vh[k]) / scale);
      worst = std::max(worst, std::abs(m[k] - (1.0 - std::conj(e)) / h * vh[k]) / scale);
    }
  }
  return suite("symbols", worst, 1e-13);
}

SuiteResult partition(Context& ctx) {
  double worst = 0.0;
  for (const Grid& g : ctx.grids) {
    const BandGeometry geo(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double z = g.zeta(k);
      double sum = 0.0;
      for (int j = geo.j_min() - 1; j <= geo.j_max() + 1; ++j) {
        const double phi = ctx.partition.phi(j, z);
        sum += phi;
        // Support violations count as unit errors.
        if (phi > 0.0 && !BandGeometry::in_annulus(j, z)) worst = std::max(worst, 1.0);
        if (phi < 0.0 || phi > 1.0) worst = std::max(worst, 1.0);
      }
      if (z == 0.0) {
        worst = std::max(worst, std::abs(sum));
      } else if (z > BandGeometry::annulus_lo(geo.j_min())) {
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
  }
  return suite("partition-of-unity", worst, 1e-14);
}

SuiteResult almost_orthogonality(Context& ctx) {
  double worst = 0.0;
  for (const Grid& g : ctx.grids) {
    const BandGeometry geo(g);
    const GridFunction v = ctx.random_function(g);
    const double scale = linf_norm(v);
    for (int j = geo.j_min(); j <= geo.j_max(); ++j) {
      const GridFunction lj = localize(v, j, ctx.partition);
      for (int k = geo.j_min(); k <= geo.j_max(); ++k) {
        if (std::abs(j - k) < 2) continue;
        worst = std::max(worst, linf_norm(localize(lj, k, ctx.partition)) / scale);
      }
    }
  }
  return suite("almost-orthogonality", worst, 1e-14);
}

SuiteResult bernstein(Context& ctx) {
  double violations = 0.0;
  for (const Grid& g : ctx.grids) {
    const LPDecomposition lp(g, ctx.partition);
    for (int trial = 0; trial < 20; ++trial) {
      const GridFunction v = ctx.random_function(g);
      for (int j = lp.j_min(); j <= lp.j_max(); ++j) {
        if (!lp.active(j)) continue;
        const BernsteinResult r = bernstein_check(v, j, ctx.partition);
        if (!r.lower_ok || !r.upper_ok) violations += 1.0;
      }
    }
  }
  return suite("bernstein", violations, 0.0);
}

SuiteResult embedding(Context& ctx) {
  double worst = 0.0;
  for (const Grid& g : ctx.grids) {
    for (int trial = 0; trial < 10; ++trial) {
      worst = std::max(worst, linf_embedding_check(ctx.random_function(g), ctx.partition));
    }
  }
  return suite("embedding", worst, 3.0);
}

// Worst excess over 1 of the central scheme on random systems, with the
// upwind A = [[1]] case required to grow and A = [[-1]] required not to.
SuiteResult stability(Context& ctx, const Grid& grid, double T) {
  std::normal_distribution<double> d;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    Eigen::MatrixXd M(n, n), G(n - 1, n - 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) M(i, j) = d(ctx.rng);
    }
    for (int i = 0; i < n - 1; ++i) {
      for (int j = 0; j < n - 1; ++j) G(i, j) = d(ctx.rng);
    }
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    B.bottomRightCorner(n - 1, n - 1) = G.transpose() * G;
    const StabilityReport r =
        stability_report(Scheme::kCentral, 0.5 * (M + M.transpose()), B, grid, T);
    worst = std::max(worst, r.max_amplification - 1.0);
  }
  const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 1.0);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
  if (stability_report(Scheme::kPlus, one, zero, grid, T).stable) worst = 1.0;
  if (!stability_report(Scheme::kPlus, -one, zero, grid, T).stable) worst = 1.0;
  if (stability_report(Scheme::kMinus, -one, zero, grid, T).stable) worst = 1.0;
  if (!stability_report(Scheme::kMinus, one, zero, grid, T).stable) worst = 1.0;
  return suite("stability", std::max(worst, 0.0), 1e-10);
}

}  // namespace

std::vector<SuiteResult> run_selftest_suites(const ExperimentConfig& c) {
  Context ctx{{}, PartitionOfUnity(), std::mt19937_64(c.selftest.seed)};
  if (c.selftest.fault == "partition") ctx.partition = PartitionOfUnity(1.0, 1.5);
  const std::size_t n = c.grid.n_points > 0 ? c.grid.n_points : 256;
  for (int e = 3; e <= 8; ++e) ctx.grids.emplace_back(std::ldexp(1.0, -e), n, c.grid.offset);

  std::vector<SuiteResult> out;
  out.push_back(parseval(ctx));
  out.push_back(inversion(ctx));
  out.push_back(direct_sum(ctx));
  out.push_back(convolution(ctx));
  out.push_back(ibp(ctx));
  out.push_back(symbols(ctx));
  out.push_back(partition(ctx));
  out.push_back(almost_orthogonality(ctx));
  out.push_back(bernstein(ctx));
  out.push_back(embedding(ctx));
  out.push_back(stability(ctx, Grid(c.grid.h, n, c.grid.offset), c.times.T));
  return out;
}

}  // namespace pdhs::cli
