#include "pdhs/lp.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "pdhs/errors.hpp"

namespace pdhs {

PartitionOfUnity::PartitionOfUnity(double inner, double outer)
    : inner_(inner), outer_(outer) {
  if (!(inner > 0.0) || !(outer > inner)) {
    fail(ErrorCode::kInvalidArgument, "cutoff needs 0 < inner < outer");
  }
}

double PartitionOfUnity::chi(double r) const {
  if (r <= inner_) return 1.0;
  if (r >= outer_) return 0.0;
  return 1.0 - smoothstep((r - inner_) / (outer_ - inner_));
}

double PartitionOfUnity::phi(int j, double zeta) const {
  if (zeta == 0.0) return 0.0;
  return chi(std::ldexp(zeta, -(j + 1))) - chi(std::ldexp(zeta, -j));
}

BandGeometry::BandGeometry(const Grid& grid) : grid_(grid) {
  double zmin = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = grid.zeta(i);
    if (z > 0.0 && (zmin == 0.0 || z < zmin)) zmin = z;
  }
  j_min_ = static_cast<int>(std::floor(std::log2(0.75 * zmin)));
  j_max_ = static_cast<int>(std::floor(std::log2(4.0 / (3.0 * grid.h()))));
}

double BandGeometry::annulus_lo(int j) { return std::ldexp(0.75, j); }

double BandGeometry::annulus_hi(int j) { return std::ldexp(4.0 / 3.0, j + 1); }

bool BandGeometry::in_annulus(int j, double zeta) {
  return zeta >= annulus_lo(j) && zeta <= annulus_hi(j);
}

LPDecomposition::LPDecomposition(const Grid& grid, PartitionOfUnity p)
    : geometry_(grid), partition_(p) {
  bands_.resize(static_cast<std::size_t>(j_max() - j_min() + 1));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = grid.zeta(i);
    if (z == 0.0) continue;
    for (int j = j_min(); j <= j_max(); ++j) {
      const double w = partition_.phi(j, z);
      if (w != 0.0) bands_[static_cast<std::size_t>(j - j_min())].push_back({i, w});
    }
  }
}

bool LPDecomposition::active(int j) const {
  return j >= j_min() && j <= j_max() && !bands_[static_cast<std::size_t>(j - j_min())].empty();
}

std::vector<double> LPDecomposition::weights(int j) const {
  const Grid& grid = geometry_.grid();
  std::vector<double> w(grid.size(), 0.0);
  if (j < j_min() || j > j_max()) {
    // Bands just outside the active range can still touch the extreme
    // modes when a custom partition is used.
    for (std::size_t i = 0; i < grid.size(); ++i) w[i] = partition_.phi(j, grid.zeta(i));
    return w;
  }
  for (const Entry& e : bands_[static_cast<std::size_t>(j - j_min())]) w[e.mode] = e.weight;
  return w;
}

SpectralFunction LPDecomposition::localize(const SpectralFunction& g, int j) const {
  require_same_grid(g.grid(), geometry_.grid());
  SpectralFunction out(g.grid());
  if (j < j_min() - 1 || j > j_max() + 1) return out;
  const std::vector<double> w = weights(j);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = w[i] * g[i];
  return out;
}

std::vector<double> LPDecomposition::band_norms(const SpectralFunction& g) const {
  require_same_grid(g.grid(), geometry_.grid());
  const double dxi = g.grid().frequency_step();
  std::vector<double> norms(bands_.size());
  for (std::size_t b = 0; b < bands_.size(); ++b) {
    double s = 0.0;
    for (const Entry& e : bands_[b]) s += e.weight * e.weight * std::norm(g[e.mode]);
    norms[b] = std::sqrt(s * dxi);
  }
  return norms;
}

double LPDecomposition::besov_norm(const SpectralFunction& g, double s) const {
  const std::vector<double> norms = band_norms(g);
  double total = 0.0;
  for (std::size_t b = 0; b < norms.size(); ++b) {
    total += std::exp2(s * (j_min() + static_cast<int>(b))) * norms[b];
  }
  return total;
}

SplitNorm LPDecomposition::besov_norm_split(const SpectralFunction& g, double s,
                                            double kappa, double eps) const {
  if (!(kappa > 0.0) || !(eps > 0.0)) {
    fail(ErrorCode::kNonPositiveParameter, "kappa and eps must be positive");
  }
  double J = std::log2(kappa / eps);
  if (std::abs(J - std::round(J)) < 1e-12) J = std::round(J);
  const std::vector<double> norms = band_norms(g);
  SplitNorm out;
  for (std::size_t b = 0; b < norms.size(); ++b) {
    const int j = j_min() + static_cast<int>(b);
    const double term = std::exp2(s * j) * norms[b];
    if (j <= J) out.low += term;
    if (j >= J) out.high += term;
  }
  return out;
}

GridFunction localize(const GridFunction& v, int j, const PartitionOfUnity& p) {
  const LPDecomposition lp(v.grid(), p);
  return idft_real(lp.localize(dft(v), j));
}

double besov_norm(const GridFunction& v, double s, const PartitionOfUnity& p) {
  return LPDecomposition(v.grid(), p).besov_norm(dft(v), s);
}

SplitNorm besov_norm_split(const GridFunction& v, double s, double kappa,
                           double eps, const PartitionOfUnity& p) {
  return LPDecomposition(v.grid(), p).besov_norm_split(dft(v), s, kappa, eps);
}

BernsteinResult bernstein_check(const GridFunction& v, int j,
                                const PartitionOfUnity& p) {
  const GridFunction loc = localize(v, j, p);
  const double norm = l2_norm(loc);
  if (!(norm > 1e-13 * l2_norm(v))) {
    fail(ErrorCode::kZeroLocalization,
         "band " + std::to_string(j) + " carries no energy");
  }
  BernsteinResult r;
  r.ratio = l2_norm(d_central(loc)) / norm;
  r.lower_ok = r.ratio >= BandGeometry::annulus_lo(j);
  r.upper_ok = r.ratio <= std::ldexp(8.0 / 3.0, j);
  return r;
}

namespace {

double measure_on(int j, const Grid& grid, double a, double b,
                  std::size_t quad_points) {
  if (quad_points < 1000) {
    fail(ErrorCode::kInvalidArgument, "band_measure needs at least 1000 points");
  }
  const double h = grid.h();
  const double dx = (b - a) / static_cast<double>(quad_points);
  std::size_t hits = 0;
  for (std::size_t q = 0; q < quad_points; ++q) {
    const double xi = a + (static_cast<double>(q) + 0.5) * dx;
    if (BandGeometry::in_annulus(j, std::abs(std::sin(xi * h)) / h)) ++hits;
  }
  return static_cast<double>(hits) * dx;
}

}  // namespace

double band_measure(int j, const Grid& grid, std::size_t quad_points) {
  const double top = std::numbers::pi / grid.h();
  return measure_on(j, grid, -top, top, quad_points);
}

double band_measure_positive(int j, const Grid& grid, std::size_t quad_points) {
  return measure_on(j, grid, 0.0, std::numbers::pi / grid.h(), quad_points);
}

double linf_embedding_check(const GridFunction& v, const PartitionOfUnity& p) {
  const LPDecomposition lp(v.grid(), p);
  SpectralFunction g = dft(v);
  const double b = lp.besov_norm(g, 0.5);
  if (!(b > 0.0)) fail(ErrorCode::kZeroNorm, "Besov norm of order 1/2 vanishes");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (v.grid().zeta(i) == 0.0) g[i] = 0.0;
  }
  return linf_norm(idft_real(g)) / b;
}

std::vector<double> uniform_besov_check(const Profile& f, double s, double s_prime,
                                        const std::vector<Grid>& grids,
                                        const PartitionOfUnity& p) {
  if (!(s > 0.0) || s >= s_prime) {
    fail(ErrorCode::kParameterOrder, "need 0 < s < s'");
  }
  const double denom = f.sobolev_norm(s_prime);
  std::vector<double> ratios;
  for (const Grid& grid : grids) {
    const LPDecomposition lp(grid, p);
    const double num = lp.besov_norm(f.spectrum(grid), s);
    ratios.push_back(denom > 0.0 ? num / denom : 0.0);
  }
  return ratios;
}

double uniform_besov_bound(const Grid& grid, double s, double s_prime) {
  const BandGeometry geo(grid);
  double sum = 0.0;
  for (int j = geo.j_min(); j <= geo.j_max(); ++j) {
    sum += std::exp2(s * j) / (1.0 + std::exp2(s_prime * j));
  }
  return std::sqrt(2.0) * sum;
}

std::vector<BandDiagnostic> band_diagnostics(const GridFunction& v, double s,
                                             const PartitionOfUnity& p,
                                             std::size_t quad_points) {
  const LPDecomposition lp(v.grid(), p);
  const std::vector<double> norms = lp.band_norms(dft(v));
  std::vector<BandDiagnostic> rows;
  for (int j = lp.j_min(); j <= lp.j_max(); ++j) {
    BandDiagnostic d;
    d.j = j;
    d.band_lo = BandGeometry::annulus_lo(j);
    d.band_hi = BandGeometry::annulus_hi(j);
    d.measure = band_measure(j, v.grid(), quad_points);
    d.norm_contribution =
        std::exp2(s * j) * norms[static_cast<std::size_t>(j - lp.j_min())];
    rows.push_back(d);
  }
  return rows;
}

void write_band_csv(std::ostream& os, const std::vector<BandDiagnostic>& rows) {
  os << "j,band_lo,band_hi,measure,norm_contribution\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g\n", r.j, r.band_lo,
                  r.band_hi, r.measure, r.norm_contribution);
    os << line;
  }
}

}  // namespace pdhs
