#pragma once

#include <iosfwd>
#include <vector>

#include "pdhs/grid.hpp"
#include "pdhs/profile.hpp"

namespace pdhs {

/// chi = 1 on [0, inner], 0 on [outer, inf), quintic smoothstep between;
/// phi_j(zeta) = chi(zeta/2^{j+1}) - chi(zeta/2^j).
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(double inner = 1.0, double outer = 4.0 / 3.0);

  double inner() const { return inner_; }
  double outer() const { return outer_; }
  double chi(double r) const;
  /// Zero at zeta = 0.
  double phi(int j, double zeta) const;

 private:
  double inner_;
  double outer_;
};

/// Dyadic bands F_h(j) = { xi : |sin(xi h)|/h in [3/4 2^j, 4/3 2^{j+1}] }.
class BandGeometry {
 public:
  explicit BandGeometry(const Grid& grid);

  const Grid& grid() const { return grid_; }
  /// Lowest band needed so that the partition sums to one at every mode
  /// with zeta > 0: floor(log2(3/4 zeta_min)).
  int j_min() const { return j_min_; }
  /// Largest j with 3/4 2^j <= 1/h.
  int j_max() const { return j_max_; }
  double zeta(std::size_t mode) const { return grid_.zeta(mode); }

  static double annulus_lo(int j);
  static double annulus_hi(int j);
  static bool in_annulus(int j, double zeta);

 private:
  Grid grid_;
  int j_min_;
  int j_max_;
};

struct SplitNorm {
  double low = 0.0;
  double high = 0.0;
};

struct BernsteinResult {
  bool lower_ok = false;
  bool upper_ok = false;
  double ratio = 0.0;
};

struct BandDiagnostic {
  int j = 0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  double measure = 0.0;
  double norm_contribution = 0.0;
};

/// Band geometry plus a per-band table of (mode, phi_j) pairs, so band
/// norms cost O(n) in total.
class LPDecomposition {
 public:
  explicit LPDecomposition(const Grid& grid, PartitionOfUnity p = PartitionOfUnity());

  const BandGeometry& geometry() const { return geometry_; }
  const PartitionOfUnity& partition() const { return partition_; }
  int j_min() const { return geometry_.j_min(); }
  int j_max() const { return geometry_.j_max(); }

  /// Band j has a mode with phi_j > 0. The top band of the range can be
  /// empty when 1/h is a power of two.
  bool active(int j) const;
  /// phi_j at every mode of the grid.
  std::vector<double> weights(int j) const;
  SpectralFunction localize(const SpectralFunction& g, int j) const;
  /// ||delta_j v||_{l2} for j = j_min .. j_max.
  std::vector<double> band_norms(const SpectralFunction& g) const;
  double besov_norm(const SpectralFunction& g, double s) const;
  SplitNorm besov_norm_split(const SpectralFunction& g, double s, double kappa,
                             double eps) const;

 private:
  struct Entry {
    std::size_t mode;
    double weight;
  };
  BandGeometry geometry_;
  PartitionOfUnity partition_;
  std::vector<std::vector<Entry>> bands_;
};

/// Outside [j_min - 1, j_max + 1] returns the zero function.
GridFunction localize(const GridFunction& v, int j,
                      const PartitionOfUnity& p = PartitionOfUnity());
double besov_norm(const GridFunction& v, double s,
                  const PartitionOfUnity& p = PartitionOfUnity());
/// J = log2(kappa/eps). Band j counts as low iff j <= J and as high iff
/// j >= J, so an integer J lands in both sums. Throws NonPositiveParameter.
SplitNorm besov_norm_split(const GridFunction& v, double s, double kappa,
                           double eps,
                           const PartitionOfUnity& p = PartitionOfUnity());
/// Throws ZeroLocalization.
BernsteinResult bernstein_check(const GridFunction& v, int j,
                                const PartitionOfUnity& p = PartitionOfUnity());
/// Lebesgue measure of F_h(j) by midpoint sampling of [-pi/h, pi/h].
double band_measure(int j, const Grid& grid, std::size_t quad_points);
/// Same restricted to xi > 0.
double band_measure_positive(int j, const Grid& grid, std::size_t quad_points);
/// ||v - (zero-symbol modes)||_inf / besov_norm(v, 1/2). Throws ZeroNorm.
double linf_embedding_check(const GridFunction& v,
                            const PartitionOfUnity& p = PartitionOfUnity());
/// ||T_h f||_{B^s_h} / ||f||_{H^{s'}} for each grid. Throws ParameterOrder.
std::vector<double> uniform_besov_check(const Profile& f, double s,
                                        double s_prime,
                                        const std::vector<Grid>& grids,
                                        const PartitionOfUnity& p = PartitionOfUnity());
/// sqrt(2) sum_{j_min}^{j_max} 2^{js}/(1 + 2^{js'}), an upper bound for
/// the ratios of uniform_besov_check on this grid.
double uniform_besov_bound(const Grid& grid, double s, double s_prime);

std::vector<BandDiagnostic> band_diagnostics(
    const GridFunction& v, double s,
    const PartitionOfUnity& p = PartitionOfUnity(),
    std::size_t quad_points = 100000);
void write_band_csv(std::ostream& os, const std::vector<BandDiagnostic>& rows);

}  // namespace pdhs
