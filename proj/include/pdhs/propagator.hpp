#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "pdhs/grid.hpp"

namespace pdhs {

/// Per-mode generator M(xi_k) of a linear semi-discrete system written as
/// d/dt U_hat = M U_hat.
using ModeGenerator =
    std::function<Eigen::MatrixXcd(const Grid& grid, std::size_t mode)>;

/// -i sigma A - B with sigma = sin(xi h)/h.
ModeGenerator central_generator(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
/// [[0, -i sigma], [-i sigma/eps^2, -1/eps^2]].
ModeGenerator relaxed_euler_generator(double eps);
/// [[-sigma^2]].
ModeGenerator heat_generator();

/// Padé scaling-and-squaring exponential.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& M);

/// Generators and their eigendecompositions for every mode of a grid.
/// Modes whose eigenvector matrix is too ill-conditioned (including the
/// defective ones) are exponentiated directly instead.
class PropagatorCache {
 public:
  /// Beyond this eigenvector condition number the eigendecomposition can
  /// no longer deliver 1e-12 relative accuracy.
  static constexpr double kConditionLimit = 1e4;

  PropagatorCache(const Grid& grid, const ModeGenerator& generator);

  const Grid& grid() const { return grid_; }
  int dimension() const { return dim_; }
  const Eigen::MatrixXcd& generator(std::size_t mode) const { return modes_[mode].M; }
  bool diagonalized(std::size_t mode) const { return modes_[mode].diagonal; }
  std::size_t fallback_count() const;

  /// exp(M(xi_k) t).
  Eigen::MatrixXcd propagator(std::size_t mode, double t) const;
  Eigen::VectorXcd apply(std::size_t mode, double t, const Eigen::VectorXcd& x) const;

  // Eigen-coordinates, usable when diagonalized(mode).
  const Eigen::VectorXcd& eigenvalues(std::size_t mode) const { return modes_[mode].lambda; }
  const Eigen::MatrixXcd& eigenvectors(std::size_t mode) const { return modes_[mode].V; }
  const Eigen::MatrixXcd& inverse_eigenvectors(std::size_t mode) const {
    return modes_[mode].Vinv;
  }

 private:
  struct Mode {
    Eigen::MatrixXcd M;
    Eigen::VectorXcd lambda;
    Eigen::MatrixXcd V, Vinv;
    bool diagonal = false;
  };
  Grid grid_;
  int dim_ = 0;
  std::vector<Mode> modes_;
};

/// One spectral coefficient vector per component.
using SpectralState = std::vector<SpectralFunction>;

/// Exact evolution of a fixed initial spectrum, precomputing the
/// eigen-coordinates of the data so each evaluation costs O(n N^2).
class SpectralEvolution {
 public:
  SpectralEvolution(std::shared_ptr<const PropagatorCache> cache, SpectralState u0);

  const PropagatorCache& cache() const { return *cache_; }
  SpectralState at(double t) const;

 private:
  std::shared_ptr<const PropagatorCache> cache_;
  SpectralState u0_;
  std::vector<Eigen::VectorXcd> coords_;
};

}  // namespace pdhs
