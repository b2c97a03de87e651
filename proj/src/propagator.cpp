#include "pdhs/propagator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "pdhs/errors.hpp"
#include "pdhs/parallel.hpp"

namespace pdhs {

ModeGenerator central_generator(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const Eigen::MatrixXcd Ac = A.cast<Complex>();
  const Eigen::MatrixXcd Bc = B.cast<Complex>();
  return [Ac, Bc](const Grid& grid, std::size_t mode) -> Eigen::MatrixXcd {
    const double sigma = grid.symbol(mode);
    return Complex(0.0, -sigma) * Ac - Bc;
  };
}

ModeGenerator relaxed_euler_generator(double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::kNonPositiveParameter, "eps must be positive");
  const double inv = 1.0 / (eps * eps);
  return [inv](const Grid& grid, std::size_t mode) -> Eigen::MatrixXcd {
    const double sigma = grid.symbol(mode);
    Eigen::MatrixXcd M(2, 2);
    M << 0.0, Complex(0.0, -sigma), Complex(0.0, -sigma * inv), -inv;
    return M;
  };
}

ModeGenerator heat_generator() {
  return [](const Grid& grid, std::size_t mode) -> Eigen::MatrixXcd {
    const double sigma = grid.symbol(mode);
    return Eigen::MatrixXcd::Constant(1, 1, -sigma * sigma);
  };
}

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& M) {
  Eigen::MatrixXcd E = M.exp();
  if (!E.allFinite()) fail(ErrorCode::kNonFinite, "matrix exponential overflowed");
  return E;
}

PropagatorCache::PropagatorCache(const Grid& grid, const ModeGenerator& generator)
    : grid_(grid), modes_(grid.size()) {
  dim_ = static_cast<int>(generator(grid, 0).rows());
  parallel_for(0, grid.size(), [&](std::size_t k) {
    Mode& m = modes_[k];
    m.M = generator(grid, k);
    if (m.M.rows() != dim_ || m.M.cols() != dim_ || !m.M.allFinite()) {
      fail(ErrorCode::kNonFinite, "bad generator at mode " + std::to_string(k));
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(m.M);
    if (eig.info() != Eigen::Success) return;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eig.eigenvectors());
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > kConditionLimit) return;
    m.lambda = eig.eigenvalues();
    m.V = eig.eigenvectors();
    m.Vinv = m.V.inverse();
    m.diagonal = true;
  });
}

std::size_t PropagatorCache::fallback_count() const {
  std::size_t c = 0;
  for (const Mode& m : modes_) c += m.diagonal ? 0 : 1;
  return c;
}

Eigen::MatrixXcd PropagatorCache::propagator(std::size_t mode, double t) const {
  const Mode& m = modes_[mode];
  if (!m.diagonal) return matrix_exponential(m.M * t);
  const Eigen::VectorXcd e = (m.lambda * t).array().exp().matrix();
  return m.V * e.asDiagonal() * m.Vinv;
}

Eigen::VectorXcd PropagatorCache::apply(std::size_t mode, double t,
                                        const Eigen::VectorXcd& x) const {
  const Mode& m = modes_[mode];
  if (!m.diagonal) return matrix_exponential(m.M * t) * x;
  const Eigen::VectorXcd c = m.Vinv * x;
  return m.V * (c.array() * (m.lambda * t).array().exp()).matrix();
}

SpectralEvolution::SpectralEvolution(std::shared_ptr<const PropagatorCache> cache,
                                     SpectralState u0)
    : cache_(std::move(cache)), u0_(std::move(u0)) {
  const int n = cache_->dimension();
  if (static_cast<int>(u0_.size()) != n) {
    fail(ErrorCode::kDimensionMismatch, "initial state has wrong component count");
  }
  for (const auto& c : u0_) require_same_grid(c.grid(), cache_->grid());
  const std::size_t modes = cache_->grid().size();
  coords_.resize(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    Eigen::VectorXcd x(n);
    for (int c = 0; c < n; ++c) x(c) = u0_[static_cast<std::size_t>(c)][k];
    coords_[k] = cache_->diagonalized(k) ? Eigen::VectorXcd(cache_->inverse_eigenvectors(k) * x)
                                         : x;
  }
}

SpectralState SpectralEvolution::at(double t) const {
  const int n = cache_->dimension();
  const Grid& grid = cache_->grid();
  SpectralState out(static_cast<std::size_t>(n), SpectralFunction(grid));
  parallel_for(0, grid.size(), [&](std::size_t k) {
    Eigen::VectorXcd y;
    if (cache_->diagonalized(k)) {
      const auto& lam = cache_->eigenvalues(k);
      y = cache_->eigenvectors(k) *
          (coords_[k].array() * (lam * t).array().exp()).matrix();
    } else {
      y = cache_->propagator(k, t) * coords_[k];
    }
    for (int c = 0; c < n; ++c) out[static_cast<std::size_t>(c)][k] = y(c);
  });
  return out;
}

}  // namespace pdhs
