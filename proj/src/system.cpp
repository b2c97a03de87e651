#include "pdhs/system.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pdhs/errors.hpp"

namespace pdhs {
namespace {

bool symmetric(const Eigen::MatrixXd& M) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

SystemSpec validate_system(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           int N2) {
  const auto n = A.rows();
  if (A.cols() != n || B.rows() != n || B.cols() != n) {
    fail(ErrorCode::kDimensionMismatch, "A and B must be square of equal size");
  }
  if (n < 2 || n > kMaxSystemDimension) {
    fail(ErrorCode::kDimensionMismatch,
         "state dimension must lie in [2, 16], got " + std::to_string(n));
  }
  if (N2 < 1 || N2 >= n) {
    fail(ErrorCode::kDimensionMismatch,
         "N2 must satisfy 1 <= N2 < N, got " + std::to_string(N2));
  }
  if (!A.allFinite() || !B.allFinite()) {
    fail(ErrorCode::kNumericOverflow, "non-finite matrix entry");
  }
  if (!symmetric(A)) fail(ErrorCode::kNonSymmetric, "A is not symmetric");
  if (!symmetric(B)) fail(ErrorCode::kNonSymmetric, "B is not symmetric");

  const int n1 = static_cast<int>(n) - N2;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if ((i < n1 || j < n1) && B(i, j) != 0.0) {
        std::ostringstream msg;
        msg << "B(" << i << "," << j << ") = " << B(i, j)
            << " lies outside the trailing " << N2 << "x" << N2 << " block";
        fail(ErrorCode::kBadBlockStructure, msg.str());
      }
    }
  }

  SystemSpec spec;
  spec.A = 0.5 * (A + A.transpose());
  spec.B = 0.5 * (B + B.transpose());
  spec.N = static_cast<int>(n);
  spec.N2 = N2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(spec.b_tilde(),
                                                     Eigen::EigenvaluesOnly);
  spec.lambda = eig.eigenvalues().minCoeff();
  if (!(spec.lambda > 0.0)) {
    std::ostringstream msg;
    msg << "smallest eigenvalue of B_tilde is " << spec.lambda;
    fail(ErrorCode::kNotDissipative, msg.str());
  }
  return spec;
}

SystemSpec euler_system() {
  Eigen::MatrixXd A(2, 2), B(2, 2);
  A << 0, 1, 1, 0;
  B << 0, 0, 0, 1;
  return validate_system(A, B, 1);
}

Eigen::MatrixXd kalman_matrix(const SystemSpec& spec) {
  const int n = spec.N;
  Eigen::MatrixXd K(n, n * n);
  Eigen::MatrixXd power = spec.B;
  for (int k = 0; k < n; ++k) {
    K.middleCols(k * n, n) = power;
    power = spec.A * power;
  }
  if (!K.allFinite()) {
    fail(ErrorCode::kNumericOverflow, "Kalman matrix has non-finite entries");
  }
  return K;
}

double default_kalman_tolerance(const SystemSpec& spec) {
  return spec.N * std::numeric_limits<double>::epsilon();
}

KalmanCertificate kalman_rank_holds(const SystemSpec& spec, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::kNonPositiveParameter, "tol must be > 0");
  KalmanCertificate cert;
  cert.K_matrix = kalman_matrix(spec);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cert.K_matrix);
  cert.singular_values = svd.singularValues();
  const double smax =
      cert.singular_values.size() > 0 ? cert.singular_values(0) : 0.0;
  for (Eigen::Index i = 0; i < cert.singular_values.size(); ++i) {
    if (cert.singular_values(i) > tol * smax) ++cert.numerical_rank;
  }
  cert.holds = cert.numerical_rank == spec.N;
  return cert;
}

KalmanCertificate kalman_rank_holds(const SystemSpec& spec) {
  return kalman_rank_holds(spec, default_kalman_tolerance(spec));
}

Eigen::VectorXd cayley_hamilton_coeffs(const Eigen::MatrixXd& A) {
  const auto n = A.rows();
  // Symmetric A: the characteristic polynomial is prod (x - mu_i) over
  // real eigenvalues; expand the product term by term.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n + 1);  // p[j] multiplies x^j
  p(0) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = eig.eigenvalues()(i);
    for (Eigen::Index j = i + 1; j >= 1; --j) p(j) = p(j - 1) - mu * p(j);
    p(0) = -mu * p(0);
  }
  return -p.head(n);
}

Eigen::VectorXd cayley_hamilton_coeffs(const SystemSpec& spec) {
  return cayley_hamilton_coeffs(spec.A);
}

double kalman_norm(const SystemSpec& spec, const Eigen::VectorXcd& y) {
  double sum = 0.0;
  Eigen::VectorXcd v = y;
  for (int k = 0; k < spec.N; ++k) {
    sum += (spec.B * v).squaredNorm();
    v = spec.A * v;
  }
  return std::sqrt(sum);
}

}  // namespace pdhs
