#pragma once

#include <Eigen/Dense>

namespace pdhs {

/// Validated pair (A, B) of a partially dissipative system
///   dU/dt + A D_h U = -B U,   B = diag(0, B_tilde).
struct SystemSpec {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  int N = 0;
  int N2 = 0;
  double lambda = 0.0;

  Eigen::MatrixXd b_tilde() const { return B.bottomRightCorner(N2, N2); }
};

struct KalmanCertificate {
  Eigen::MatrixXd K_matrix;
  int numerical_rank = 0;
  Eigen::VectorXd singular_values;
  bool holds = false;
};

inline constexpr int kMaxSystemDimension = 16;

/// Throws NonSymmetric, BadBlockStructure, NotDissipative or
/// DimensionMismatch.
SystemSpec validate_system(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           int N2);

/// The linearized isentropic Euler pair A = [[0,1],[1,0]], B = diag(0,1).
SystemSpec euler_system();

/// (B | AB | ... | A^{N-1} B), an N x N^2 matrix.
Eigen::MatrixXd kalman_matrix(const SystemSpec& spec);

/// Default relative threshold N * machine epsilon.
double default_kalman_tolerance(const SystemSpec& spec);

KalmanCertificate kalman_rank_holds(const SystemSpec& spec, double tol);
KalmanCertificate kalman_rank_holds(const SystemSpec& spec);

/// c with A^N = sum_j c[j] A^j.
Eigen::VectorXd cayley_hamilton_coeffs(const SystemSpec& spec);
Eigen::VectorXd cayley_hamilton_coeffs(const Eigen::MatrixXd& A);

/// (sum_k |B A^k y|^2)^{1/2}; a norm exactly when the Kalman condition holds.
double kalman_norm(const SystemSpec& spec, const Eigen::VectorXcd& y);

}  // namespace pdhs
