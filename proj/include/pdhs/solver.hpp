#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pdhs/grid.hpp"
#include "pdhs/propagator.hpp"
#include "pdhs/system.hpp"

namespace pdhs {

/// N grid functions on one grid.
class VectorGridFunction {
 public:
  VectorGridFunction(const Grid& grid, int N);
  explicit VectorGridFunction(std::vector<GridFunction> components);

  const Grid& grid() const { return components_.front().grid(); }
  int dimension() const { return static_cast<int>(components_.size()); }
  const GridFunction& operator[](std::size_t c) const { return components_[c]; }
  GridFunction& operator[](std::size_t c) { return components_[c]; }
  const std::vector<GridFunction>& components() const { return components_; }

 private:
  std::vector<GridFunction> components_;
};

SpectralState dft(const VectorGridFunction& u);
VectorGridFunction idft_real(const SpectralState& g);
/// sqrt of the sum of squared component norms.
double l2_norm(const VectorGridFunction& u);
double l2_norm(const SpectralState& g);
VectorGridFunction d_central(const VectorGridFunction& u);

/// Right-hand side F(t, U) of dU/dt = F(t, U). RK4 refuses steps larger
/// than max_dt.
struct SemidiscreteRhs {
  std::function<void(double t, const VectorGridFunction& u, VectorGridFunction& out)> eval;
  double max_dt = std::numeric_limits<double>::infinity();
  std::string name;
};

SemidiscreteRhs zero_rhs();
/// -A D_h U - B U.
SemidiscreteRhs system_rhs(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
SemidiscreteRhs system_rhs(const SystemSpec& spec);
/// (rho, u) with d rho/dt = -D_h u, eps^2 du/dt = -(D_h rho + u); max_dt = eps^2/4.
SemidiscreteRhs relaxed_euler_rhs(double eps);
/// d rho/dt = D_h D_h rho.
SemidiscreteRhs heat_rhs();

/// Exact per-mode solution of dU/dt + A D_h U = -B U at each time.
std::vector<VectorGridFunction> spectral_propagate(const SystemSpec& spec,
                                                   const VectorGridFunction& u0,
                                                   const std::vector<double>& times);

/// Classical RK4 with fixed step dt (the last step is shortened to land on
/// T). Samples inside a step come from cubic Hermite interpolation.
/// Throws StiffnessGuard and NonFinite.
std::vector<VectorGridFunction> rk4_evolve(const SemidiscreteRhs& rhs,
                                           const VectorGridFunction& u0, double dt,
                                           double T,
                                           const std::vector<double>& sample_times);

struct RelaxedState {
  GridFunction rho;
  GridFunction u;
};

struct HeatState {
  GridFunction rho;
  GridFunction u_darcy;
};

std::vector<RelaxedState> solve_relaxed_euler(double eps, const GridFunction& rho0,
                                              const GridFunction& u0,
                                              const std::vector<double>& times);

std::vector<HeatState> solve_discrete_heat(const GridFunction& rho0,
                                           const std::vector<double>& times);

enum class Scheme { kPlus, kMinus, kCentral };

const char* to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

struct StabilityReport {
  double max_amplification = 0.0;
  bool stable = false;
  double worst_frequency = 0.0;
};

/// Largest operator norm of exp((-A m(xi) - B) T) over the grid modes,
/// m the Fourier symbol of the chosen difference operator. Takes raw
/// symmetric matrices so scalar and undamped cases can be examined.
StabilityReport stability_report(Scheme scheme, const Eigen::MatrixXd& A,
                                 const Eigen::MatrixXd& B, const Grid& grid, double T);
StabilityReport stability_report(Scheme scheme, const SystemSpec& spec, const Grid& grid,
                                 double T);

/// D_h rho + u.
GridFunction damped_mode(const GridFunction& rho, const GridFunction& u);

}  // namespace pdhs
