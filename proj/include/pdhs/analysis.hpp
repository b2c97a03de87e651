#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pdhs/grid.hpp"
#include "pdhs/lp.hpp"
#include "pdhs/profile.hpp"
#include "pdhs/propagator.hpp"
#include "pdhs/solver.hpp"
#include "pdhs/system.hpp"

namespace pdhs {

// ---------------------------------------------------------------------
// Hypocoercive Lyapunov functional
// ---------------------------------------------------------------------

/// Constants of L = ||U||^2_{h^1} + eta0 t ||D_h U||^2 + I(U), where
/// I = sum_k eps_k <B A^{k-1} U, B A^k D_h U>.
struct CorrectorConstants {
  double eta0 = 0.0;
  double eps0 = 0.0;
  /// eps_k[k-1] is eps_k, k = 1 .. N-1.
  std::vector<double> eps_k;
  bool e1 = false;
  bool e11 = false;
  bool e2 = false;
  /// Sum_k eps_k |B|^2 |A|^{2k-1} <= 1/2, which makes L comparable to the
  /// energy within a factor 2.
  bool equivalence = false;
  /// The per-mode time derivative of L is negative semidefinite.
  bool spectral = false;
  double C = 0.0;
  double C2 = 0.0;
  double base = 0.0;
  int shrink_steps = 0;

  bool all_hold() const { return e1 && e11 && e2 && equivalence && spectral; }
};

/// Operator-norm constant used in the corrector constraints.
double corrector_constant(const SystemSpec& spec);
/// C2 with lambda |y_2|^2 + sum_k eps_k |B A^k y|^2 >= eps_*/C2 |y|^2,
/// eps_* = min(lambda, eps_k). Throws KalmanFails.
double norm_equivalence_constant(const SystemSpec& spec);

/// Largest eigenvalue of the sigma-independent part Q0(sigma) of the
/// per-mode derivative of L, maximized over a logarithmic sigma grid
/// (both signs), together with the leading sigma^2 coefficient.
struct SpectralCertificate {
  double max_eigenvalue = 0.0;
  double leading_eigenvalue = 0.0;
  bool holds = false;
};
SpectralCertificate spectral_certificate(const SystemSpec& spec,
                                         const CorrectorConstants& c);

/// eps_k = base^{m_k}, m_k = 1 + c k - delta k (k-1), c = 1 + 2 delta (N-1),
/// delta = 1/10; base halves until every certificate holds.
/// Throws KalmanFails or NoConvergence.
CorrectorConstants choose_corrector_constants(const SystemSpec& spec);

double corrector(const SystemSpec& spec, const VectorGridFunction& U,
                 const CorrectorConstants& c);
double corrector(const SystemSpec& spec, const SpectralState& U,
                 const CorrectorConstants& c);
double lyapunov(const SystemSpec& spec, const VectorGridFunction& U, double t,
                const CorrectorConstants& c);
double lyapunov(const SystemSpec& spec, const SpectralState& U, double t,
                const CorrectorConstants& c);
/// ||U||_{h^1_h} = (||U||^2 + ||D_h U||^2)^{1/2}.
double h1_norm(const SpectralState& U);
double h1_norm(const VectorGridFunction& U);

// ---------------------------------------------------------------------
// Decay
// ---------------------------------------------------------------------

struct DecayRecord {
  std::vector<double> times;
  std::vector<double> norm_u2;
  std::vector<double> norm_dhU;
  std::vector<double> lyapunov;
  double h1_norm_initial = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double stderr_slope = 0.0;
};

/// Least squares y = a x + b.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

DecayRecord decay_record(const SystemSpec& spec, const SpectralState& U0,
                         const std::vector<double>& times, const CorrectorConstants& c);
DecayRecord decay_record(const SystemSpec& spec, const VectorGridFunction& U0,
                         const std::vector<double>& times, const CorrectorConstants& c);

/// Slope of log(norm_u2 + norm_dhU) against log(1 + t) on [t_lo, t_hi].
/// Throws InsufficientSamples (fewer than 10) or NonPositiveNorm.
LinearFit decay_rate_fit(const DecayRecord& r, double t_lo, double t_hi);

/// sup_t (1 + t)^{1/2} (norm_u2 + norm_dhU) / ||U0||_{h^1}.
double decay_constant(const DecayRecord& r);

enum class Spacing { kLinear, kLog };
/// Linear: samples points on [0, T]. Log: t = 0 followed by samples - 1
/// log-spaced points on [1e-2, T].
std::vector<double> make_times(double T, std::size_t samples, Spacing spacing);

void write_decay_csv(std::ostream& os, const DecayRecord& r);

/// int_0^t e^{-lambda (t - tau)} (1 + tau)^{-1/2} d tau.
double exponential_convolution(double lambda, double t);

/// Share of l2 mass within `fraction` of the window length from either
/// edge. Long runs should keep this below 1e-8.
double boundary_mass_fraction(const GridFunction& v, double fraction = 0.05);
inline constexpr double kBoundaryMassLimit = 1e-8;

// ---------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------

enum class InitialDataKind { kDecay, kRelax };

InitialDataKind parse_initial_data(const std::string& name);

struct InitialProfiles {
  ProfilePtr rho0;
  ProfilePtr u0;
};

struct InitialSpectra {
  SpectralFunction rho0;
  SpectralFunction u0;
};

struct InitialData {
  GridFunction rho0;
  GridFunction u0;
};

/// decay: (x^2 + 1e-6)^{-1/4} with the cutoff scaled to the window
/// half-length; relax: bumps centred at 1 and 1.5. Throws SupportOverflow.
InitialProfiles initial_profiles(InitialDataKind kind, const Grid& grid);
InitialSpectra initial_spectra(InitialDataKind kind, const Grid& grid);
InitialData make_initial_data(InitialDataKind kind, const Grid& grid);

/// Window of half-length L around the origin at spacing h.
Grid window_grid(double h, double L, double offset = 0.0);

struct HTruncationResult {
  bool holds = false;
  /// ||rho0 - rho0*||_{H^{s'-2}}.
  double discrepancy = 0.0;
  double rho_star_norm = 0.0;
  double u_star_norm = 0.0;
  double rho_norm = 0.0;
};

/// Conditions (ii)-(iv) hold by construction when the grid data are the
/// truncations of these profiles; checks the H^{s'} regularity and the
/// closeness condition (i) against eps^2. Throws RegularityFail.
HTruncationResult h_truncation_check(const ProfilePtr& rho0_star, const ProfilePtr& u0_star,
                                     const ProfilePtr& rho0, double s_prime, double eps);

// ---------------------------------------------------------------------
// Relaxation
// ---------------------------------------------------------------------

struct RelaxationSetup {
  double eps = 0.0;
  double h = 0.0;
  double T = 5.0;
  double s = 2.25;
  double s_prime = 3.0;
  double kappa = 0.5;
  std::vector<double> sample_times;
  double window_half_length = 32.0;
  double offset = 0.0;
};

struct RelaxationErrorRecord {
  double eps = 0.0;
  double h = 0.0;
  double T = 0.0;
  double sup_error_besov = 0.0;
  double l1t_error_besov = 0.0;
  double darcy_l1t = 0.0;
  double sup_error_linf = 0.0;
  double darcy_l1t_linf = 0.0;
  /// Low/high split of darcy_l1t at 2^J = kappa/eps.
  double darcy_l1t_low = 0.0;
  double darcy_l1t_high = 0.0;
  /// Largest relative change of an L^1_T value under halved sample density.
  double quadrature_change = 0.0;
};

/// Samples on [0, T]: `layer` points across the initial layer [0, 40 eps^2]
/// followed by `bulk` points on the rest.
std::vector<double> relaxation_sample_times(double eps, double T, std::size_t layer = 2000,
                                            std::size_t bulk = 4000);

/// Uses relaxation_sample_times when setup.sample_times is empty.
/// Throws QuadratureUnresolved when halving the sample density moves an
/// L^1_T value by 1% or more.
RelaxationErrorRecord relaxation_errors(const RelaxationSetup& setup);
RelaxationErrorRecord relaxation_errors(const RelaxationSetup& setup,
                                        const InitialSpectra& data);

struct OrderReport {
  struct Column {
    std::string name;
    double slope = 0.0;
    double stderr_slope = 0.0;
  };
  std::vector<Column> columns;

  const Column& column(const std::string& name) const;
};

/// Least-squares slope of log(error) against log(eps) per column.
/// Throws InsufficientSamples (fewer than 4 distinct eps).
OrderReport convergence_order(const std::vector<RelaxationErrorRecord>& records);

void write_relaxation_csv(std::ostream& os, const std::vector<RelaxationErrorRecord>& rows);
void write_fit_report(std::ostream& os, const OrderReport& report);

/// (max - min) / max of the entries, 0 for an empty or all-zero list.
double relative_spread(const std::vector<double>& values);

}  // namespace pdhs
