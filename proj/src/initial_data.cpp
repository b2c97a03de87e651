#include <cmath>
#include <map>
#include <mutex>

#include "pdhs/analysis.hpp"
#include "pdhs/errors.hpp"

namespace pdhs {
namespace {

// Bump transforms are memoized per profile, so sharing one instance per
// process lets h-sweeps on a fixed window reuse them.
const InitialProfiles& relax_profiles() {
  static const InitialProfiles p{bump_profile(1.0), bump_profile(1.5)};
  return p;
}

ProfilePtr shared_decay_profile(double L) {
  static std::mutex mutex;
  static std::map<double, ProfilePtr> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[L];
  if (!slot) slot = decay_profile(L);
  return slot;
}

void check_relax_window(const Grid& grid) {
  const double lo = grid.position(0), hi = grid.position(grid.size() - 1);
  const double margin = 0.05 * 2.0 * grid.half_length();
  if (lo + margin > 0.0 || hi - margin < 2.5) {
    fail(ErrorCode::kSupportOverflow, "window does not hold (0, 2.5) with a 5% margin");
  }
}

}  // namespace

InitialDataKind parse_initial_data(const std::string& name) {
  if (name == "decay_data" || name == "decay") return InitialDataKind::kDecay;
  if (name == "relax_data" || name == "relax") return InitialDataKind::kRelax;
  fail(ErrorCode::kInvalidArgument, "unknown initial data '" + name + "'");
}

InitialProfiles initial_profiles(InitialDataKind kind, const Grid& grid) {
  if (kind == InitialDataKind::kRelax) {
    check_relax_window(grid);
    return relax_profiles();
  }
  const ProfilePtr f = shared_decay_profile(grid.half_length());
  return {f, f};
}

InitialSpectra initial_spectra(InitialDataKind kind, const Grid& grid) {
  const InitialProfiles p = initial_profiles(kind, grid);
  SpectralFunction rho = p.rho0->spectrum(grid);
  if (p.u0 == p.rho0) return {rho, rho};
  return {std::move(rho), p.u0->spectrum(grid)};
}

InitialData make_initial_data(InitialDataKind kind, const Grid& grid) {
  const InitialSpectra s = initial_spectra(kind, grid);
  return {idft_real(s.rho0), idft_real(s.u0)};
}

Grid window_grid(double h, double L, double offset) {
  if (!(h > 0.0) || !(L > 0.0)) fail(ErrorCode::kInvalidGrid, "need h > 0 and L > 0");
  const double n = std::round(2.0 * L / h);
  if (std::abs(n * h - 2.0 * L) > 1e-9 * L) {
    fail(ErrorCode::kInvalidGrid, "2L is not a multiple of h");
  }
  return Grid(h, static_cast<std::size_t>(n), offset);
}

HTruncationResult h_truncation_check(const ProfilePtr& rho0_star, const ProfilePtr& u0_star,
                                     const ProfilePtr& rho0, double s_prime, double eps) {
  if (!(s_prime > 2.0)) fail(ErrorCode::kParameterOrder, "need s' > 2");
  if (!(eps > 0.0)) fail(ErrorCode::kNonPositiveParameter, "need eps > 0");
  HTruncationResult r;
  r.rho_star_norm = rho0_star->sobolev_norm(s_prime);
  r.u_star_norm = u0_star->sobolev_norm(s_prime);
  r.rho_norm = rho0->sobolev_norm(s_prime - 2.0);
  r.discrepancy =
      rho0 == rho0_star ? 0.0 : combine(rho0, 1.0, rho0_star, -1.0)->sobolev_norm(s_prime - 2.0);
  r.holds = r.discrepancy < eps * eps;
  return r;
}

}  // namespace pdhs
