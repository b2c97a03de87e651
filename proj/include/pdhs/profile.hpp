#pragma once

#include <memory>
#include <utility>

#include "pdhs/grid.hpp"

namespace pdhs {

/// A real function on the line described through its unitary Fourier
/// transform f_hat(xi) = (2 pi)^{-1/2} int f(x) e^{-i xi x} dx.
class Profile {
 public:
  virtual ~Profile() = default;

  virtual Complex transform(double xi) const = 0;
  virtual double value(double x) const = 0;
  /// Closed interval outside which the function vanishes.
  virtual std::pair<double, double> support() const = 0;

  /// (int (1 + |xi|^{2s}) |f_hat|^2 dxi)^{1/2}, refined until stable.
  /// Throws RegularityFail when the refinement does not settle.
  virtual double sobolev_norm(double s) const;

  /// f_hat at the modes of `grid`.
  virtual SpectralFunction spectrum(const Grid& grid) const;

  Symbol symbol() const;
};

using ProfilePtr = std::shared_ptr<const Profile>;

/// e^{-x^2/2}, whose transform is e^{-xi^2/2}.
ProfilePtr gaussian_profile();

/// e^{-1/(1-(x-c)^2)} on (c-1, c+1), zero elsewhere.
ProfilePtr bump_profile(double center);

/// (x^2 + delta)^{-1/4} times a quintic smoothstep cutoff equal to 1 on
/// [-L/2, L/2] and 0 outside [-3L/4, 3L/4].
ProfilePtr decay_profile(double L, double delta = 1e-6);

/// alpha a + beta b.
ProfilePtr combine(ProfilePtr a, double alpha, ProfilePtr b, double beta);

/// 6t^5 - 15t^4 + 10t^3 clamped to [0, 1].
double smoothstep(double t);

}  // namespace pdhs
