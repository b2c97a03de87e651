#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "pdhs/grid.hpp"
#include "pdhs/solver.hpp"

namespace pdhs::testing {

inline GridFunction random_function(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  GridFunction v(g);
  for (auto& x : v.values()) x = n(rng);
  return v;
}

inline VectorGridFunction random_vector(const Grid& g, int N, std::mt19937_64& rng) {
  std::vector<GridFunction> c;
  for (int i = 0; i < N; ++i) c.push_back(random_function(g, rng));
  return VectorGridFunction(std::move(c));
}

/// Smooth random data: a random function filtered to |xi| < cutoff.
inline GridFunction smooth_random(const Grid& g, std::mt19937_64& rng, double cutoff) {
  auto hat = dft(random_function(g, rng));
  for (std::size_t k = 0; k < g.size(); ++k)
    if (std::abs(g.frequency(k)) > cutoff) hat[k] = 0.0;
  return idft_real(hat);
}

/// Direct O(n^2) evaluation of h/sqrt(2 pi) sum e^{-i xi x_n} v_n.
inline SpectralFunction direct_dft(const GridFunction& v) {
  const Grid& g = v.grid();
  SpectralFunction out(g);
  const double c = g.h() / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::complex<double> s = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
      s += std::polar(v[n], -g.frequency(k) * g.position(n));
    out[k] = c * s;
  }
  return out;
}

inline Eigen::MatrixXd random_symmetric(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd M(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) M(i, j) = n(rng);
  return 0.5 * (M + M.transpose());
}

inline double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const SpectralFunction& a, const SpectralFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace pdhs::testing
