#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "pdhs/errors.hpp"
#include "pdhs/grid.hpp"
#include "pdhs/profile.hpp"

namespace pdhs {
namespace {

constexpr double kPi = std::numbers::pi;
using testing::max_abs_diff;
using testing::random_function;

std::size_t center(const Grid& g) { return g.size() / 2; }

TEST(Grid, FrequencySetAndPositions) {
  Grid g(0.125, 64, 0.5);
  EXPECT_DOUBLE_EQ(g.half_length(), 4.0);
  EXPECT_DOUBLE_EQ(g.frequency(0), -kPi / 0.125);
  EXPECT_DOUBLE_EQ(g.frequency(32), 0.0);
  EXPECT_LT(g.frequency(63), kPi / 0.125);
  EXPECT_DOUBLE_EQ(g.position(32), -0.5);
  EXPECT_EQ(g.symbol(0), 0.0);
  EXPECT_EQ(g.symbol(32), 0.0);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(Grid(0.1, 6), Error);
  EXPECT_THROW(Grid(0.1, 9), Error);
  EXPECT_THROW(Grid(-0.1, 16), Error);
}

TEST(GridFunction, PeriodicAccess) {
  Grid g(0.5, 8);
  GridFunction v(g);
  for (std::size_t i = 0; i < 8; ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(v.at(-1), 7.0);
  EXPECT_EQ(v.at(9), 1.0);
}

TEST(Dft, ScaledDeltaIsFlat) {
  Grid g(0.1, 64);
  GridFunction v(g);
  v[center(g)] = 1.0 / g.h();
  auto hat = dft(v);
  for (std::size_t k = 0; k < g.size(); ++k)
    EXPECT_NEAR(std::abs(hat[k] - 1.0 / std::sqrt(2 * kPi)), 0.0, 1e-14);
}

TEST(Dft, ZeroInZeroOut) {
  Grid g(0.1, 16);
  EXPECT_EQ(l2_norm(dft(GridFunction(g))), 0.0);
  EXPECT_EQ(linf_norm(idft(SpectralFunction(g))), 0.0);
}

TEST(Dft, MatchesDirectSumOracle) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {8u, 64u, 256u, 512u}) {
    for (double offset : {0.0, 0.37}) {
      Grid g(0.05 * static_cast<double>(n % 7 + 1), n, offset);
      auto v = random_function(g, rng);
      auto fast = dft(v);
      auto slow = testing::direct_dft(v);
      EXPECT_LT(max_abs_diff(fast, slow), 1e-12 * (1 + l2_norm(slow))) << n;
    }
  }
}

TEST(Dft, ParsevalAcrossGrids) {
  std::mt19937_64 rng(2);
  for (int e = 3; e <= 8; ++e) {
    for (std::size_t n : {256u, 8192u}) {
      Grid g(std::ldexp(1.0, -e), n);
      auto v = random_function(g, rng);
      double a = l2_norm(v), b = l2_norm(dft(v));
      EXPECT_NEAR(a, b, 1e-12 * a);
    }
  }
}

TEST(Idft, InvertsDft) {
  std::mt19937_64 rng(3);
  Grid g(0.03125, 1024, 0.25);
  auto v = random_function(g, rng);
  EXPECT_LT(max_abs_diff(idft_real(dft(v)), v), 1e-12 * linf_norm(v));
}

TEST(Idft, SingleModeIsPlaneWave) {
  Grid g(0.25, 32, 0.1);
  SpectralFunction s(g);
  const std::size_t k = 20;
  s[k] = 1.0;
  auto v = idft(s);
  const Complex ratio = v[0] / std::polar(1.0, g.frequency(k) * g.position(0));
  for (std::size_t n = 0; n < g.size(); ++n)
    EXPECT_LT(std::abs(v[n] - ratio * std::polar(1.0, g.frequency(k) * g.position(n))), 1e-14);
}

TEST(Differences, ConstantIsAnnihilated) {
  Grid g(0.1, 32);
  GridFunction v(g, std::vector<double>(32, 3.5));
  EXPECT_EQ(linf_norm(d_central(v)), 0.0);
}

TEST(Differences, CentralOnCosine) {
  Grid g(0.0625, 128);
  const std::size_t k = 70;
  const double xi = g.frequency(k);
  GridFunction v(g), expect(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    v[n] = std::cos(xi * g.position(n));
    expect[n] = -std::sin(xi * g.h()) / g.h() * std::sin(xi * g.position(n));
  }
  EXPECT_LT(max_abs_diff(d_central(v), expect), 1e-12);
}

TEST(Differences, CentralIsMeanOfOneSided) {
  std::mt19937_64 rng(4);
  Grid g(0.125, 64);
  auto v = random_function(g, rng);
  auto c = d_central(v), p = d_plus(v), m = d_minus(v);
  for (std::size_t n = 0; n < g.size(); ++n) {
    double avg = 0.5 * (p[n] + m[n]);
    // One rounding of the one-sided quotients.
    EXPECT_LE(std::abs(c[n] - avg),
              std::numeric_limits<double>::epsilon() * (std::abs(p[n]) + std::abs(m[n])));
  }
}

TEST(Differences, SummationByParts) {
  std::mt19937_64 rng(5);
  for (int e = 3; e <= 8; ++e) {
    Grid g(std::ldexp(1.0, -e), 256);
    auto u = random_function(g, rng), v = random_function(g, rng);
    double scale = l2_norm(u) * l2_norm(d_central(v));
    EXPECT_NEAR(inner_product(u, d_central(v)), -inner_product(d_central(u), v), 1e-12 * scale);
    EXPECT_NEAR(inner_product(u, d_central(u)), 0.0, 1e-12 * scale);
  }
}

TEST(Differences, SymbolsMatchStencils) {
  Grid g(0.125, 64, 0.2);
  const double h = g.h();
  for (std::size_t k : {3u, 17u, 40u}) {
    SpectralFunction s(g);
    s[k] = 1.0;
    auto v = idft(s);
    auto dp = dft(d_plus(v)), dm = dft(d_minus(v)), dc = dft(d_central(v));
    const double xi = g.frequency(k);
    const Complex i(0, 1);
    EXPECT_LT(std::abs(dp[k] - (std::exp(i * xi * h) - 1.0) / h), 1e-13 / h);
    EXPECT_LT(std::abs(dm[k] - (1.0 - std::exp(-i * xi * h)) / h), 1e-13 / h);
    EXPECT_LT(std::abs(dc[k] - i * std::sin(xi * h) / h), 1e-13 / h);
  }
}

TEST(Multiplier, IdentityAndCentralSymbol) {
  std::mt19937_64 rng(6);
  Grid g(0.0625, 256);
  auto v = random_function(g, rng);
  EXPECT_LT(max_abs_diff(multiplier(v, [](double) { return Complex(1.0); }), v), 1e-13);
  const double h = g.h();
  auto central = multiplier(v, [h](double xi) { return Complex(0, std::sin(xi * h) / h); });
  EXPECT_LT(max_abs_diff(central, d_central(v)), 1e-12 * linf_norm(d_central(v)));
}

TEST(Multiplier, SquareOfCentralSymbol) {
  std::mt19937_64 rng(7);
  Grid g(0.0625, 256);
  auto v = random_function(g, rng);
  const double h = g.h();
  auto sq = multiplier(v, [h](double xi) { return Complex(std::pow(std::abs(std::sin(xi * h) / h), 2)); });
  auto dd = d_central(d_central(v));
  dd *= -1.0;
  EXPECT_LT(max_abs_diff(sq, dd), 1e-12 * linf_norm(dd));
}

TEST(Multiplier, NonFiniteSymbolThrows) {
  Grid g(0.125, 16);
  try {
    apply_symbol(SpectralFunction(g), [](double) { return Complex(NAN, 0); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteSymbol);
  }
}

TEST(SobolevNorm, OrderZeroAndSingleMode) {
  std::mt19937_64 rng(8);
  Grid g(0.125, 64);
  auto hat = dft(random_function(g, rng));
  hat[0] = 0.0;
  hat[32] = 0.0;
  EXPECT_NEAR(sobolev_norm(hat, 0.0, true), l2_norm(hat), 1e-13 * l2_norm(hat));
  SpectralFunction one(g);
  one[10] = Complex(0.3, 0.4);
  EXPECT_NEAR(sobolev_norm(one, 1.0, true),
              g.zeta(10) * 0.5 * std::sqrt(g.frequency_step()), 1e-14);
}

TEST(SobolevNorm, OrderOneIsCentralDifference) {
  std::mt19937_64 rng(9);
  Grid g(0.03125, 512);
  auto v = random_function(g, rng);
  double d = l2_norm(d_central(v));
  EXPECT_NEAR(sobolev_norm(v, 1.0, true), d, 1e-12 * d);
}

TEST(Truncate, ZeroTransform) {
  Grid g(0.125, 64);
  EXPECT_EQ(linf_norm(truncate([](double) { return Complex(0); }, g)), 0.0);
}

TEST(Truncate, GaussianBandLimitingErrorShrinks) {
  auto gauss = gaussian_profile();
  double prev = 1e300;
  for (double h : {1.0, 0.5, 0.25}) {
    Grid g(h, static_cast<std::size_t>(std::lround(32 / h)));
    auto v = truncate(gauss->symbol(), g);
    double err = 0;
    for (std::size_t n = 0; n < g.size(); ++n)
      err = std::max(err, std::abs(v[n] - gauss->value(g.position(n))));
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-12);
}

TEST(Truncate, ParsevalTransfer) {
  // Frequency quadrature of |e^{-xi^2/2}|^2 over [-pi/h, pi/h] is
  // sqrt(pi) erf(pi/h) in the continuum; on the grid its Riemann sum.
  Grid g(0.5, 128);
  auto v = truncate(gaussian_profile()->symbol(), g);
  double q = 0;
  for (std::size_t k = 0; k < g.size(); ++k)
    q += std::exp(-g.frequency(k) * g.frequency(k)) * g.frequency_step();
  EXPECT_NEAR(l2_norm(v), std::sqrt(q), 1e-10);
}

TEST(Convolve, DeltaIsUnit) {
  std::mt19937_64 rng(10);
  Grid g(0.25, 64, 0.75);
  auto v = random_function(g, rng);
  GridFunction w(g);
  // The unit sits at the site x = -offset, index n/2.
  w[center(g)] = 1.0 / g.h();
  EXPECT_LT(max_abs_diff(convolve(v, w), v), 1e-13);
}

TEST(Convolve, CommutesAndTransformsToProduct) {
  std::mt19937_64 rng(11);
  Grid g(0.125, 128, 0.3);
  auto v = random_function(g, rng), w = random_function(g, rng);
  auto vw = convolve(v, w);
  EXPECT_LT(max_abs_diff(vw, convolve(w, v)), 1e-12 * linf_norm(vw));
  auto lhs = dft(vw);
  auto dv = dft(v), dw = dft(w);
  for (std::size_t k = 0; k < g.size(); ++k) {
    Complex rhs = std::sqrt(2 * kPi) * std::polar(1.0, -g.frequency(k) * g.offset()) * dv[k] * dw[k];
    EXPECT_LT(std::abs(lhs[k] - rhs), 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST(Convolve, GridMismatch) {
  try {
    convolve(GridFunction(Grid(0.1, 16)), GridFunction(Grid(0.2, 16)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridMismatch);
  }
}

TEST(Csv, RoundTrip) {
  std::mt19937_64 rng(12);
  Grid g(0.0625, 32, 0.125);
  auto v = random_function(g, rng);
  std::stringstream ss;
  write_csv(ss, v);
  EXPECT_EQ(ss.str().substr(0, 8), "x,value\n");
  auto r = read_csv(ss);
  EXPECT_EQ(r.grid().size(), g.size());
  EXPECT_NEAR(r.grid().h(), g.h(), 1e-15);
  EXPECT_NEAR(r.grid().offset(), g.offset(), 1e-14);
  EXPECT_EQ(max_abs_diff(r, v), 0.0);
}

}  // namespace
}  // namespace pdhs
