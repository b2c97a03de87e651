#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pdhs/profile.hpp"

namespace pdhs {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Smoothstep, Endpoints) {
  EXPECT_EQ(smoothstep(-1.0), 0.0);
  EXPECT_EQ(smoothstep(0.0), 0.0);
  EXPECT_EQ(smoothstep(1.0), 1.0);
  EXPECT_EQ(smoothstep(2.0), 1.0);
  EXPECT_DOUBLE_EQ(smoothstep(0.5), 0.5);
}

TEST(Gaussian, ClosedFormPair) {
  auto g = gaussian_profile();
  EXPECT_DOUBLE_EQ(g->value(1.0), std::exp(-0.5));
  EXPECT_DOUBLE_EQ(g->transform(2.0).real(), std::exp(-2.0));
  // int (1 + xi^2) e^{-xi^2} = sqrt(pi) (1 + 1/2).
  EXPECT_NEAR(g->sobolev_norm(1.0), std::sqrt(1.5 * std::sqrt(kPi)), 1e-7);
}

TEST(Bump, SupportAndCentreValue) {
  auto b = bump_profile(1.0);
  EXPECT_DOUBLE_EQ(b->value(1.0), std::exp(-1.0));
  EXPECT_EQ(b->value(0.0), 0.0);
  EXPECT_EQ(b->value(2.0), 0.0);
  EXPECT_EQ(b->support().first, 0.0);
  EXPECT_EQ(b->support().second, 2.0);
}

TEST(Bump, TransformMatchesFineRiemannSum) {
  // The bump is smooth and compactly supported, so the trapezoid sum of
  // f(x) e^{-i xi x} converges spectrally.
  auto b = bump_profile(1.5);
  for (double xi : {0.0, 0.7, 3.0, 10.0, 40.0}) {
    const int n = 4000;
    Complex s = 0;
    for (int i = 1; i < n; ++i) {
      double x = 0.5 + 2.0 * i / n;
      s += b->value(x) * std::polar(1.0, -xi * x);
    }
    s *= (2.0 / n) / std::sqrt(2 * kPi);
    EXPECT_LT(std::abs(b->transform(xi) - s), 1e-12) << xi;
  }
}

TEST(Bump, TransformIsConjugateSymmetric) {
  auto b = bump_profile(1.0);
  for (double xi : {0.3, 5.0, 50.0})
    EXPECT_LT(std::abs(b->transform(-xi) - std::conj(b->transform(xi))), 1e-14);
}

TEST(DecayProfile, ShapeAndCutoff) {
  const double L = 64;
  auto d = decay_profile(L);
  EXPECT_DOUBLE_EQ(d->value(0.0), std::pow(1e-6, -0.25));
  EXPECT_DOUBLE_EQ(d->value(3.0), d->value(-3.0));
  EXPECT_DOUBLE_EQ(d->value(10.0), std::pow(100.0 + 1e-6, -0.25));
  EXPECT_EQ(d->value(0.75 * L), 0.0);
  EXPECT_GT(d->value(0.6 * L), 0.0);
  EXPECT_LT(d->value(0.6 * L), std::pow(0.36 * L * L, -0.25));
}

TEST(DecayProfile, TransformMatchesLowFrequencySum) {
  // A midpoint rule with step far below the cusp width sqrt(delta).
  const double L = 16;
  auto d = decay_profile(L);
  const double xi = 0.5;
  const int n = 2000000;
  const double a = -0.75 * L, w = 1.5 * L / n;
  double re = 0;
  for (int i = 0; i < n; ++i) {
    double x = a + (i + 0.5) * w;
    re += d->value(x) * std::cos(xi * x);
  }
  re *= w / std::sqrt(2 * kPi);
  EXPECT_NEAR(d->transform(xi).real(), re, 2e-5);
  EXPECT_NEAR(d->transform(xi).imag(), 0.0, 1e-10);
}

TEST(Combine, Linear) {
  auto g = gaussian_profile();
  auto c = combine(g, 2.0, bump_profile(1.0), -1.0);
  EXPECT_DOUBLE_EQ(c->value(1.0), 2 * std::exp(-0.5) - std::exp(-1.0));
  Complex expect = 2.0 * g->transform(0.4) - bump_profile(1.0)->transform(0.4);
  EXPECT_LT(std::abs(c->transform(0.4) - expect), 1e-15);
}

TEST(Profile, SpectrumSamplesTransform) {
  Grid grid(0.25, 64);
  auto g = gaussian_profile();
  auto s = g->spectrum(grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    EXPECT_EQ(s[k], g->transform(grid.frequency(k)));
}

}  // namespace
}  // namespace pdhs
