#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "pdhs/analysis.hpp"
#include "pdhs/errors.hpp"

namespace pdhs {
namespace {

using testing::random_function;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

VectorGridFunction pair(GridFunction a, GridFunction b) {
  return VectorGridFunction(std::vector<GridFunction>{std::move(a), std::move(b)});
}

SystemSpec identity_pair() {
  return validate_system(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(0, 1).asDiagonal(), 1);
}

// ---------------------------------------------------------------------
// Corrector constants and the Lyapunov functional
// ---------------------------------------------------------------------

TEST(CorrectorConstants, EulerPairCertified) {
  auto c = choose_corrector_constants(euler_system());
  ASSERT_EQ(c.eps_k.size(), 1u);
  EXPECT_TRUE(c.all_hold());
  EXPECT_GT(c.eta0, 0.0);
  EXPECT_DOUBLE_EQ(c.C, 8.0);
  EXPECT_DOUBLE_EQ(c.C2, 1.0);
  EXPECT_LE(c.C * c.eps_k[0] * c.eps_k[0], c.eps0 * c.eps0 / 8);
  EXPECT_LT(c.eta0, std::min(1.0, c.eps_k[0]) / (4 * c.C2));
}

TEST(CorrectorConstants, KalmanFailure) {
  EXPECT_EQ(code_of([] { choose_corrector_constants(identity_pair()); }), ErrorCode::kKalmanFails);
  EXPECT_EQ(code_of([] { norm_equivalence_constant(identity_pair()); }), ErrorCode::kKalmanFails);
}

TEST(CorrectorConstants, ScaledSystemStillTerminates) {
  auto e = euler_system();
  auto c = choose_corrector_constants(validate_system(2.0 * e.A, e.B, 1));
  EXPECT_TRUE(c.all_hold());
  EXPECT_GT(c.C, corrector_constant(e));
}

TEST(CorrectorConstants, ThreeComponentLadder) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
  A(0, 1) = A(1, 0) = 1;
  A(1, 2) = A(2, 1) = 1;
  auto spec = validate_system(A, Eigen::Vector3d(0, 0, 1).asDiagonal(), 1);
  auto c = choose_corrector_constants(spec);
  ASSERT_EQ(c.eps_k.size(), 2u);
  EXPECT_TRUE(c.all_hold());
  EXPECT_LE(c.C * c.eps_k[0] * c.eps_k[0], c.eps0 * c.eps0 / 8);
  EXPECT_LT(c.eps_k[1], c.eps_k[0]);
}

TEST(Corrector, ConstantIsZero) {
  Grid g(0.125, 64);
  auto e = euler_system();
  auto c = choose_corrector_constants(e);
  GridFunction one(g, std::vector<double>(64, 1.0)), two(g, std::vector<double>(64, 2.0));
  EXPECT_NEAR(corrector(e, pair(one, two), c), 0.0, 1e-15);
}

TEST(Corrector, EulerPairHandExpansion) {
  std::mt19937_64 rng(1);
  Grid g(0.0625, 256);
  auto e = euler_system();
  auto c = choose_corrector_constants(e);
  auto rho = random_function(g, rng), u = random_function(g, rng);
  const double expect = c.eps_k[0] * inner_product(u, d_central(rho));
  EXPECT_NEAR(corrector(e, pair(rho, u), c), expect, 1e-13 * std::abs(expect) + 1e-15);
  SpectralState s{dft(rho), dft(u)};
  EXPECT_NEAR(corrector(e, s, c), expect, 1e-12 * std::abs(expect) + 1e-15);
}

TEST(Corrector, CauchySchwarzBound) {
  std::mt19937_64 rng(2);
  Grid g(0.0625, 256);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
  A(0, 1) = A(1, 0) = 1;
  A(1, 2) = A(2, 1) = 0.5;
  auto spec = validate_system(A, Eigen::Vector3d(0, 0.5, 1).asDiagonal(), 2);
  auto c = choose_corrector_constants(spec);
  const double nB = spec.B.operatorNorm(), nA = A.operatorNorm();
  double k_sum = 0;
  for (std::size_t k = 1; k <= c.eps_k.size(); ++k)
    k_sum += c.eps_k[k - 1] * nB * nB * std::pow(nA, 2.0 * k - 1);
  for (int t = 0; t < 20; ++t) {
    auto U = testing::random_vector(g, 3, rng);
    EXPECT_LE(std::abs(corrector(spec, U, c)),
              k_sum * l2_norm(U) * l2_norm(d_central(U)) * (1 + 1e-12));
  }
}

TEST(Lyapunov, ZeroAndEquivalence) {
  std::mt19937_64 rng(3);
  Grid g(0.0625, 256);
  auto e = euler_system();
  auto c = choose_corrector_constants(e);
  EXPECT_EQ(lyapunov(e, pair(GridFunction(g), GridFunction(g)), 1.0, c), 0.0);
  for (int t = 0; t < 20; ++t) {
    auto U = testing::random_vector(g, 2, rng);
    const double h1 = h1_norm(U);
    const double L = lyapunov(e, U, 0.0, c);
    EXPECT_GE(L, 0.5 * h1 * h1);
    EXPECT_LE(L, 2.0 * h1 * h1);
  }
}

TEST(Lyapunov, MonotoneAlongEulerTrajectory) {
  std::mt19937_64 rng(4);
  Grid g(0.0625, 256);
  auto e = euler_system();
  auto c = choose_corrector_constants(e);
  auto U = testing::random_vector(g, 2, rng);
  auto r = decay_record(e, U, make_times(100.0, 200, Spacing::kLog), c);
  for (std::size_t i = 1; i < r.lyapunov.size(); ++i)
    EXPECT_LE(r.lyapunov[i], r.lyapunov[i - 1] + 1e-9) << r.times[i];
}

TEST(Lyapunov, GridAndSpectralFormsAgree) {
  std::mt19937_64 rng(5);
  Grid g(0.125, 128, 0.3);
  auto e = euler_system();
  auto c = choose_corrector_constants(e);
  auto U = testing::random_vector(g, 2, rng);
  const double a = lyapunov(e, U, 2.5, c);
  const double b = lyapunov(e, dft(U), 2.5, c);
  EXPECT_NEAR(a, b, 1e-12 * a);
  EXPECT_NEAR(h1_norm(U), h1_norm(dft(U)), 1e-12 * h1_norm(U));
}

// ---------------------------------------------------------------------
// Decay
// ---------------------------------------------------------------------

DecayRecord synthetic(const std::function<double(double)>& f) {
  DecayRecord r;
  r.h1_norm_initial = 1.0;
  for (double t : make_times(200.0, 301, Spacing::kLog)) {
    r.times.push_back(t);
    r.norm_u2.push_back(0.25 * f(t));
    r.norm_dhU.push_back(0.75 * f(t));
    r.lyapunov.push_back(f(t));
  }
  return r;
}

TEST(DecayFit, ExactPowerLaw) {
  auto fit = decay_rate_fit(synthetic([](double t) { return 1 / std::sqrt(1 + t); }), 10, 200);
  EXPECT_NEAR(fit.slope, -0.5, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(DecayFit, ExponentialIsFaster) {
  auto fit = decay_rate_fit(synthetic([](double t) { return std::exp(-0.05 * t); }), 10, 200);
  EXPECT_LT(fit.slope, -1.0);
}

TEST(DecayFit, Errors) {
  EXPECT_EQ(code_of([] { decay_rate_fit(synthetic([](double) { return 1.0; }), 150, 160); }),
            ErrorCode::kInsufficientSamples);
  EXPECT_EQ(code_of([] { decay_rate_fit(synthetic([](double) { return 0.0; }), 10, 200); }),
            ErrorCode::kNonPositiveNorm);
}

TEST(DecayConstant, PowerLaw) {
  EXPECT_NEAR(decay_constant(synthetic([](double t) { return 2 / std::sqrt(1 + t); })), 2.0,
              1e-12);
}

TEST(FitLine, Exact) {
  auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.stderr_slope, 0.0, 1e-14);
}

TEST(DecayPipeline, EulerRateAndConstantMatchOracle) {
  // Oracle: an independent eigen-solve of the per-mode Euler generator with
  // the data transformed by a 2^-12 Riemann sum.
  auto e = euler_system();
  auto c = choose_corrector_constants(e);
  const auto times = make_times(200.0, 301, Spacing::kLog);
  struct Case {
    double h, slope, constant, h1;
  };
  for (const Case& k : {Case{0.0625, -0.5400911397679363, 1.1327629873046838, 31.457740709925282},
                        Case{0.03125, -0.5600217192117282, 1.0795019640479186, 57.95878230906281}}) {
    const Grid g = window_grid(k.h, 512.0);
    const auto d = initial_spectra(InitialDataKind::kDecay, g);
    const auto r = decay_record(e, SpectralState{d.rho0, d.u0}, times, c);
    EXPECT_NEAR(r.h1_norm_initial, k.h1, 1e-4 * k.h1) << k.h;
    EXPECT_NEAR(decay_constant(r), k.constant, 1e-3 * k.constant) << k.h;
    EXPECT_NEAR(decay_rate_fit(r, 10, 200).slope, k.slope, 2e-3) << k.h;
    if (k.h == 0.0625) {
      const double slope = decay_rate_fit(r, 10, 200).slope;
      EXPECT_GE(slope, -0.55);
      EXPECT_LE(slope, -0.45);
    }
  }
}

TEST(MakeTimes, LinearAndLog) {
  auto lin = make_times(2.0, 5, Spacing::kLinear);
  EXPECT_EQ(lin, (std::vector<double>{0, 0.5, 1.0, 1.5, 2.0}));
  auto lg = make_times(100.0, 4, Spacing::kLog);
  ASSERT_EQ(lg.size(), 4u);
  EXPECT_EQ(lg[0], 0.0);
  EXPECT_NEAR(lg[1], 1e-2, 1e-16);
  EXPECT_NEAR(lg[2], 1.0, 1e-14);
  EXPECT_EQ(lg[3], 100.0);
  EXPECT_THROW(make_times(-1.0, 4, Spacing::kLinear), Error);
}

TEST(DecayCsv, Header) {
  std::ostringstream os;
  write_decay_csv(os, synthetic([](double t) { return 1 / (1 + t); }));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,norm_u2,norm_dhU,lyapunov");
}

TEST(ExponentialConvolution, SanityBound) {
  for (double t : {1.0, 10.0, 100.0}) {
    const double v = exponential_convolution(1.0, t);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v * std::sqrt(1 + t), 3.0);
  }
  // Closed form for lambda -> 0: 2 (sqrt(1 + t) - 1).
  EXPECT_NEAR(exponential_convolution(0.0, 3.0), 2.0, 1e-10);
}

TEST(BoundaryMass, EdgesOnly) {
  Grid g(0.1, 100);
  GridFunction v(g);
  v[50] = 1.0;
  EXPECT_EQ(boundary_mass_fraction(v), 0.0);
  v[0] = 1.0;
  EXPECT_DOUBLE_EQ(boundary_mass_fraction(v), 0.5);
}

// ---------------------------------------------------------------------
// Initial data
// ---------------------------------------------------------------------

TEST(InitialData, Names) {
  EXPECT_EQ(parse_initial_data("decay_data"), InitialDataKind::kDecay);
  EXPECT_EQ(parse_initial_data("relax_data"), InitialDataKind::kRelax);
  EXPECT_THROW(parse_initial_data("other"), Error);
}

TEST(InitialData, RelaxBumps) {
  const Grid g = window_grid(0.015625, 32.0);
  const auto p = initial_profiles(InitialDataKind::kRelax, g);
  EXPECT_DOUBLE_EQ(p.rho0->value(1.0), std::exp(-1.0));
  const auto d = make_initial_data(InitialDataKind::kRelax, g);
  double rho_out = 0, u_out = 0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double x = g.position(n);
    if (x <= 0 || x >= 2) rho_out = std::max(rho_out, std::abs(d.rho0[n]));
    if (x <= 0.5 || x >= 2.5) u_out = std::max(u_out, std::abs(d.u0[n]));
  }
  // The truncation is band-limited, so the ripple outside the support is
  // set by the transform tail at pi/h: 1.4e-4 at h = 2^-4.
  EXPECT_LT(rho_out, 1e-6);
  EXPECT_LT(u_out, 1e-6);
  EXPECT_NEAR(d.rho0[g.size() / 2 + 64], std::exp(-1.0), 1e-6);
}

TEST(InitialData, RelaxWindowTooSmall) {
  EXPECT_EQ(code_of([] { initial_profiles(InitialDataKind::kRelax, window_grid(0.0625, 2.0)); }),
            ErrorCode::kSupportOverflow);
}

TEST(InitialData, DecayDataEvenAndEqual) {
  const Grid g = window_grid(0.125, 64.0);
  const auto d = make_initial_data(InitialDataKind::kDecay, g);
  EXPECT_EQ(testing::max_abs_diff(d.rho0, d.u0), 0.0);
  const std::size_t c = g.size() / 2;
  for (std::size_t k = 1; k < c; ++k)
    EXPECT_NEAR(d.rho0[c + k], d.rho0[c - k], 1e-9 * std::abs(d.rho0[c]));
}

TEST(WindowGrid, SizeFromHalfLength) {
  const Grid g = window_grid(0.0625, 32.0, 0.5);
  EXPECT_EQ(g.size(), 1024u);
  EXPECT_DOUBLE_EQ(g.offset(), 0.5);
  EXPECT_THROW(window_grid(0.3, 1.0), Error);
}

TEST(HTruncation, IdenticalData) {
  const auto p = initial_profiles(InitialDataKind::kRelax, window_grid(0.0625, 32.0));
  auto r = h_truncation_check(p.rho0, p.u0, p.rho0, 3.0, 1.0 / 32);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.discrepancy, 0.0);
  EXPECT_GT(r.rho_star_norm, 0.0);
  EXPECT_GT(r.u_star_norm, 0.0);
}

TEST(HTruncation, PerturbationOfTwiceEpsSquared) {
  const double eps = 0.125, sp = 3.0;
  const auto p = initial_profiles(InitialDataKind::kRelax, window_grid(0.0625, 32.0));
  auto g = gaussian_profile();
  const double alpha = 2 * eps * eps / g->sobolev_norm(sp - 2);
  auto r = h_truncation_check(p.rho0, p.u0, combine(p.rho0, 1.0, g, alpha), sp, eps);
  EXPECT_FALSE(r.holds);
  EXPECT_NEAR(r.discrepancy, 2 * eps * eps, 1e-6);
  auto small = h_truncation_check(p.rho0, p.u0, combine(p.rho0, 1.0, g, alpha / 4), sp, eps);
  EXPECT_TRUE(small.holds);
}

// ---------------------------------------------------------------------
// Relaxation
// ---------------------------------------------------------------------

TEST(RelaxationTimes, LayerThenBulk) {
  auto t = relaxation_sample_times(0.125, 5.0, 10, 20);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 5.0);
  ASSERT_EQ(t.size(), 31u);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GT(t[i], t[i - 1]);
  EXPECT_NEAR(t[10], 40 * 0.125 * 0.125, 1e-14);
}

struct RelaxCase {
  double eps, h, sup, darcy;
};

class RelaxationOracle : public ::testing::TestWithParam<RelaxCase> {};

// Oracle: an independent eigen-solve of both semi-discrete systems with the
// bump transforms from adaptive quadrature, same sample times.
TEST_P(RelaxationOracle, MatchesFrozenValues) {
  const RelaxCase k = GetParam();
  RelaxationSetup s;
  s.eps = k.eps;
  s.h = k.h;
  auto r = relaxation_errors(s);
  EXPECT_NEAR(r.sup_error_linf, k.sup, 1e-7 * k.sup);
  EXPECT_NEAR(r.darcy_l1t_linf, k.darcy, 1e-7 * k.darcy);
  EXPECT_LT(r.quadrature_change, 0.01);
  EXPECT_LE(r.darcy_l1t, (r.darcy_l1t_low + r.darcy_l1t_high) * (1 + 1e-12));
  EXPECT_GT(r.sup_error_besov, 0.0);
  EXPECT_GT(r.l1t_error_besov, 0.0);
}

INSTANTIATE_TEST_SUITE_P(
    Frozen, RelaxationOracle,
    ::testing::Values(RelaxCase{0.25, 0.0625, 8.892489220210614e-04, 0.06754428853148835},
                      RelaxCase{0.0625, 0.0625, 5.509921256883353e-05, 0.0054381168026424705},
                      RelaxCase{0.03125, 0.0625, 1.3768996592799607e-05,
                                1.4727521304130204e-03}),
    [](const ::testing::TestParamInfo<RelaxCase>& info) {
      return "eps_2m" + std::to_string(std::lround(-std::log2(info.param.eps)));
    });

TEST(RelaxationTable, PublishedValuesWithinTenPercent) {
  RelaxationSetup s;
  s.eps = 0.03125;
  s.h = 0.0625;
  auto r = relaxation_errors(s);
  EXPECT_NEAR(r.sup_error_linf, 1.375812666e-05, 0.1 * 1.375812666e-05);
  EXPECT_NEAR(r.darcy_l1t_linf, 1.468560202e-03, 0.1 * 1.468560202e-03);
}

TEST(ConvergenceOrder, SyntheticPowers) {
  std::vector<RelaxationErrorRecord> sq, lin;
  for (int p = 2; p <= 6; ++p) {
    const double e = std::ldexp(1.0, -p);
    RelaxationErrorRecord a;
    a.eps = e;
    a.h = 0.0625;
    a.T = 5;
    a.sup_error_besov = a.l1t_error_besov = a.darcy_l1t = a.sup_error_linf = a.darcy_l1t_linf =
        3 * e * e;
    sq.push_back(a);
    a.sup_error_besov = a.l1t_error_besov = a.darcy_l1t = a.sup_error_linf = a.darcy_l1t_linf = e;
    lin.push_back(a);
  }
  auto r2 = convergence_order(sq), r1 = convergence_order(lin);
  for (const char* name : {"sup_besov", "l1t_besov", "darcy_besov", "sup_linf", "darcy_linf"}) {
    EXPECT_NEAR(r2.column(name).slope, 2.0, 1e-12);
    EXPECT_NEAR(r1.column(name).slope, 1.0, 1e-12);
  }
  EXPECT_EQ(code_of([&] { convergence_order({sq[0], sq[1], sq[2]}); }),
            ErrorCode::kInsufficientSamples);
  sq[0].sup_error_linf = 0.0;
  EXPECT_EQ(code_of([&] { convergence_order(sq); }), ErrorCode::kNonPositiveNorm);
}

TEST(ConvergenceOrder, ReportFormat) {
  OrderReport r;
  r.columns.push_back({"sup_linf", 2.0, 0.015});
  std::ostringstream os;
  write_fit_report(os, r);
  EXPECT_EQ(os.str(), "sup_linf=2.000000\xC2\xB1" "0.015000\n");
  EXPECT_THROW(r.column("missing"), Error);
}

TEST(RelaxationCsv, Header) {
  std::ostringstream os;
  write_relaxation_csv(os, {});
  EXPECT_EQ(os.str(), "eps,h,T,sup_besov,l1t_besov,darcy_besov,sup_linf,darcy_linf\n");
}

TEST(RelativeSpread, Values) {
  EXPECT_EQ(relative_spread({}), 0.0);
  EXPECT_EQ(relative_spread({0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(relative_spread({1.0, 2.0, 4.0}), 0.75);
}

}  // namespace
}  // namespace pdhs
