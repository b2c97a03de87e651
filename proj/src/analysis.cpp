#include "pdhs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "pdhs/errors.hpp"
#include "quadrature.hpp"

namespace pdhs {
namespace {

constexpr double kLadderDelta = 0.1;
// Concave ladders need base ~ (8C)^{-1/(2 delta)}, so the search runs until
// the smallest eps_k nears the bottom of the double range.
constexpr double kEpsFloor = 1e-280;

double spectral_norm(const Eigen::MatrixXd& M) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& A, int k) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  for (int i = 0; i < k; ++i) P = P * A;
  return P;
}

// sum_k eps_k (i/2)(A^{k-1} B^2 A^k - A^k B^2 A^{k-1}); the corrector reads
// I = sum_modes dxi sigma U_hat^H H U_hat.
Eigen::MatrixXcd corrector_matrix(const SystemSpec& spec, const CorrectorConstants& c) {
  const int n = spec.N;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXd B2 = spec.B * spec.B;
  for (int k = 1; k < n && k <= static_cast<int>(c.eps_k.size()); ++k) {
    const Eigen::MatrixXd lo = matrix_power(spec.A, k - 1);
    const Eigen::MatrixXd hi = lo * spec.A;
    const Eigen::MatrixXd M = lo * B2 * hi - hi * B2 * lo;
    H += c.eps_k[static_cast<std::size_t>(k - 1)] * Complex(0.0, 0.5) * M.cast<Complex>();
  }
  return H;
}

double max_eigenvalue(const Eigen::MatrixXcd& M) {
  const Eigen::MatrixXcd S = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(S, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

void check_components(const SystemSpec& spec, std::size_t count) {
  if (static_cast<int>(count) != spec.N) {
    fail(ErrorCode::kDimensionMismatch, "state does not match system dimension");
  }
}

}  // namespace

double corrector_constant(const SystemSpec& spec) {
  const Eigen::VectorXd ch = cayley_hamilton_coeffs(spec);
  const double a = std::max(1.0, spectral_norm(spec.A));
  const double b = std::max(1.0, spectral_norm(spec.B));
  const double csum = 1.0 + ch.cwiseAbs().sum();
  return spec.N * std::pow(b, 4) * std::pow(a, 2 * spec.N) * csum * csum;
}

double norm_equivalence_constant(const SystemSpec& spec) {
  const KalmanCertificate cert = kalman_rank_holds(spec);
  if (!cert.holds) {
    fail(ErrorCode::kKalmanFails, "Kalman rank " + std::to_string(cert.numerical_rank) +
                                      " < " + std::to_string(spec.N));
  }
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(spec.N, spec.N);
  Eigen::MatrixXd P = spec.B;
  for (int k = 0; k < spec.N; ++k) {
    G += P.transpose() * P;
    P = P * spec.A;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G, Eigen::EigenvaluesOnly);
  const double gmin = eig.eigenvalues().minCoeff();
  if (!(gmin > 0.0)) fail(ErrorCode::kKalmanFails, "Kalman norm is degenerate");
  const double bt = spectral_norm(spec.b_tilde());
  return std::max(1.0, bt * bt) / gmin;
}

SpectralCertificate spectral_certificate(const SystemSpec& spec, const CorrectorConstants& c) {
  const int n = spec.N;
  const Eigen::MatrixXcd A = spec.A.cast<Complex>();
  const Eigen::MatrixXcd B = spec.B.cast<Complex>();
  const Eigen::MatrixXcd H = corrector_matrix(spec, c);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd T0 = -2.0 * B;
  const Eigen::MatrixXcd T1 = -(B * H + H * B);
  const Eigen::MatrixXcd T2 = -2.0 * B + c.eta0 * I + Complex(0.0, 1.0) * (A * H - H * A);
  // Eigenvalues are only decided up to the rounding level of the
  // coefficients; for tiny eps_k the sign below that level is noise.
  const double tol =
      64.0 * std::numeric_limits<double>::epsilon() * (T0.norm() + T1.norm() + T2.norm());

  SpectralCertificate out;
  out.leading_eigenvalue = max_eigenvalue(T2);
  out.max_eigenvalue = -std::numeric_limits<double>::infinity();
  constexpr int kPoints = 401;
  for (int sign = -1; sign <= 1; sign += 2) {
    for (int p = 0; p < kPoints; ++p) {
      const double sigma = sign * std::pow(10.0, -4.0 + 12.0 * p / (kPoints - 1));
      // Divide by (1 + sigma^2) so the test is scale-free in sigma.
      const Eigen::MatrixXcd Q = (T0 + sigma * T1 + sigma * sigma * T2) / (1.0 + sigma * sigma);
      out.max_eigenvalue = std::max(out.max_eigenvalue, max_eigenvalue(Q));
    }
  }
  out.holds = out.max_eigenvalue <= tol && out.leading_eigenvalue <= tol;
  return out;
}

CorrectorConstants choose_corrector_constants(const SystemSpec& spec) {
  const KalmanCertificate cert = kalman_rank_holds(spec);
  if (!cert.holds) {
    fail(ErrorCode::kKalmanFails, "Kalman rank " + std::to_string(cert.numerical_rank) +
                                      " < " + std::to_string(spec.N));
  }
  const int n = spec.N;
  CorrectorConstants c;
  c.C = corrector_constant(spec);
  c.C2 = norm_equivalence_constant(spec);
  c.eps0 = spec.lambda / 4.0;
  const double slope = 1.0 + 2.0 * kLadderDelta * (n - 1);
  const double a_norm = spectral_norm(spec.A);
  const double b_norm = spectral_norm(spec.B);

  std::string failing;
  for (c.base = c.eps0;; c.base *= 0.5, ++c.shrink_steps) {
    c.eps_k.assign(static_cast<std::size_t>(n - 1), 0.0);
    for (int k = 1; k < n; ++k) {
      const double m = 1.0 + slope * k - kLadderDelta * k * (k - 1);
      c.eps_k[static_cast<std::size_t>(k - 1)] = std::pow(c.base, m);
    }
    if (c.eps_k.back() < kEpsFloor) break;
    // eps(0) is the fixed constant eps0.
    auto eps = [&](int k) { return k == 0 ? c.eps0 : c.eps_k[static_cast<std::size_t>(k - 1)]; };

    c.e1 = c.C * eps(1) * eps(1) <= c.eps0 * c.eps0 / 8.0;
    for (int k = 1; k < n; ++k) c.e1 = c.e1 && c.C * eps(k) * eps(k) <= eps(k) * c.eps0 / 8.0;
    c.e11 = true;
    for (int k = 1; k <= n - 2; ++k) {
      c.e11 = c.e11 && c.C * eps(k) * eps(k) <= eps(k - 1) * eps(k + 1) / 8.0;
    }
    c.e2 = true;
    for (int j = 0; j < n; ++j) {
      c.e2 = c.e2 && c.C * eps(n - 1) * eps(n - 1) <= eps(j) * eps(n - 2) / 8.0;
    }
    double cs = 0.0;
    for (int k = 1; k < n; ++k) cs += eps(k) * b_norm * b_norm * std::pow(a_norm, 2 * k - 1);
    c.equivalence = cs <= 0.5;

    double eps_star = spec.lambda;
    for (double e : c.eps_k) eps_star = std::min(eps_star, e);
    c.eta0 = eps_star / (8.0 * c.C2);
    c.spectral = c.e1 && c.e11 && c.e2 && c.equivalence && spectral_certificate(spec, c).holds;
    if (c.all_hold()) return c;

    failing.clear();
    if (!c.e1) failing += " e1";
    if (!c.e11) failing += " e11";
    if (!c.e2) failing += " e2";
    if (!c.equivalence) failing += " equivalence";
    if (c.e1 && c.e11 && c.e2 && c.equivalence && !c.spectral) failing += " spectral";
  }
  fail(ErrorCode::kNoConvergence, "base underflowed with failing constraints:" + failing);
}

double corrector(const SystemSpec& spec, const VectorGridFunction& U,
                 const CorrectorConstants& c) {
  check_components(spec, static_cast<std::size_t>(U.dimension()));
  const VectorGridFunction DU = d_central(U);
  const std::size_t m = U.grid().size();
  const int n = spec.N;
  double total = 0.0;
  for (int k = 1; k < n && k <= static_cast<int>(c.eps_k.size()); ++k) {
    const Eigen::MatrixXd P = spec.B * matrix_power(spec.A, k - 1);
    const Eigen::MatrixXd Q = P * spec.A;
    double pair = 0.0;
    Eigen::VectorXd u(n), du(n);
    for (std::size_t i = 0; i < m; ++i) {
      for (int a = 0; a < n; ++a) {
        u(a) = U[a][i];
        du(a) = DU[a][i];
      }
      pair += (P * u).dot(Q * du);
    }
    total += c.eps_k[static_cast<std::size_t>(k - 1)] * U.grid().h() * pair;
  }
  return total;
}

double corrector(const SystemSpec& spec, const SpectralState& U, const CorrectorConstants& c) {
  check_components(spec, U.size());
  const Eigen::MatrixXcd H = corrector_matrix(spec, c);
  const Grid& grid = U.front().grid();
  const int n = spec.N;
  double total = 0.0;
  Eigen::VectorXcd x(n);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double sigma = grid.symbol(k);
    if (sigma == 0.0) continue;
    for (int a = 0; a < n; ++a) x(a) = U[static_cast<std::size_t>(a)][k];
    total += sigma * x.dot(H * x).real();
  }
  return total * grid.frequency_step();
}

double h1_norm(const SpectralState& U) {
  const Grid& grid = U.front().grid();
  double s = 0.0;
  for (const auto& comp : U) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double sigma = grid.symbol(k);
      s += (1.0 + sigma * sigma) * std::norm(comp[k]);
    }
  }
  return std::sqrt(s * grid.frequency_step());
}

double h1_norm(const VectorGridFunction& U) {
  const double a = l2_norm(U), b = l2_norm(d_central(U));
  return std::sqrt(a * a + b * b);
}

double lyapunov(const SystemSpec& spec, const VectorGridFunction& U, double t,
                const CorrectorConstants& c) {
  check_components(spec, static_cast<std::size_t>(U.dimension()));
  const double u = l2_norm(U), du = l2_norm(d_central(U));
  return u * u + du * du + c.eta0 * t * du * du + corrector(spec, U, c);
}

double lyapunov(const SystemSpec& spec, const SpectralState& U, double t,
                const CorrectorConstants& c) {
  check_components(spec, U.size());
  const Grid& grid = U.front().grid();
  double s = 0.0;
  for (const auto& comp : U) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double sigma = grid.symbol(k);
      s += (1.0 + (1.0 + c.eta0 * t) * sigma * sigma) * std::norm(comp[k]);
    }
  }
  return s * grid.frequency_step() + corrector(spec, U, c);
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) fail(ErrorCode::kInsufficientSamples, "need two points to fit");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::kInsufficientSamples, "abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ssr += r * r;
  }
  f.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  f.stderr_slope = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  return f;
}

DecayRecord decay_record(const SystemSpec& spec, const SpectralState& U0,
                         const std::vector<double>& times, const CorrectorConstants& c) {
  check_components(spec, U0.size());
  const Grid& grid = U0.front().grid();
  auto cache = std::make_shared<const PropagatorCache>(grid, central_generator(spec.A, spec.B));
  const SpectralEvolution evo(cache, U0);
  DecayRecord r;
  r.h1_norm_initial = h1_norm(U0);
  const double dxi = grid.frequency_step();
  const int n1 = spec.N - spec.N2;
  for (double t : times) {
    const SpectralState U = evo.at(t);
    double u2 = 0.0, du = 0.0;
    for (int a = 0; a < spec.N; ++a) {
      const auto& comp = U[static_cast<std::size_t>(a)];
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = std::norm(comp[k]);
        const double sigma = grid.symbol(k);
        du += sigma * sigma * w;
        if (a >= n1) u2 += w;
      }
    }
    r.times.push_back(t);
    r.norm_u2.push_back(std::sqrt(u2 * dxi));
    r.norm_dhU.push_back(std::sqrt(du * dxi));
    r.lyapunov.push_back(lyapunov(spec, U, t, c));
  }
  return r;
}

DecayRecord decay_record(const SystemSpec& spec, const VectorGridFunction& U0,
                         const std::vector<double>& times, const CorrectorConstants& c) {
  return decay_record(spec, dft(U0), times, c);
}

LinearFit decay_rate_fit(const DecayRecord& r, double t_lo, double t_hi) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double t = r.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double v = r.norm_u2[i] + r.norm_dhU[i];
    if (!(v > 0.0)) {
      fail(ErrorCode::kNonPositiveNorm, "norm vanishes at t = " + std::to_string(t));
    }
    x.push_back(std::log1p(t));
    y.push_back(std::log(v));
  }
  if (x.size() < 10) {
    fail(ErrorCode::kInsufficientSamples,
         std::to_string(x.size()) + " samples in the fit window, need 10");
  }
  return fit_line(x, y);
}

double decay_constant(const DecayRecord& r) {
  double m = 0.0;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    m = std::max(m, std::sqrt(1.0 + r.times[i]) * (r.norm_u2[i] + r.norm_dhU[i]));
  }
  return r.h1_norm_initial > 0.0 ? m / r.h1_norm_initial : 0.0;
}

std::vector<double> make_times(double T, std::size_t samples, Spacing spacing) {
  if (!(T > 0.0) || samples < 2) {
    fail(ErrorCode::kNonPositiveParameter, "need T > 0 and at least two samples");
  }
  std::vector<double> t(samples);
  if (spacing == Spacing::kLinear) {
    for (std::size_t i = 0; i < samples; ++i) {
      t[i] = T * static_cast<double>(i) / static_cast<double>(samples - 1);
    }
    return t;
  }
  const double lo = 1e-2;
  if (T <= lo) fail(ErrorCode::kNonPositiveParameter, "log spacing needs T > 1e-2");
  t[0] = 0.0;
  const std::size_t m = samples - 1;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = m == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(m - 1);
    t[i + 1] = std::exp(std::log(lo) + f * (std::log(T) - std::log(lo)));
  }
  t.back() = T;
  return t;
}

void write_decay_csv(std::ostream& os, const DecayRecord& r) {
  os << "t,norm_u2,norm_dhU,lyapunov\n";
  char line[128];
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", r.times[i], r.norm_u2[i],
                  r.norm_dhU[i], r.lyapunov[i]);
    os << line;
  }
}

double exponential_convolution(double lambda, double t) {
  if (!(t > 0.0)) return 0.0;
  return detail::adaptive_integral(
      [&](double tau) { return std::exp(-lambda * (t - tau)) / std::sqrt(1.0 + tau); }, 0.0, t,
      1e-12);
}

double boundary_mass_fraction(const GridFunction& v, double fraction) {
  const std::size_t n = v.size();
  const auto edge = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  double total = 0.0, near = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = v[i] * v[i];
    total += w;
    if (i < edge || i + edge >= n) near += w;
  }
  return total > 0.0 ? near / total : 0.0;
}

double relative_spread(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
}

}  // namespace pdhs
