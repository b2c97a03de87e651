#include "pdhs/profile.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "pdhs/errors.hpp"
#include "pdhs/parallel.hpp"
#include "quadrature.hpp"

namespace pdhs {
namespace detail {

namespace {

using Gk = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr unsigned kMaxDepth = 40;

// Bisects until each piece meets its share of the absolute tolerance or
// its error estimate sits at the rounding floor.
double bisect(const std::function<double(double)>& f, double a, double b, double abs_tol,
              unsigned depth) {
  double err = 0.0, l1 = 0.0;
  const double v = Gk::integrate(f, a, b, 0, 0.0, &err, &l1);
  // Boost leaves the error estimate of the fixed rule on the reference
  // interval [-1, 1].
  err *= 0.5 * (b - a);
  if (err <= abs_tol || err <= 64.0 * std::numeric_limits<double>::epsilon() * l1) return v;
  if (depth == kMaxDepth) {
    fail(ErrorCode::kQuadratureUnresolved, "adaptive quadrature did not settle on [" + std::to_string(a) + ", " + std::to_string(b) + "] err " + std::to_string(err) + " l1 " + std::to_string(l1) + " tol " + std::to_string(abs_tol));
  }
  const double m = 0.5 * (a + b);
  return bisect(f, a, m, 0.5 * abs_tol, depth + 1) + bisect(f, m, b, 0.5 * abs_tol, depth + 1);
}

double l1_mass(const std::function<double(double)>& f, double a, double b, int panels) {
  const double w = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double err = 0.0, l1 = 0.0;
    Gk::integrate(f, a + p * w, a + (p + 1) * w, 0, 0.0, &err, &l1);
    total += l1;
  }
  return total;
}

}  // namespace

double adaptive_integral(const std::function<double(double)>& f, double a, double b,
                         double tol) {
  return bisect(f, a, b, tol * l1_mass(f, a, b, 8), 0);
}

double cosine_integral(const std::function<double(double)>& f, double a, double b, double xi,
                       double tol) {
  const double len = b - a;
  const int panels =
      std::max(4, static_cast<int>(std::ceil(std::abs(xi) * len / std::numbers::pi)));
  const double w = len / panels;
  const double abs_tol = tol * l1_mass(f, a, b, panels) / panels;
  double sum = 0.0;
  auto g = [&](double x) { return f(x) * std::cos(xi * x); };
  for (int p = 0; p < panels; ++p) {
    sum += bisect(g, a + p * w, a + (p + 1) * w, abs_tol, 0);
  }
  return sum;
}

}  // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

// Integral of an even function against cos, memoized by |xi|. Grids of
// equal window length share their frequency sets, so h-sweeps reuse work.
class CosineTransformCache {
 public:
  explicit CosineTransformCache(std::function<double(double)> eval)
      : eval_(std::move(eval)) {}

  double get(double xi) const {
    xi = std::abs(xi);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memo_.find(xi);
      if (it != memo_.end()) return it->second;
    }
    const double v = eval_(xi);
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(xi, v);
    return v;
  }

  // Fills the cache for all |xi_k| of the grid in parallel.
  void prefetch(const Grid& grid) const {
    std::vector<double> todo;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      for (std::size_t i = grid.size() / 2; i < grid.size(); ++i) {
        const double xi = grid.frequency(i);
        if (!memo_.count(xi)) todo.push_back(xi);
      }
      const double nyquist = std::abs(grid.frequency(0));
      if (!memo_.count(nyquist)) todo.push_back(nyquist);
    }
    std::vector<double> vals(todo.size());
    parallel_for(0, todo.size(), [&](std::size_t i) { vals[i] = eval_(todo[i]); });
    std::lock_guard<std::mutex> lock(mutex_);
    for (std::size_t i = 0; i < todo.size(); ++i) memo_.emplace(todo[i], vals[i]);
  }

 private:
  std::function<double(double)> eval_;
  mutable std::mutex mutex_;
  mutable std::map<double, double> memo_;
};

double smooth_step_cinf(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

class GaussianProfile final : public Profile {
 public:
  Complex transform(double xi) const override { return std::exp(-0.5 * xi * xi); }
  double value(double x) const override { return std::exp(-0.5 * x * x); }
  std::pair<double, double> support() const override { return {-40.0, 40.0}; }
  double sobolev_norm(double s) const override {
    return std::sqrt(std::sqrt(kPi) + std::tgamma(s + 0.5));
  }
};

double bump_value(double y) {
  if (std::abs(y) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - y * y));
}

class BumpProfile final : public Profile {
 public:
  explicit BumpProfile(double center)
      : center_(center), cache_([](double xi) {
          return 2.0 * detail::cosine_integral(bump_value, 0.0, 1.0, xi);
        }) {}

  Complex transform(double xi) const override {
    return kInvSqrt2Pi * cache_.get(xi) * std::polar(1.0, -xi * center_);
  }
  double value(double x) const override { return bump_value(x - center_); }
  std::pair<double, double> support() const override {
    return {center_ - 1.0, center_ + 1.0};
  }
  SpectralFunction spectrum(const Grid& grid) const override {
    cache_.prefetch(grid);
    return Profile::spectrum(grid);
  }

 private:
  double center_;
  CosineTransformCache cache_;
};

// f = f psi + f (1 - psi) with psi a C-infinity plateau around the origin.
// The near-singular core goes through adaptive quadrature; the remainder
// is smooth and is transformed by an oversampled trapezoid rule.
class DecayProfile final : public Profile {
 public:
  static constexpr double kCoreInner = 0.5;
  static constexpr double kCoreOuter = 1.5;
  static constexpr std::size_t kOversample = 8;

  DecayProfile(double L, double delta)
      : L_(L), delta_(delta), core_cache_([this](double xi) {
          return 2.0 * detail::cosine_integral(
                           [this](double x) { return value(x) * core_weight(x); },
                           0.0, kCoreOuter, xi);
        }) {
    if (!(L > 2.0 * kCoreOuter)) {
      fail(ErrorCode::kSupportOverflow, "decay profile window too small");
    }
  }

  double value(double x) const override {
    const double cut = 1.0 - smoothstep((std::abs(x) - 0.5 * L_) / (0.25 * L_));
    if (cut == 0.0) return 0.0;
    return cut / std::sqrt(std::sqrt(x * x + delta_));
  }
  std::pair<double, double> support() const override {
    return {-0.75 * L_, 0.75 * L_};
  }

  Complex transform(double xi) const override {
    const double rest = 2.0 * detail::cosine_integral(
        [this](double x) { return value(x) * (1.0 - core_weight(x)); },
        kCoreInner, 0.75 * L_, xi);
    return kInvSqrt2Pi * (core_cache_.get(xi) + rest);
  }

  SpectralFunction spectrum(const Grid& grid) const override {
    const double lo = grid.position(0), hi = grid.position(grid.size() - 1);
    if (lo > -0.75 * L_ || hi < 0.75 * L_) {
      fail(ErrorCode::kSupportOverflow,
           "grid window does not contain the decay profile support");
    }
    core_cache_.prefetch(grid);
    const std::size_t n = grid.size();
    const Grid fine(grid.h() / kOversample, n * kOversample, grid.offset());
    GridFunction rest(fine);
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const double x = fine.position(i);
      rest[i] = value(x) * (1.0 - core_weight(x));
    }
    const SpectralFunction rest_hat = dft(rest);
    SpectralFunction out(grid);
    // Coarse mode k sits at fine index k + n_f/2.
    const std::size_t shift = fine.size() / 2 - n / 2;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = grid.frequency(i);
      out[i] = kInvSqrt2Pi * core_cache_.get(xi) + rest_hat[i + shift];
    }
    return out;
  }

 private:
  static double core_weight(double x) {
    return 1.0 - smooth_step_cinf((std::abs(x) - kCoreInner) /
                                  (kCoreOuter - kCoreInner));
  }

  double L_;
  double delta_;
  CosineTransformCache core_cache_;
};

class CombinedProfile final : public Profile {
 public:
  CombinedProfile(ProfilePtr a, double alpha, ProfilePtr b, double beta)
      : a_(std::move(a)), b_(std::move(b)), alpha_(alpha), beta_(beta) {}

  Complex transform(double xi) const override {
    return alpha_ * a_->transform(xi) + beta_ * b_->transform(xi);
  }
  double value(double x) const override {
    return alpha_ * a_->value(x) + beta_ * b_->value(x);
  }
  std::pair<double, double> support() const override {
    auto [a0, a1] = a_->support();
    auto [b0, b1] = b_->support();
    return {std::min(a0, b0), std::max(a1, b1)};
  }
  SpectralFunction spectrum(const Grid& grid) const override {
    SpectralFunction fa = a_->spectrum(grid);
    const SpectralFunction fb = b_->spectrum(grid);
    for (std::size_t i = 0; i < fa.size(); ++i) {
      fa[i] = alpha_ * fa[i] + beta_ * fb[i];
    }
    return fa;
  }

 private:
  ProfilePtr a_, b_;
  double alpha_, beta_;
};

}  // namespace

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double Profile::sobolev_norm(double s) const {
  auto [lo, hi] = support();
  const double width = hi - lo;
  const double center = 0.5 * (lo + hi);
  double previous = -1.0;
  for (std::size_t n = 256; n <= (std::size_t{1} << 21); n *= 2) {
    const Grid g(2.0 * width / static_cast<double>(n), n, -center);
    GridFunction samples(g);
    for (std::size_t i = 0; i < n; ++i) samples[i] = value(g.position(i));
    const SpectralFunction c = dft(samples);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = std::abs(g.frequency(i));
      sum += (1.0 + std::pow(xi, 2.0 * s)) * std::norm(c[i]);
    }
    const double norm = std::sqrt(sum * g.frequency_step());
    if (previous >= 0.0 && std::abs(norm - previous) <= 1e-8 * std::max(norm, 1e-300)) {
      return norm;
    }
    if (norm == 0.0 && previous == 0.0) return 0.0;
    previous = norm;
  }
  fail(ErrorCode::kRegularityFail,
       "H^" + std::to_string(s) + " norm does not converge under refinement");
}

SpectralFunction Profile::spectrum(const Grid& grid) const {
  SpectralFunction out(grid);
  parallel_for(0, grid.size(), [&](std::size_t i) {
    out[i] = transform(grid.frequency(i));
  });
  for (const Complex& c : out.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      fail(ErrorCode::kNonFiniteSymbol, "profile transform is not finite");
    }
  }
  return out;
}

Symbol Profile::symbol() const {
  return [this](double xi) { return transform(xi); };
}

ProfilePtr gaussian_profile() { return std::make_shared<GaussianProfile>(); }

ProfilePtr bump_profile(double center) {
  return std::make_shared<BumpProfile>(center);
}

ProfilePtr decay_profile(double L, double delta) {
  return std::make_shared<DecayProfile>(L, delta);
}

ProfilePtr combine(ProfilePtr a, double alpha, ProfilePtr b, double beta) {
  return std::make_shared<CombinedProfile>(std::move(a), alpha, std::move(b), beta);
}

}  // namespace pdhs
