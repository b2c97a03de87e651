#include "pdhs/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fft.hpp"
#include "pdhs/errors.hpp"

namespace pdhs {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

// e^{i xi_k offset} (-1)^k, the phase linking FFT output to the centered
// transform.
Complex mode_phase(const Grid& g, std::size_t i) {
  const long k = g.wavenumber(i);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  if (g.offset() == 0.0) return {sign, 0.0};
  return sign * std::polar(1.0, g.frequency(i) * g.offset());
}

template <typename T>
SpectralFunction dft_impl(const BasicGridFunction<T>& v) {
  const Grid& g = v.grid();
  const std::size_t n = g.size();
  std::vector<Complex> buf(v.values().begin(), v.values().end());
  detail::fft_forward(buf.data(), buf.data(), n);
  SpectralFunction out(g);
  const double scale = g.h() / kSqrt2Pi;
  for (std::size_t i = 0; i < n; ++i) {
    const long k = g.wavenumber(i);
    const std::size_t src = static_cast<std::size_t>((k % static_cast<long>(n) +
                                                      static_cast<long>(n)) %
                                                     static_cast<long>(n));
    out[i] = scale * mode_phase(g, i) * buf[src];
  }
  return out;
}

template <typename T>
BasicGridFunction<T> shift_diff(const BasicGridFunction<T>& v, int right,
                                int left, double denom) {
  const std::size_t n = v.size();
  BasicGridFunction<T> out(v.grid());
  const auto& a = v.values();
  auto& b = out.values();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + static_cast<std::size_t>(right)) % n;
    const std::size_t im = (i + n - static_cast<std::size_t>(left)) % n;
    b[i] = (a[ip] - a[im]) / denom;
  }
  return out;
}

}  // namespace

Grid::Grid(double h, std::size_t n_points, double offset)
    : h_(h), n_(n_points), offset_(offset) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    fail(ErrorCode::kInvalidGrid, "grid width must be positive");
  }
  if (n_points < 8 || n_points % 2 != 0) {
    fail(ErrorCode::kInvalidGrid,
         "n_points must be even and >= 8, got " + std::to_string(n_points));
  }
  if (!std::isfinite(offset)) fail(ErrorCode::kInvalidGrid, "bad offset");
}

double Grid::position(std::size_t i) const {
  return static_cast<double>(wavenumber(i)) * h_ - offset_;
}

double Grid::frequency(std::size_t i) const {
  return 2.0 * kPi * static_cast<double>(wavenumber(i)) /
         (static_cast<double>(n_) * h_);
}

double Grid::frequency_step() const {
  return 2.0 * kPi / (static_cast<double>(n_) * h_);
}

double Grid::symbol(std::size_t i) const {
  const long k = wavenumber(i);
  const long n = static_cast<long>(n_);
  if (k == 0 || 2 * k == -n) return 0.0;
  return std::sin(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n)) /
         h_;
}

double Grid::zeta(std::size_t i) const { return std::abs(symbol(i)); }

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) fail(ErrorCode::kGridMismatch, "grid functions live on different grids");
}

template <typename T>
BasicGridFunction<T>::BasicGridFunction(const Grid& grid, std::vector<T> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    fail(ErrorCode::kGridMismatch, "value count does not match grid size");
  }
}

template <typename T>
const T& BasicGridFunction<T>::at(long i) const {
  const long n = static_cast<long>(values_.size());
  return values_[static_cast<std::size_t>(((i % n) + n) % n)];
}

template <typename T>
BasicGridFunction<T>& BasicGridFunction<T>::operator+=(
    const BasicGridFunction& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

template <typename T>
BasicGridFunction<T>& BasicGridFunction<T>::operator-=(
    const BasicGridFunction& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

template <typename T>
BasicGridFunction<T>& BasicGridFunction<T>::operator*=(T scale) {
  for (auto& x : values_) x *= scale;
  return *this;
}

template class BasicGridFunction<double>;
template class BasicGridFunction<Complex>;

SpectralFunction::SpectralFunction(const Grid& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    fail(ErrorCode::kGridMismatch, "coefficient count does not match grid size");
  }
}

SpectralFunction dft(const GridFunction& v) { return dft_impl(v); }
SpectralFunction dft(const ComplexGridFunction& v) { return dft_impl(v); }

ComplexGridFunction idft(const SpectralFunction& g) {
  const Grid& grid = g.grid();
  const std::size_t n = grid.size();
  std::vector<Complex> buf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long k = grid.wavenumber(i);
    const std::size_t dst = static_cast<std::size_t>(
        (k % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n));
    buf[dst] = g[i] * std::conj(mode_phase(grid, i));
  }
  detail::fft_backward(buf.data(), buf.data(), n);
  const double scale = kSqrt2Pi / (static_cast<double>(n) * grid.h());
  for (auto& x : buf) x *= scale;
  return ComplexGridFunction(grid, std::move(buf));
}

GridFunction idft_real(const SpectralFunction& g) { return real_part(idft(g)); }

GridFunction real_part(const ComplexGridFunction& v) {
  GridFunction out(v.grid());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

GridFunction imag_part(const ComplexGridFunction& v) {
  GridFunction out(v.grid());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].imag();
  return out;
}

double l2_norm(const GridFunction& v) {
  double s = 0.0;
  for (double x : v.values()) s += x * x;
  return std::sqrt(v.grid().h() * s);
}

double l2_norm(const ComplexGridFunction& v) {
  double s = 0.0;
  for (const Complex& x : v.values()) s += std::norm(x);
  return std::sqrt(v.grid().h() * s);
}

double l2_norm(const SpectralFunction& g) {
  double s = 0.0;
  for (const Complex& c : g.coeffs()) s += std::norm(c);
  return std::sqrt(s * g.grid().frequency_step());
}

double linf_norm(const GridFunction& v) {
  double m = 0.0;
  for (double x : v.values()) m = std::max(m, std::abs(x));
  return m;
}

double linf_norm(const ComplexGridFunction& v) {
  double m = 0.0;
  for (const Complex& x : v.values()) m = std::max(m, std::abs(x));
  return m;
}

double inner_product(const GridFunction& u, const GridFunction& v) {
  require_same_grid(u.grid(), v.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return u.grid().h() * s;
}

Complex inner_product(const ComplexGridFunction& u, const ComplexGridFunction& v) {
  require_same_grid(u.grid(), v.grid());
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return u.grid().h() * s;
}

GridFunction d_central(const GridFunction& v) {
  return shift_diff(v, 1, 1, 2.0 * v.grid().h());
}
ComplexGridFunction d_central(const ComplexGridFunction& v) {
  return shift_diff(v, 1, 1, 2.0 * v.grid().h());
}
GridFunction d_plus(const GridFunction& v) {
  return shift_diff(v, 1, 0, v.grid().h());
}
ComplexGridFunction d_plus(const ComplexGridFunction& v) {
  return shift_diff(v, 1, 0, v.grid().h());
}
GridFunction d_minus(const GridFunction& v) {
  return shift_diff(v, 0, 1, v.grid().h());
}
ComplexGridFunction d_minus(const ComplexGridFunction& v) {
  return shift_diff(v, 0, 1, v.grid().h());
}

SpectralFunction apply_symbol(const SpectralFunction& g, const Symbol& m) {
  SpectralFunction out(g.grid());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.grid().frequency(i);
    const Complex mi = m(xi);
    if (!std::isfinite(mi.real()) || !std::isfinite(mi.imag())) {
      std::ostringstream msg;
      msg << "symbol is not finite at xi = " << xi;
      fail(ErrorCode::kNonFiniteSymbol, msg.str());
    }
    out[i] = mi * g[i];
  }
  return out;
}

ComplexGridFunction multiplier(const ComplexGridFunction& v, const Symbol& m) {
  return idft(apply_symbol(dft(v), m));
}

GridFunction multiplier(const GridFunction& v, const Symbol& m) {
  return idft_real(apply_symbol(dft(v), m));
}

double sobolev_norm(const SpectralFunction& g, double s, bool homogeneous) {
  const Grid& grid = g.grid();
  double hom = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = std::norm(g[i]);
    l2 += a;
    const double z = grid.zeta(i);
    if (z == 0.0) {
      if (s == 0.0) hom += a;
      continue;
    }
    hom += std::pow(z, 2.0 * s) * a;
  }
  const double dxi = grid.frequency_step();
  if (homogeneous) return std::sqrt(hom * dxi);
  return std::sqrt((l2 + hom) * dxi);
}

double sobolev_norm(const GridFunction& v, double s, bool homogeneous) {
  return sobolev_norm(dft(v), s, homogeneous);
}

SpectralFunction sample_transform(const Symbol& f_hat, const Grid& grid) {
  SpectralFunction out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double xi = grid.frequency(i);
    const Complex c = f_hat(xi);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      std::ostringstream msg;
      msg << "transform is not finite at xi = " << xi;
      fail(ErrorCode::kNonFiniteSymbol, msg.str());
    }
    out[i] = c;
  }
  return out;
}

GridFunction truncate(const Symbol& f_hat, const Grid& grid) {
  return idft_real(sample_transform(f_hat, grid));
}

GridFunction convolve(const GridFunction& v, const GridFunction& w) {
  require_same_grid(v.grid(), w.grid());
  const Grid& grid = v.grid();
  SpectralFunction a = dft(v);
  const SpectralFunction b = dft(w);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Complex phase = kSqrt2Pi;
    if (grid.offset() != 0.0) {
      phase *= std::polar(1.0, -grid.frequency(i) * grid.offset());
    }
    a[i] *= phase * b[i];
  }
  return idft_real(a);
}

void write_csv(std::ostream& os, const GridFunction& v) {
  os << "x,value\n";
  char line[96];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", v.grid().position(i), v[i]);
    os << line;
  }
}

void write_csv(std::ostream& os, const ComplexGridFunction& v) {
  os << "x,re,im\n";
  char line[128];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", v.grid().position(i),
                  v[i].real(), v[i].imag());
    os << line;
  }
}

void write_csv(const std::string& path, const GridFunction& v) {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::kInvalidArgument, "cannot open " + path);
  write_csv(os, v);
}

GridFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,value", 0) != 0) {
    fail(ErrorCode::kInvalidArgument, "expected header x,value");
  }
  std::vector<double> xs, vs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      fail(ErrorCode::kInvalidArgument, "malformed csv line: " + line);
    }
    xs.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 8) fail(ErrorCode::kInvalidGrid, "too few rows");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  const double offset = -(xs.front() + static_cast<double>(xs.size() / 2) * h);
  return GridFunction(Grid(h, xs.size(), offset), std::move(vs));
}

}  // namespace pdhs
