#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace pdhs {

using Complex = std::complex<double>;

/// Periodic window of n_points sites of an h-spaced lattice. Site i sits at
/// x_i = (i - n/2) h - offset; mode i carries frequency xi_i = 2 pi k/(n h)
/// with k = i - n/2, so modes are stored in ascending frequency order.
class Grid {
 public:
  Grid(double h, std::size_t n_points, double offset = 0.0);

  double h() const { return h_; }
  std::size_t size() const { return n_; }
  double offset() const { return offset_; }
  double half_length() const { return 0.5 * static_cast<double>(n_) * h_; }

  double position(std::size_t i) const;
  long wavenumber(std::size_t i) const {
    return static_cast<long>(i) - static_cast<long>(n_ / 2);
  }
  double frequency(std::size_t i) const;
  /// 2 pi/(n h), the weight of one mode in frequency quadratures.
  double frequency_step() const;
  /// sin(xi h)/h, exactly zero at xi = 0 and at the Nyquist mode.
  double symbol(std::size_t i) const;
  /// |sin(xi h)|/h.
  double zeta(std::size_t i) const;

  bool operator==(const Grid& other) const = default;

 private:
  double h_;
  std::size_t n_;
  double offset_;
};

template <typename T>
class BasicGridFunction {
 public:
  using value_type = T;

  explicit BasicGridFunction(const Grid& grid)
      : grid_(grid), values_(grid.size(), T{}) {}
  BasicGridFunction(const Grid& grid, std::vector<T> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<T>& values() const { return values_; }
  std::vector<T>& values() { return values_; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  T& operator[](std::size_t i) { return values_[i]; }
  /// Periodic access.
  const T& at(long i) const;

  BasicGridFunction& operator+=(const BasicGridFunction& other);
  BasicGridFunction& operator-=(const BasicGridFunction& other);
  BasicGridFunction& operator*=(T scale);

 private:
  Grid grid_;
  std::vector<T> values_;
};

using GridFunction = BasicGridFunction<double>;
using ComplexGridFunction = BasicGridFunction<Complex>;

template <typename T>
BasicGridFunction<T> operator+(BasicGridFunction<T> a,
                               const BasicGridFunction<T>& b) {
  return a += b;
}
template <typename T>
BasicGridFunction<T> operator-(BasicGridFunction<T> a,
                               const BasicGridFunction<T>& b) {
  return a -= b;
}
template <typename T>
BasicGridFunction<T> operator*(T s, BasicGridFunction<T> a) {
  return a *= s;
}

/// Mode coefficients at the discrete frequencies of a grid.
class SpectralFunction {
 public:
  explicit SpectralFunction(const Grid& grid)
      : grid_(grid), coeffs_(grid.size()) {}
  SpectralFunction(const Grid& grid, std::vector<Complex> coeffs);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::vector<Complex>& coeffs() { return coeffs_; }
  const Complex& operator[](std::size_t i) const { return coeffs_[i]; }
  Complex& operator[](std::size_t i) { return coeffs_[i]; }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

using Symbol = std::function<Complex(double xi)>;

/// v_hat(xi_k) = h/sqrt(2 pi) sum_n e^{-i xi_k x_n} v_n.
SpectralFunction dft(const GridFunction& v);
SpectralFunction dft(const ComplexGridFunction& v);
/// v_n = 1/sqrt(2 pi) sum_k e^{i xi_k x_n} g_k 2 pi/(n h).
ComplexGridFunction idft(const SpectralFunction& g);
/// Real part of idft; exact for conjugate-symmetric spectra.
GridFunction idft_real(const SpectralFunction& g);

GridFunction real_part(const ComplexGridFunction& v);
GridFunction imag_part(const ComplexGridFunction& v);

double l2_norm(const GridFunction& v);
double l2_norm(const ComplexGridFunction& v);
/// Frequency quadrature (sum |g_k|^2 2 pi/(n h))^{1/2}.
double l2_norm(const SpectralFunction& g);
double linf_norm(const GridFunction& v);
double linf_norm(const ComplexGridFunction& v);
/// h sum u_n v_n (conjugating u for complex data).
double inner_product(const GridFunction& u, const GridFunction& v);
Complex inner_product(const ComplexGridFunction& u,
                      const ComplexGridFunction& v);

/// (v_{n+1} - v_{n-1})/(2h), (v_{n+1} - v_n)/h and (v_n - v_{n-1})/h.
GridFunction d_central(const GridFunction& v);
ComplexGridFunction d_central(const ComplexGridFunction& v);
GridFunction d_plus(const GridFunction& v);
ComplexGridFunction d_plus(const ComplexGridFunction& v);
GridFunction d_minus(const GridFunction& v);
ComplexGridFunction d_minus(const ComplexGridFunction& v);

/// Applies m(xi_k) mode by mode. Throws NonFiniteSymbol.
SpectralFunction apply_symbol(const SpectralFunction& g, const Symbol& m);
ComplexGridFunction multiplier(const ComplexGridFunction& v, const Symbol& m);
/// Real part of the complex result, exact for m(-xi) = conj(m(xi)).
GridFunction multiplier(const GridFunction& v, const Symbol& m);

/// Homogeneous: L2 frequency norm of |sin(xi h)/h|^s v_hat, with the
/// zero-symbol modes dropped when s < 0. Inhomogeneous adds the l2 part
/// in quadrature.
double sobolev_norm(const SpectralFunction& g, double s, bool homogeneous);
double sobolev_norm(const GridFunction& v, double s, bool homogeneous);

/// Coefficients f_hat(xi_k). Throws NonFiniteSymbol.
SpectralFunction sample_transform(const Symbol& f_hat, const Grid& grid);
/// T_h f for the function whose continuous transform is f_hat.
GridFunction truncate(const Symbol& f_hat, const Grid& grid);

/// (v * w)_n = h sum_m v_m w_{n-m}, lattice indices counted from the
/// site at x = -offset. The transform obeys
/// dft(v * w) = sqrt(2 pi) e^{-i xi offset} dft(v) dft(w).
GridFunction convolve(const GridFunction& v, const GridFunction& w);

void write_csv(std::ostream& os, const GridFunction& v);
void write_csv(std::ostream& os, const ComplexGridFunction& v);
void write_csv(const std::string& path, const GridFunction& v);
/// Reads `x,value` produced by write_csv; the grid is inferred from the
/// positions.
GridFunction read_csv(std::istream& is);

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace pdhs
