#pragma once

// Fourier representation of periodic fields on [0, L) and the operators of
// the convective Cahn-Hilliard right-hand side
//   u_t = (delta/2) (u^2)_x + D^6 u - D^4 (u^3 - u).
//
// Coefficients follow the real-FFT layout: k = 0..N/2, normalized so that
// u(x) = sum_k c_k exp(i q_k x) over k = -N/2+1..N/2, c_{-k} = conj(c_k).
// The Nyquist mode is carried by linear operators only; products and odd
// derivatives drop it.

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace cch {

using Complex = std::complex<double>;

class SpectralGrid {
 public:
  SpectralGrid(double length, int points);

  double length() const { return length_; }
  int points() const { return points_; }
  int modes() const { return points_ / 2 + 1; }
  int nyquist() const { return points_ / 2; }
  int padded_points() const { return 3 * points_ / 2; }
  double spacing() const { return length_ / points_; }
  double wavenumber(int k) const;
  double x(int j) const { return j * spacing(); }

  friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;

 private:
  double length_;
  int points_;
};

/// Suggested resolution: 256 points up to L = 20, growing linearly beyond.
int default_points(double length);

/// Immutable periodic field; values and coefficients are kept consistent.
class Field {
 public:
  static Field zero(const SpectralGrid& grid);
  static Field from_values(const SpectralGrid& grid, std::span<const double> values);
  static Field from_values(const SpectralGrid& grid, std::span<const long double> values);
  static Field from_coefficients(const SpectralGrid& grid, std::vector<Complex> coefficients);
  template <class F>
  static Field sample(const SpectralGrid& grid, F&& f) {
    std::vector<double> v(grid.points());
    for (int j = 0; j < grid.points(); ++j) v[j] = f(grid.x(j));
    return from_values(grid, v);
  }

  const SpectralGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  Complex coefficient(int k) const { return coefficients_.at(k); }
  double mean() const { return coefficients_[0].real(); }
  bool is_zero_mean(double rel_tol = 1e-12) const;

  /// Spectral interpolant at an arbitrary point.
  double operator()(double x) const;

  Field operator+(const Field& o) const;
  Field operator-(const Field& o) const;
  Field operator*(double s) const;
  Field operator-() const { return *this * -1.0; }
  Field without_mean() const;

 private:
  Field(SpectralGrid grid, std::vector<Complex> coefficients, std::vector<double> values);
  SpectralGrid grid_;
  std::vector<Complex> coefficients_;
  std::vector<double> values_;
};

void require_same_grid(const Field& a, const Field& b, const char* where);

/// Multiplication by (i q)^order, order in [1, 6].
Field derivative(const Field& f, int order);

/// Zero-mean solution of w'' = f. Throws DomainError if f has a mean.
Field inverse_laplacian(const Field& f);

/// Pointwise product on the 3N/2 zero-padded grid, truncated to N modes.
Field dealiased_product(const Field& f, const Field& g, const std::optional<Field>& h = std::nullopt);

/// Translation: (shift(f, s))(x) = f(x - s).
Field shift(const Field& f, double s);

/// (delta/2)(u^2)_x + D^6 u - D^4 (u^3 - u), cubic and square dealiased,
/// products evaluated in extended precision.
Field rhs(const Field& u, double delta);

/// D^4 (D^2 u - W'(u)) = rhs(u, 0).
double steady_residual(const Field& u);

/// Discrete L2 norm, (L sum |c_k|^2)^(1/2) over all signed modes.
double l2_norm(const Field& f);

/// (L sum (1 + q^2)^k |c_k|^2)^(1/2).
double sobolev_norm(const Field& f, int order);

/// Trapezoid (sum_j u_j^2 L/N)^(1/2) on the collocation points.
double grid_l2_norm(const Field& f);

double max_abs(const Field& f);

/// Integral over [0, L) of W(u), exact for the band-limited interpolant.
double integral_W(const Field& u);

// Symbol of the linear part D^6 + D^4 at wavenumber q.
inline double linear_symbol(double q) {
  const double q2 = q * q;
  return q2 * q2 * (1.0 - q2);
}

namespace detail {

// Nonlinear part P[(delta/2)(iq)(u^2)^ - q^4 (u^3)^] of the right-hand side
// from rfft coefficients, using padded transforms in the given precision.
template <class Real>
void nonlinear_part(const SpectralGrid& grid, std::span<const Complex> coeffs, double delta,
                    std::span<Complex> out);

extern template void nonlinear_part<double>(const SpectralGrid&, std::span<const Complex>, double,
                                            std::span<Complex>);
extern template void nonlinear_part<long double>(const SpectralGrid&, std::span<const Complex>, double,
                                                 std::span<Complex>);

/// Coefficients of the padded-grid values of u and 3u^2 on all M signed
/// modes (index m = 0..M-1), used by the linearization.
struct PaddedSpectra {
  std::vector<Complex> u;
  std::vector<Complex> three_u_squared;
};
PaddedSpectra padded_spectra(const Field& u);

}  // namespace detail

}  // namespace cch
