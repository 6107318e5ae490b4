#include "cchlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cchlab/errors.hpp"
#include "fft.hpp"

namespace cch {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Mode weight in the rfft layout: interior modes stand for +k and -k.
double mode_weight(int k, int nyquist) { return (k == 0 || k == nyquist) ? 1.0 : 2.0; }

template <class Real>
std::vector<Real>& thread_buffer(int tag, std::size_t size) {
  thread_local std::vector<Real> buffers[4];
  auto& b = buffers[tag];
  if (b.size() < size) b.resize(size);
  return b;
}

template <class Real>
std::vector<std::complex<Real>>& thread_cbuffer(int tag, std::size_t size) {
  thread_local std::vector<std::complex<Real>> buffers[4];
  auto& b = buffers[tag];
  if (b.size() < size) b.resize(size);
  return b;
}

std::vector<double> values_from_coefficients(const SpectralGrid& grid, std::span<const Complex> coeffs) {
  const int n = grid.points();
  const auto& fft = detail::real_transform<long double>(n);
  auto& c = thread_cbuffer<long double>(0, grid.modes());
  for (int k = 0; k < grid.modes(); ++k) c[k] = std::complex<long double>(coeffs[k].real(), coeffs[k].imag());
  auto& v = thread_buffer<long double>(0, n);
  fft.inverse(c.data(), v.data());
  return std::vector<double>(v.begin(), v.begin() + n);
}

}  // namespace

SpectralGrid::SpectralGrid(double length, int points) : length_(length), points_(points) {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("SpectralGrid: length must be positive");
  if (points < 16 || points % 2 != 0) throw DomainError("SpectralGrid: points must be even and at least 16");
}

double SpectralGrid::wavenumber(int k) const { return kTwoPi * k / length_; }

int default_points(double length) {
  if (length <= 20.0) return 256;
  const int n = static_cast<int>(std::ceil(256.0 * length / 20.0 / 16.0)) * 16;
  return n;
}

Field::Field(SpectralGrid grid, std::vector<Complex> coefficients, std::vector<double> values)
    : grid_(grid), coefficients_(std::move(coefficients)), values_(std::move(values)) {}

Field Field::zero(const SpectralGrid& grid) {
  return Field(grid, std::vector<Complex>(grid.modes()), std::vector<double>(grid.points()));
}

Field Field::from_values(const SpectralGrid& grid, std::span<const double> values) {
  std::vector<long double> ext(values.begin(), values.end());
  return from_values(grid, std::span<const long double>(ext));
}

Field Field::from_values(const SpectralGrid& grid, std::span<const long double> values) {
  const int n = grid.points();
  if (static_cast<int>(values.size()) != n) throw GridMismatchError("Field::from_values: sample count mismatch");
  const auto& fft = detail::real_transform<long double>(n);
  auto& c = thread_cbuffer<long double>(1, grid.modes());
  fft.forward(values.data(), c.data());
  std::vector<Complex> coeffs(grid.modes());
  for (int k = 0; k < grid.modes(); ++k) {
    coeffs[k] = Complex(static_cast<double>(c[k].real() / n), static_cast<double>(c[k].imag() / n));
  }
  coeffs[0].imag(0.0);
  coeffs[grid.nyquist()].imag(0.0);
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = static_cast<double>(values[j]);
  return Field(grid, std::move(coeffs), std::move(v));
}

Field Field::from_coefficients(const SpectralGrid& grid, std::vector<Complex> coefficients) {
  if (static_cast<int>(coefficients.size()) != grid.modes()) {
    throw GridMismatchError("Field::from_coefficients: mode count mismatch");
  }
  coefficients[0].imag(0.0);
  coefficients[grid.nyquist()].imag(0.0);
  auto values = values_from_coefficients(grid, coefficients);
  return Field(grid, std::move(coefficients), std::move(values));
}

bool Field::is_zero_mean(double rel_tol) const {
  double energy = 0.0;
  for (int k = 0; k < grid_.modes(); ++k) energy += mode_weight(k, grid_.nyquist()) * std::norm(coefficients_[k]);
  return std::abs(coefficients_[0].real()) <= rel_tol * std::sqrt(energy);
}

double Field::operator()(double x) const {
  const int nyq = grid_.nyquist();
  double sum = coefficients_[0].real();
  for (int k = 1; k < nyq; ++k) {
    const double phase = grid_.wavenumber(k) * x;
    sum += 2.0 * (coefficients_[k].real() * std::cos(phase) - coefficients_[k].imag() * std::sin(phase));
  }
  sum += coefficients_[nyq].real() * std::cos(grid_.wavenumber(nyq) * x);
  return sum;
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (!(a.grid() == b.grid())) throw GridMismatchError(std::string(where) + ": fields live on different grids");
}

Field Field::operator+(const Field& o) const {
  require_same_grid(*this, o, "Field::operator+");
  std::vector<Complex> c(coefficients_);
  std::vector<double> v(values_);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.coefficients_[k];
  for (std::size_t j = 0; j < v.size(); ++j) v[j] += o.values_[j];
  return Field(grid_, std::move(c), std::move(v));
}

Field Field::operator-(const Field& o) const {
  require_same_grid(*this, o, "Field::operator-");
  std::vector<Complex> c(coefficients_);
  std::vector<double> v(values_);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= o.coefficients_[k];
  for (std::size_t j = 0; j < v.size(); ++j) v[j] -= o.values_[j];
  return Field(grid_, std::move(c), std::move(v));
}

Field Field::operator*(double s) const {
  std::vector<Complex> c(coefficients_);
  std::vector<double> v(values_);
  for (auto& x : c) x *= s;
  for (auto& x : v) x *= s;
  return Field(grid_, std::move(c), std::move(v));
}

Field Field::without_mean() const {
  std::vector<Complex> c(coefficients_);
  c[0] = 0.0;
  return from_coefficients(grid_, std::move(c));
}

Field derivative(const Field& f, int order) {
  if (order < 1 || order > 6) throw DomainError("derivative: order must be in [1, 6]");
  const auto& g = f.grid();
  std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
  for (int k = 0; k < g.modes(); ++k) {
    const Complex iq(0.0, g.wavenumber(k));
    Complex m = 1.0;
    for (int p = 0; p < order; ++p) m *= iq;
    c[k] *= m;
  }
  if (order % 2 == 1) c[g.nyquist()] = 0.0;
  return Field::from_coefficients(g, std::move(c));
}

Field inverse_laplacian(const Field& f) {
  if (!f.is_zero_mean()) throw DomainError("inverse_laplacian: input must have zero mean");
  const auto& g = f.grid();
  std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
  c[0] = 0.0;
  for (int k = 1; k < g.modes(); ++k) {
    const double q = g.wavenumber(k);
    c[k] /= -(q * q);
  }
  return Field::from_coefficients(g, std::move(c));
}

namespace {

// Padded-grid values of the Nyquist-free interpolant, in extended precision.
void padded_values(const SpectralGrid& g, std::span<const Complex> coeffs, std::vector<long double>& out,
                   int tag) {
  const int m = g.padded_points();
  const auto& fft = detail::real_transform<long double>(m);
  auto& c = thread_cbuffer<long double>(2, m / 2 + 1);
  std::fill(c.begin(), c.begin() + (m / 2 + 1), std::complex<long double>(0));
  for (int k = 0; k < g.nyquist(); ++k) c[k] = std::complex<long double>(coeffs[k].real(), coeffs[k].imag());
  out.resize(m);
  fft.inverse(c.data(), out.data());
  (void)tag;
}

Field truncate_padded(const SpectralGrid& g, const std::vector<long double>& product) {
  const int m = g.padded_points();
  const auto& fft = detail::real_transform<long double>(m);
  auto& c = thread_cbuffer<long double>(3, m / 2 + 1);
  fft.forward(product.data(), c.data());
  std::vector<Complex> out(g.modes());
  for (int k = 0; k < g.nyquist(); ++k) {
    out[k] = Complex(static_cast<double>(c[k].real() / m), static_cast<double>(c[k].imag() / m));
  }
  return Field::from_coefficients(g, std::move(out));
}

}  // namespace

Field dealiased_product(const Field& f, const Field& g, const std::optional<Field>& h) {
  require_same_grid(f, g, "dealiased_product");
  if (h) require_same_grid(f, *h, "dealiased_product");
  const auto& grid = f.grid();
  std::vector<long double> a, b, c;
  padded_values(grid, f.coefficients(), a, 0);
  padded_values(grid, g.coefficients(), b, 1);
  if (h) padded_values(grid, h->coefficients(), c, 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] *= b[i];
    if (h) a[i] *= c[i];
  }
  return truncate_padded(grid, a);
}

Field shift(const Field& f, double s) {
  const auto& g = f.grid();
  std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
  for (int k = 1; k < g.nyquist(); ++k) c[k] *= std::polar(1.0, -g.wavenumber(k) * s);
  c[g.nyquist()] *= std::cos(g.wavenumber(g.nyquist()) * s);
  return Field::from_coefficients(g, std::move(c));
}

namespace detail {

template <class Real>
void nonlinear_part(const SpectralGrid& grid, std::span<const Complex> coeffs, double delta,
                    std::span<Complex> out) {
  const int m = grid.padded_points();
  const int half = m / 2 + 1;
  const auto& fft = real_transform<Real>(m);

  auto& spec = thread_cbuffer<Real>(0, half);
  std::fill(spec.begin(), spec.begin() + half, std::complex<Real>(0));
  for (int k = 0; k < grid.nyquist(); ++k) spec[k] = std::complex<Real>(coeffs[k].real(), coeffs[k].imag());

  auto& up = thread_buffer<Real>(0, m);
  fft.inverse(spec.data(), up.data());

  auto& sq = thread_buffer<Real>(1, m);
  auto& cube = thread_buffer<Real>(2, m);
  for (int i = 0; i < m; ++i) {
    const Real v = up[i];
    sq[i] = v * v;
    cube[i] = sq[i] * v;
  }

  auto& cube_hat = thread_cbuffer<Real>(1, half);
  fft.forward(cube.data(), cube_hat.data());
  const bool convective = delta != 0.0;
  auto& sq_hat = thread_cbuffer<Real>(2, half);
  if (convective) fft.forward(sq.data(), sq_hat.data());

  const Real inv_m = Real(1) / m;
  out[0] = 0.0;
  for (int k = 1; k < grid.nyquist(); ++k) {
    const Real q = static_cast<Real>(grid.wavenumber(k));
    const Real q4 = q * q * q * q;
    std::complex<Real> value = -q4 * cube_hat[k] * inv_m;
    if (convective) value += std::complex<Real>(0, Real(0.5) * static_cast<Real>(delta) * q) * sq_hat[k] * inv_m;
    out[k] = Complex(static_cast<double>(value.real()), static_cast<double>(value.imag()));
  }
  out[grid.nyquist()] = 0.0;
}

template void nonlinear_part<double>(const SpectralGrid&, std::span<const Complex>, double, std::span<Complex>);
template void nonlinear_part<long double>(const SpectralGrid&, std::span<const Complex>, double,
                                          std::span<Complex>);

PaddedSpectra padded_spectra(const Field& u) {
  const auto& g = u.grid();
  const int m = g.padded_points();
  PaddedSpectra out;
  out.u.assign(m, 0.0);
  for (int k = 1; k < g.nyquist(); ++k) {
    out.u[k] = u.coefficient(k);
    out.u[m - k] = std::conj(u.coefficient(k));
  }
  out.u[0] = u.coefficient(0);

  std::vector<long double> up;
  padded_values(g, u.coefficients(), up, 0);
  for (auto& v : up) v = 3 * v * v;
  const auto& fft = real_transform<long double>(m);
  std::vector<std::complex<long double>> half(m / 2 + 1);
  fft.forward(up.data(), half.data());
  out.three_u_squared.assign(m, 0.0);
  for (int k = 0; k <= m / 2; ++k) {
    const Complex c(static_cast<double>(half[k].real() / m), static_cast<double>(half[k].imag() / m));
    out.three_u_squared[k] = c;
    if (k > 0 && k < m - k) out.three_u_squared[m - k] = std::conj(c);
  }
  return out;
}

}  // namespace detail

Field rhs(const Field& u, double delta) {
  const auto& g = u.grid();
  std::vector<Complex> out(g.modes());
  detail::nonlinear_part<long double>(g, u.coefficients(), delta, out);
  for (int k = 1; k < g.modes(); ++k) out[k] += linear_symbol(g.wavenumber(k)) * u.coefficient(k);
  return Field::from_coefficients(g, std::move(out));
}

double steady_residual(const Field& u) { return l2_norm(rhs(u, 0.0)); }

double sobolev_norm(const Field& f, int order) {
  const auto& g = f.grid();
  long double sum = 0;
  for (int k = 0; k < g.modes(); ++k) {
    const double q = g.wavenumber(k);
    sum += mode_weight(k, g.nyquist()) * std::pow(1.0 + q * q, order) * std::norm(f.coefficient(k));
  }
  return std::sqrt(static_cast<double>(sum) * g.length());
}

double l2_norm(const Field& f) { return sobolev_norm(f, 0); }

double grid_l2_norm(const Field& f) {
  long double sum = 0;
  for (double v : f.values()) sum += static_cast<long double>(v) * v;
  return std::sqrt(static_cast<double>(sum) * f.grid().spacing());
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double integral_W(const Field& u) {
  const auto& g = u.grid();
  // W(u) has modes up to 4 (N/2); 3N points integrate it exactly.
  const int m = 3 * g.points();
  const auto& fft = detail::real_transform<long double>(m);
  std::vector<std::complex<long double>> c(m / 2 + 1);
  for (int k = 0; k < g.nyquist(); ++k) c[k] = {u.coefficient(k).real(), u.coefficient(k).imag()};
  c[g.nyquist()] = {u.coefficient(g.nyquist()).real() / 2, 0};
  std::vector<long double> v(m);
  fft.inverse(c.data(), v.data());
  long double sum = 0;
  for (auto x : v) {
    const long double s = x * x - 1;
    sum += s * s / 4;
  }
  return static_cast<double>(sum * g.length() / m);
}

}  // namespace cch
