#include "cchlab/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <nlohmann/json.hpp>

#include "cchlab/errors.hpp"

namespace cch {

std::vector<int> signed_modes(const SpectralGrid& grid) {
  std::vector<int> modes;
  modes.reserve(grid.points() - 1);
  for (int k = -grid.nyquist(); k < grid.nyquist(); ++k) {
    if (k != 0) modes.push_back(k);
  }
  return modes;
}

Eigen::VectorXcd to_signed(const Field& f) {
  const auto& g = f.grid();
  const auto modes = signed_modes(g);
  Eigen::VectorXcd v(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const int k = modes[i];
    if (k == -g.nyquist()) {
      v[i] = f.coefficient(g.nyquist());
    } else if (k > 0) {
      v[i] = f.coefficient(k);
    } else {
      v[i] = std::conj(f.coefficient(-k));
    }
  }
  return v;
}

Field from_signed(const SpectralGrid& grid, const Eigen::VectorXcd& v) {
  const int n = grid.points();
  if (v.size() != n - 1) throw GridMismatchError("from_signed: vector length does not match the grid");
  const int nyq = grid.nyquist();
  // Index of mode k in signed_modes order.
  auto index = [nyq](int k) { return k < 0 ? k + nyq : k + nyq - 1; };
  std::vector<Complex> c(grid.modes());
  for (int k = 1; k < nyq; ++k) c[k] = 0.5 * (v[index(k)] + std::conj(v[index(-k)]));
  c[nyq] = v[index(-nyq)].real();
  return Field::from_coefficients(grid, std::move(c));
}

LinearOperator assemble(const Field& u_star, double delta) {
  const auto& g = u_star.grid();
  if (!u_star.is_zero_mean(1e-10)) throw DomainError("assemble: u* must have zero mean");
  LinearOperator op{g, delta, signed_modes(g), {}};
  const int n = static_cast<int>(op.modes.size());
  const int m = g.padded_points();
  const int nyq = g.nyquist();
  op.matrix = Eigen::MatrixXcd::Zero(n, n);
  const auto spectra = detail::padded_spectra(u_star);
  for (int a = 0; a < n; ++a) {
    const int k = op.modes[a];
    const double q = g.wavenumber(k);
    op.matrix(a, a) += linear_symbol(q);
    if (k == -nyq) continue;
    const double q4 = q * q * q * q;
    const Complex conv(0.0, delta * q);
    for (int b = 0; b < n; ++b) {
      const int j = op.modes[b];
      if (j == -nyq) continue;
      const int d = ((k - j) % m + m) % m;
      op.matrix(a, b) += conv * spectra.u[d] - q4 * spectra.three_u_squared[d];
    }
  }
  return op;
}

double default_zero_tol(const SpectralGrid& grid) {
  const double q = grid.wavenumber(grid.nyquist());
  return 1e-9 * std::max(1.0, q * q);
}

SpectrumReport spectrum(const LinearOperator& op, const Field& u_star, double zero_tol) {
  require_same_grid(Field::zero(op.grid), u_star, "spectrum");
  const int n = static_cast<int>(op.modes.size());
  Eigen::MatrixXcd a(n, n);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const double q = op.grid.wavenumber(op.modes[r]);
    const double w = 1.0 / (q * q * q * q);
    a.row(r) = op.matrix.row(r) * w;
    b(r, r) = w;
  }
  Eigen::VectorXcd alpha(n), beta(n);
  Eigen::MatrixXcd vr(n, n);
  std::complex<double> dummy;
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, b.data(), n, alpha.data(),
                                        beta.data(), &dummy, 1, vr.data(), n);
  if (info != 0) throw ConvergenceError("spectrum: zggev failed with info " + std::to_string(info));

  SpectrumReport rep;
  rep.length = op.grid.length();
  rep.points = op.grid.points();
  rep.delta = op.delta;
  rep.zero_tol = zero_tol > 0.0 ? zero_tol : default_zero_tol(op.grid);
  std::vector<std::complex<double>> lambda(n);
  for (int i = 0; i < n; ++i) {
    if (beta[i] == 0.0) throw ConvergenceError("spectrum: infinite eigenvalue in a definite pencil");
    lambda[i] = alpha[i] / beta[i];
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return lambda[x].real() > lambda[y].real(); });
  rep.eigenvalues.reserve(n);
  for (int i : order) rep.eigenvalues.push_back(lambda[i]);

  int smallest = 0;
  rep.spectral_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double mag = std::abs(lambda[i]);
    if (mag < std::abs(lambda[smallest])) smallest = i;
    rep.spectral_radius = std::max(rep.spectral_radius, mag);
    if (mag < rep.zero_tol) {
      ++rep.kernel_dim;
    } else {
      rep.spectral_gap = std::min(rep.spectral_gap, mag);
    }
    if (lambda[i].real() > rep.zero_tol) ++rep.n_unstable;
  }
  const Eigen::VectorXcd ux = to_signed(derivative(u_star, 1));
  const Eigen::VectorXcd v0 = vr.col(smallest);
  const double denom = ux.norm() * v0.norm();
  rep.kernel_alignment = denom > 0.0 ? std::abs(v0.dot(ux)) / denom : 0.0;
  return rep;
}

RealnessCheck realness_check(const SpectrumReport& report) {
  RealnessCheck out;
  for (const auto& l : report.eigenvalues) out.max_imag = std::max(out.max_imag, std::abs(l.imag()));
  out.real = out.max_imag < 1e-6 * report.spectral_radius;
  return out;
}

std::string to_json(const SpectrumReport& report) {
  nlohmann::json j;
  std::vector<double> re, im;
  for (const auto& l : report.eigenvalues) {
    re.push_back(l.real());
    im.push_back(l.imag());
  }
  j["eigenvalues_re"] = re;
  j["eigenvalues_im"] = im;
  j["kernel_dim"] = report.kernel_dim;
  j["kernel_alignment"] = report.kernel_alignment;
  j["n_unstable"] = report.n_unstable;
  j["zero_tol"] = report.zero_tol;
  j["spectral_gap"] = std::isfinite(report.spectral_gap) ? nlohmann::json(report.spectral_gap) : nlohmann::json();
  j["spectral_radius"] = report.spectral_radius;
  j["L"] = report.length;
  j["N"] = report.points;
  j["delta"] = report.delta;
  j["family_id"] = report.family_id;
  return j.dump(2);
}

SpectrumReport spectrum_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SpectrumReport rep;
  const auto re = j.at("eigenvalues_re").get<std::vector<double>>();
  const auto im = j.at("eigenvalues_im").get<std::vector<double>>();
  if (re.size() != im.size()) throw DomainError("spectrum_from_json: eigenvalue arrays differ in length");
  for (std::size_t i = 0; i < re.size(); ++i) rep.eigenvalues.emplace_back(re[i], im[i]);
  rep.kernel_dim = j.at("kernel_dim").get<int>();
  rep.kernel_alignment = j.at("kernel_alignment").get<double>();
  rep.n_unstable = j.at("n_unstable").get<int>();
  rep.zero_tol = j.at("zero_tol").get<double>();
  if (j.contains("spectral_gap") && !j["spectral_gap"].is_null()) rep.spectral_gap = j["spectral_gap"].get<double>();
  rep.spectral_radius = j.value("spectral_radius", 0.0);
  rep.length = j.at("L").get<double>();
  rep.points = j.at("N").get<int>();
  rep.delta = j.at("delta").get<double>();
  rep.family_id = j.at("family_id").get<int>();
  return rep;
}

}  // namespace cch
