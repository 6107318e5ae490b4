#pragma once

// Linearization w -> delta (u* w)_x + D^6 w - D^4 (W''(u*) w) of the
// discretized right-hand side, in the zero-mean complex Fourier basis, and
// its spectrum.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cchlab/spectral.hpp"

namespace cch {

/// Signed wavenumber indices -N/2..-1, 1..N/2-1 (zero mode excluded).
std::vector<int> signed_modes(const SpectralGrid& grid);

/// Field coefficients as a vector over signed_modes.
Eigen::VectorXcd to_signed(const Field& f);

/// Inverse of to_signed; the Hermitian part is taken, the mean is zero.
Field from_signed(const SpectralGrid& grid, const Eigen::VectorXcd& v);

struct LinearOperator {
  SpectralGrid grid;
  double delta = 0.0;
  std::vector<int> modes;
  Eigen::MatrixXcd matrix;  ///< exact Jacobian of rhs(., delta) at u*
};

/// Jacobian of rhs(u, delta) at u* on the signed mode basis.
LinearOperator assemble(const Field& u_star, double delta);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;  ///< descending real part
  int kernel_dim = 0;
  double kernel_alignment = 0.0;
  int n_unstable = 0;
  double zero_tol = 0.0;
  double spectral_gap = 0.0;  ///< smallest |lambda| outside the kernel
  double spectral_radius = 0.0;

  // Provenance for serialization.
  double length = 0.0;
  int points = 0;
  double delta = 0.0;
  int family_id = -1;
};

/// 1e-9 * max(1, q_max^2): the scale of the rescaled pencil.
double default_zero_tol(const SpectralGrid& grid);

/// Eigenvalues of the operator via the pencil (D^-4 A, D^-4), with
/// D^-4 = diag(q^-4). kernel_alignment compares the eigenvector of the
/// smallest |lambda| with u*_x. Pass zero_tol <= 0 for the default.
SpectrumReport spectrum(const LinearOperator& op, const Field& u_star, double zero_tol = 0.0);

struct RealnessCheck {
  bool real = false;
  double max_imag = 0.0;
};

/// Real iff max |Im lambda| < 1e-6 * spectral radius.
RealnessCheck realness_check(const SpectrumReport& report);

std::string to_json(const SpectrumReport& report);
SpectrumReport spectrum_from_json(const std::string& text);

}  // namespace cch
