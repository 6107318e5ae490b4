#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cchlab/continuation.hpp"
#include "cchlab/errors.hpp"
#include "cchlab/linearization.hpp"
#include "cchlab/phase_plane.hpp"

using namespace cch;

namespace {

const Profile& l10_profile() {
  static const auto fams = enumerate_families(10.0, 128);
  return fams.profiles.at(1);
}

}  // namespace

TEST(SignedModes, RoundTrip) {
  const SpectralGrid g(5.0, 32);
  const auto modes = signed_modes(g);
  EXPECT_EQ(static_cast<int>(modes.size()), 31);
  EXPECT_EQ(modes.front(), -16);
  EXPECT_EQ(modes.back(), 15);
  const Field f = Field::sample(g, [](double x) { return std::sin(2 * std::numbers::pi * x / 5.0 * 3) + std::cos(x * 2 * std::numbers::pi / 5.0 * 4); });
  const Field h = from_signed(g, to_signed(f.without_mean()));
  EXPECT_LT(l2_norm(h - f.without_mean()), 1e-13);
}

TEST(Assemble, TrivialStateIsDiagonalSymbol) {
  const SpectralGrid g(10.0, 64);
  const auto op = assemble(Field::zero(g), 0.0);
  for (int i = 0; i < op.matrix.rows(); ++i) {
    const double q = 2 * std::numbers::pi * op.modes[i] / 10.0;
    for (int j = 0; j < op.matrix.cols(); ++j) {
      const std::complex<double> expect = i == j ? linear_symbol(q) : 0.0;
      EXPECT_NEAR(std::abs(op.matrix(i, j) - expect), 0.0, 1e-10 * std::max(1.0, std::abs(linear_symbol(q))));
    }
  }
}

TEST(Assemble, MatchesDirectionalDerivative) {
  // Central difference of rhs along a smooth direction.
  const auto& p = l10_profile();
  const auto& g = p.field.grid();
  const double delta = 0.07;
  const auto op = assemble(p.field, delta);
  const Field v = Field::sample(g, [](double x) { return std::cos(2 * std::numbers::pi * x / 10.0) + 0.3 * std::sin(4 * std::numbers::pi * x / 10.0); });
  const double h = 1e-5;
  const Field fd = (rhs(p.field + v * h, delta) - rhs(p.field - v * h, delta)) * (0.5 / h);
  const Field jv = from_signed(g, op.matrix * to_signed(v));
  EXPECT_LT(l2_norm(jv - fd), 1e-6 * l2_norm(jv));
}

TEST(Assemble, RejectsMeanfulState) {
  const SpectralGrid g(10.0, 32);
  EXPECT_THROW(assemble(Field::sample(g, [](double) { return 0.2; }), 0.0), DomainError);
}

TEST(Spectrum, TrivialKernel) {
  for (auto [L, expect] : {std::pair{2 * std::numbers::pi, 2}, std::pair{5.0, 0}, std::pair{4 * std::numbers::pi, 2}}) {
    const SpectralGrid g(L, 64);
    const auto rep = spectrum(assemble(Field::zero(g), 0.0), Field::zero(g));
    EXPECT_EQ(rep.kernel_dim, expect) << L;
  }
  // L = 10: modes with q < 1 are unstable.
  const SpectralGrid g(10.0, 64);
  const auto rep = spectrum(assemble(Field::zero(g), 0.0), Field::zero(g));
  EXPECT_EQ(rep.n_unstable, 2 * 1);
}

TEST(Spectrum, SimpleKernelAtEquilibrium) {
  const auto& p = l10_profile();
  const auto rep = spectrum(assemble(p.field, 0.0), p.field);
  EXPECT_EQ(rep.kernel_dim, 1);
  EXPECT_GT(rep.kernel_alignment, 1.0 - 1e-9);
  EXPECT_EQ(rep.n_unstable, 0);
  EXPECT_NEAR(rep.spectral_gap, 0.1826, 1e-3);
  // Eigenvalues sorted by descending real part.
  for (std::size_t i = 1; i < rep.eigenvalues.size(); ++i) {
    EXPECT_GE(rep.eigenvalues[i - 1].real(), rep.eigenvalues[i].real());
  }
  EXPECT_TRUE(realness_check(rep).real);
}

TEST(Spectrum, KernelPersistsWithConvection) {
  const auto fam = continue_to(0.05, l10_profile(), 4);
  const auto& u = fam.representative;
  const auto rep = spectrum(assemble(u, 0.05), u);
  EXPECT_EQ(rep.kernel_dim, 1);
  EXPECT_GT(rep.kernel_alignment, 1.0 - 1e-9);
  EXPECT_EQ(rep.n_unstable, 0);
}

TEST(Spectrum, JsonRoundTrip) {
  const auto& p = l10_profile();
  auto rep = spectrum(assemble(p.field, 0.0), p.field);
  rep.family_id = 1;
  const auto back = spectrum_from_json(to_json(rep));
  ASSERT_EQ(back.eigenvalues.size(), rep.eigenvalues.size());
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) EXPECT_EQ(back.eigenvalues[i], rep.eigenvalues[i]);
  EXPECT_EQ(back.kernel_dim, rep.kernel_dim);
  EXPECT_EQ(back.family_id, 1);
  EXPECT_EQ(back.zero_tol, rep.zero_tol);
  EXPECT_EQ(back.length, 10.0);
}
