#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cchlab/continuation.hpp"
#include "cchlab/errors.hpp"
#include "cchlab/linearization.hpp"
#include "cchlab/phase_plane.hpp"

using namespace cch;

namespace {

const FamilyList& l10() {
  static const auto fams = enumerate_families(10.0, 128);
  return fams;
}

const Profile& nontrivial() { return l10().profiles.at(1); }

Field random_field(const SpectralGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Complex> c(g.modes());
  for (int k = 1; k < 12; ++k) c[k] = Complex(n(rng), n(rng)) / double(k * k);
  return Field::from_coefficients(g, std::move(c));
}

}  // namespace

TEST(SolveSteady, PointPinnedEquilibrium) {
  const Field pinned = pin_at_zero(nontrivial().field);
  EXPECT_NEAR(pinned(0.0), 0.0, 1e-12);
  EXPECT_GT(derivative(pinned, 1)(0.0), 0.0);
  const auto sol = solve_steady(pinned, 0.0);
  EXPECT_TRUE(sol.converged);
  EXPECT_LT(sol.residual, 1e-11);
  EXPECT_LT(std::abs(sol.drift), 1e-12);
  EXPECT_LT(l2_norm(sol.u - pinned), 1e-10);
}

TEST(SolveSteady, NewtonIsQuadratic) {
  // Perturbed start: corrections shrink faster than linearly.
  const Field pinned = pin_at_zero(nontrivial().field);
  const auto& g = pinned.grid();
  Field guess = pinned + Field::sample(g, [](double x) { return 0.02 * std::sin(2 * std::numbers::pi * 2 * x / 10.0); });
  guess = pin_at_zero(guess);
  const auto sol = solve_steady(guess, 0.02);
  ASSERT_GE(sol.corrections.size(), 3u);
  const auto& c = sol.corrections;
  const std::size_t n = c.size();
  EXPECT_LT(c[n - 2], 0.1 * c[n - 3]);
}

TEST(SolveSteady, TrivialStatePinFails) {
  const SpectralGrid g(10.0, 64);
  EXPECT_THROW(pin_at_zero(Field::zero(g)), DomainError);
}

TEST(Continuation, TrivialFamilyPassesThrough) {
  const auto fam = continue_to(0.1, l10().profiles.at(0), 4);
  EXPECT_EQ(fam.delta, 0.1);
  EXPECT_EQ(max_abs(fam.representative), 0.0);
  EXPECT_EQ(fam.source_family, 0);
}

TEST(Continuation, ResidualAndLinearDeviation) {
  const auto start = continue_to(0.0, nontrivial(), 1);
  const auto path = continue_path(start, 0.08, 4);
  ASSERT_EQ(path.size(), 4u);
  EXPECT_DOUBLE_EQ(path.back().delta, 0.08);
  std::vector<double> ratio;
  for (const auto& f : path) {
    EXPECT_LT(l2_norm(eval_G(f.delta, f.representative)), 1e-9);
    EXPECT_LT(std::abs(f.drift), 1e-10);
    EXPECT_NEAR(f.representative(0.0), 0.0, 1e-10);
    ratio.push_back(sobolev_norm(f.representative - start.representative, 2) / f.delta);
  }
  for (double r : ratio) EXPECT_NEAR(r / ratio.front(), 1.0, 0.05);
}

TEST(Continuation, ReversalRecoversStart) {
  const auto start = continue_to(0.0, nontrivial(), 1);
  const auto out = continue_path(start, 0.05, 3).back();
  const auto back = continue_path(out, 0.0, 3).back();
  EXPECT_LT(sobolev_norm(back.representative - start.representative, 2), 1e-9);
}

TEST(Continuation, SidecarAndProfile) {
  const auto fam = continue_to(0.03, nontrivial(), 2);
  const auto json = sidecar_json(fam);
  EXPECT_NE(json.find("\"delta\""), std::string::npos);
  EXPECT_NE(json.find("\"newton_iters\""), std::string::npos);
  const auto p = as_profile(fam);
  EXPECT_EQ(p.family_id, 1);
  EXPECT_EQ(p.length, 10.0);
}

TEST(ShiftDistance, RecoversKnownShift) {
  const auto& u = nontrivial().field;
  for (double s : {0.37, 2.9, 7.25}) {
    const auto d = shift_distance(shift(u, s), u, 2);
    EXPECT_LT(d.distance, 1e-9);
    EXPECT_NEAR(std::remainder(d.best_shift - s, 10.0), 0.0, 1e-8);
  }
}

TEST(ShiftDistance, InvariantUnderShiftOfFirstArgument) {
  const auto& g = nontrivial().field.grid();
  const Field u = random_field(g, 1), v = random_field(g, 2);
  const double d = shift_distance(u, v).distance;
  for (double a : {0.5, 3.3, 8.8}) EXPECT_NEAR(shift_distance(shift(u, a), v).distance, d, 1e-10);
}

TEST(ShiftDistance, Pseudometric) {
  const auto& g = nontrivial().field.grid();
  for (unsigned s = 0; s < 5; ++s) {
    const Field a = random_field(g, 10 + s), b = random_field(g, 20 + s), c = random_field(g, 30 + s);
    const double ab = shift_distance(a, b).distance;
    EXPECT_NEAR(ab, shift_distance(b, a).distance, 1e-9);
    EXPECT_LE(shift_distance(a, c).distance, ab + shift_distance(b, c).distance + 1e-9);
    EXPECT_LE(ab, sobolev_norm(a - b, 2) + 1e-12);
  }
}

TEST(Hausdorff, LinearInDelta) {
  const auto start = continue_to(0.0, nontrivial(), 1);
  const auto path = continue_path(start, 0.1, 4);
  const double h1 = hausdorff_families(path[1].representative, start.representative, 16);
  const double h3 = hausdorff_families(path[3].representative, start.representative, 16);
  EXPECT_NEAR(h1 / h3, 0.5, 0.02);
  EXPECT_NEAR(hausdorff_families(start.representative, shift(start.representative, 1.1), 16), 0.0, 1e-9);
}
