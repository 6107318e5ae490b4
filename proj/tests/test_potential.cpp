#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cchlab/errors.hpp"
#include "cchlab/potential.hpp"

using namespace cch;

namespace {

// On c1 = 0 the quartic is biquadratic: u^2 = 1 -+ 2 sqrt(-c2).
std::vector<double> axis_roots(double c2) {
  const double s = 2.0 * std::sqrt(-c2);
  const double inner = std::sqrt(1.0 - s);
  const double outer = std::sqrt(1.0 + s);
  return {-outer, -inner, inner, outer};
}

// Double root u0 on the boundary: u0^2 = (1 + 2 sqrt(1 + 3 c2)) / 3, |c1| = u0 (1 - u0^2).
double boundary_oracle(double c2) {
  const double u0 = std::sqrt((1.0 + 2.0 * std::sqrt(1.0 + 3.0 * c2)) / 3.0);
  return u0 * (1.0 - u0 * u0);
}

}  // namespace

TEST(Potential, WellValues) {
  EXPECT_DOUBLE_EQ(eval_W(1.0), 0.0);
  EXPECT_DOUBLE_EQ(eval_W(0.0), 0.25);
  EXPECT_DOUBLE_EQ(eval_W_prime(2.0), 6.0);
  EXPECT_DOUBLE_EQ(eval_W_second(0.0), -1.0);
  for (double u : {-1.3, -0.2, 0.7}) {
    const double h = 1e-5;
    EXPECT_NEAR(eval_W_prime(u), (eval_W(u + h) - eval_W(u - h)) / (2 * h), 1e-9);
    EXPECT_NEAR(eval_W_second(u), (eval_W_prime(u + h) - eval_W_prime(u - h)) / (2 * h), 1e-8);
  }
}

TEST(Potential, AxisRootsClosedForm) {
  for (double c2 : {-0.2, -0.1, -0.01, -0.001}) {
    const auto r = quartic_roots({0.0, c2});
    ASSERT_TRUE(r.admissible) << c2;
    const auto expect = axis_roots(c2);
    ASSERT_EQ(r.roots.size(), 4u);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.roots[i], expect[i], 1e-12) << c2;
  }
}

TEST(Potential, AdmissibleOrdering) {
  const auto r = quartic_roots({0.0, -0.1});
  ASSERT_TRUE(r.admissible);
  EXPECT_LT(r.u1(), r.um());
  EXPECT_LT(r.um(), 0.0);
  EXPECT_LT(0.0, r.uM());
  EXPECT_LT(r.uM(), r.u2());
  EXPECT_EQ(classify_admissible({0.0, -0.1}), Admissibility::Admissible);
}

TEST(Potential, TrivialParamsAreBoundary) {
  const auto r = quartic_roots(kTrivialParams);
  EXPECT_TRUE(r.has_multiple_root());
  EXPECT_EQ(classify_admissible(r), Admissibility::Boundary);
}

TEST(Potential, PositiveEnergyIsInadmissible) {
  EXPECT_EQ(classify_admissible({0.0, 0.05}), Admissibility::Inadmissible);
  EXPECT_EQ(classify_admissible({0.5, -0.1}), Admissibility::Inadmissible);
}

TEST(Potential, BoundaryCurveMatchesDoubleRoot) {
  EXPECT_NEAR(boundary_r(-0.25), std::sqrt(2.0 / 3.0) / 3.0, 1e-12);
  EXPECT_NEAR(boundary_r(0.0), 0.0, 1e-12);
  for (double c2 = -0.249; c2 < 0.0; c2 += 0.0125) {
    EXPECT_NEAR(boundary_r(c2), boundary_oracle(c2), 1e-10) << c2;
    // The boundary point carries a double root of P_c.
    const PhaseParams p{boundary_r(c2), c2};
    const double u0 = std::sqrt((1.0 + 2.0 * std::sqrt(1.0 + 3.0 * c2)) / 3.0);
    EXPECT_NEAR(eval_Pc(p, u0), 0.0, 1e-10);
    EXPECT_NEAR(eval_Pc_prime(p, u0), 0.0, 1e-10);
  }
  EXPECT_THROW(boundary_r(0.1), DomainError);
  EXPECT_THROW(boundary_r(-0.3), DomainError);
}

TEST(Potential, ClassificationConsistentWithRoots) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> c1d(-0.3, 0.3);
  std::uniform_real_distribution<double> c2d(-0.25, 0.0);
  for (int i = 0; i < 10000; ++i) {
    const PhaseParams p{c1d(rng), c2d(rng)};
    if (p.c2 == 0.0) continue;
    const auto r = quartic_roots(p);
    const auto a = classify_admissible(r);
    const bool four_simple = r.roots.size() == 4 && !r.has_multiple_root();
    if (a == Admissibility::Admissible) {
      ASSERT_TRUE(four_simple);
      EXPECT_LT(r.um(), 0.0);
      EXPECT_GT(r.uM(), 0.0);
      EXPECT_LT(std::abs(p.c1), boundary_r(p.c2));
    } else if (a == Admissibility::Inadmissible) {
      EXPECT_FALSE(four_simple && r.um() < 0.0 && r.uM() > 0.0);
    }
    for (double u : r.roots) EXPECT_NEAR(eval_Pc(p, u), 0.0, 1e-9);
  }
}

TEST(Potential, ReflectionSymmetry) {
  // P_{(-c1, c2)}(-u) = P_{(c1, c2)}(u).
  const PhaseParams p{0.07, -0.12};
  const auto a = quartic_roots(p);
  const auto b = quartic_roots({-p.c1, p.c2});
  ASSERT_EQ(a.roots.size(), b.roots.size());
  for (std::size_t i = 0; i < a.roots.size(); ++i) EXPECT_NEAR(a.roots[i], -b.roots[a.roots.size() - 1 - i], 1e-12);
}
