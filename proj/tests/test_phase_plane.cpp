#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include "cchlab/errors.hpp"
#include "cchlab/phase_plane.hpp"
#include "cchlab/potential.hpp"

using namespace cch;

namespace {

// Direct u-integrals over (u_m, u_M) with the factored quartic; tanh-sinh
// handles the inverse square-root endpoints.
std::array<double, 2> direct_g(const PhaseParams& c) {
  const auto r = quartic_roots(c);
  const double u1 = r.u1(), um = r.um(), uM = r.uM(), u2 = r.u2();
  const auto w = [=](double u, double uc) {
    const double a = uc < 0 ? -uc : u - um;
    const double b = uc > 0 ? uc : uM - u;
    return 1.0 / std::sqrt(0.5 * (u - u1) * (u2 - u) * a * b);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double g1 = ts.integrate([&](double u, double uc) { return w(u, uc); }, um, uM);
  const double g2 = ts.integrate([&](double u, double uc) { return u * w(u, uc); }, um, uM);
  return {g1, g2};
}

PhaseParams sample_admissible(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c2d(-0.24, -0.005);
  std::uniform_real_distribution<double> sd(-0.9, 0.9);
  const double c2 = c2d(rng);
  return {sd(rng) * boundary_r(c2), c2};
}

}  // namespace

TEST(Quadrature, MatchesDirectIntegral) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    const auto c = sample_admissible(rng);
    const auto q = quad_g(c);
    const auto d = direct_g(c);
    EXPECT_FALSE(q.warning);
    EXPECT_NEAR(q.g1, d[0], 1e-9 * d[0]) << c.c1 << " " << c.c2;
    EXPECT_NEAR(q.g2, d[1], 1e-9 * d[0]) << c.c1 << " " << c.c2;
  }
}

TEST(Quadrature, ParitySymmetry) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto c = sample_admissible(rng);
    const auto a = quad_g(c);
    const auto b = quad_g({-c.c1, c.c2});
    EXPECT_NEAR(a.g1, b.g1, 1e-12 * a.g1);
    EXPECT_NEAR(a.g2, -b.g2, 1e-12 * a.g1);
  }
}

TEST(Quadrature, AxisMomentVanishes) {
  for (double c2 : {-0.2, -0.05, -0.01}) EXPECT_NEAR(quad_g({0.0, c2}).g2, 0.0, 1e-13);
}

TEST(Quadrature, SmallOrbitLimitIsPi) {
  // Near the centre the orbit is harmonic with frequency sqrt(W''(0) + ...) -> half-period pi / sqrt(1).
  const double g1 = quad_g({0.0, -0.25 + 1e-8}).g1;
  EXPECT_NEAR(g1, std::numbers::pi, 1e-3);
  EXPECT_GT(g1, std::numbers::pi);
}

TEST(Quadrature, HalfPeriodGrowsTowardsSeparatrix) {
  double prev = 0.0;
  for (double c2 : {-0.24, -0.2, -0.1, -0.05, -0.01, -0.001}) {
    const double g1 = quad_g({0.0, c2}).g1;
    EXPECT_GT(g1, prev);
    prev = g1;
  }
}

TEST(Scan, AllCellsValidAndAbovePi) {
  ScanOptions o;
  o.n1 = 60;
  o.n2 = 60;
  const auto scan = scan_phase_region(o);
  for (char v : scan.valid) EXPECT_TRUE(v);
  EXPECT_GT(scan.min_g1(), std::numbers::pi);
  EXPECT_LT(scan.min_g1(), 3.3);
}

TEST(SteadyParams, AxisSolutionMatchesBisection) {
  // Independent root find of g1(0, c2) = 5 on the direct integral.
  const auto f = [](double c2) { return direct_g({0.0, c2})[0] - 5.0; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, -0.2, -0.001, tol, iters);
  const double c2_star = 0.5 * (a + b);
  const auto found = find_steady_params(10.0);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_NEAR(found[0].c.c1, 0.0, 1e-12);
  EXPECT_NEAR(found[0].c.c2, c2_star, 1e-9);
  EXPECT_LT(found[0].g1_error, 1e-8);
  EXPECT_LT(found[0].g2_error, 1e-9);
}

TEST(SteadyParams, NoneBelowThreshold) {
  EXPECT_TRUE(find_steady_params(5.0).empty());
  EXPECT_TRUE(find_steady_params(6.2).empty());
}

TEST(Profile, MatchesShooting) {
  const double L = 10.0;
  const auto c = find_steady_params(L).at(0).c;
  const auto prof = reconstruct_profile(c, L, 256);
  using State = std::array<double, 2>;
  State y{quartic_roots(c).um(), 0.0};
  std::vector<double> times;
  for (int j = 0; j < 256; ++j) times.push_back(prof.field.grid().x(j));
  std::vector<double> shot;
  namespace odeint = boost::numeric::odeint;
  const auto system = [&](const State& s, State& d, double) {
    d[0] = s[1];
    d[1] = eval_W_prime(s[0]) + c.c1;
  };
  odeint::integrate_times(odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>()), system, y,
                          times.begin(), times.end(), 1e-3, [&](const State& s, double) { shot.push_back(s[0]); });
  for (int j = 0; j < 256; ++j) EXPECT_NEAR(prof.field.values()[j] + prof.removed_mean, shot[j], 1e-7) << j;
}

TEST(Profile, SteadyZeroMeanAndSymmetric) {
  const auto fams = enumerate_families(10.0, 256);
  ASSERT_EQ(fams.profiles.size(), 2u);
  EXPECT_EQ(fams.profiles[0].family_id, 0);
  const auto& p = fams.profiles[1];
  EXPECT_EQ(p.family_id, 1);
  EXPECT_LT(steady_residual(p.field), 1e-10);
  EXPECT_LT(std::abs(p.field.mean()), 1e-12);
  EXPECT_LT(reflection_error(p.field), 1e-10);
  EXPECT_LT(std::abs(p.removed_mean), 1e-8);
}

TEST(Profile, SubPeriodsAreTiled) {
  // L = 20 admits k = 1 and k = 2 (L / 2 = 10 > 2 pi); the k = 2 profile is the L = 10 orbit twice.
  const auto fams = enumerate_families(20.0, 512);
  int k2 = 0;
  for (const auto& p : fams.profiles) {
    if (p.k != 2) continue;
    ++k2;
    const auto& v = p.field.values();
    for (int j = 0; j < 256; ++j) EXPECT_NEAR(v[j], v[j + 256], 1e-10);
  }
  EXPECT_EQ(k2, 1);
  for (const auto& p : fams.profiles) EXPECT_LT(steady_residual(p.field), 1e-9);
}

TEST(Profile, WrongPeriodThrows) {
  const auto c = find_steady_params(10.0).at(0).c;
  EXPECT_THROW(reconstruct_profile(c, 11.0, 256), DomainError);
}

TEST(Families, OnlyTrivialBelowThreshold) {
  const auto fams = enumerate_families(5.0, 128);
  ASSERT_EQ(fams.profiles.size(), 1u);
  EXPECT_EQ(max_abs(fams.profiles[0].field), 0.0);
  EXPECT_FALSE(fams.degenerate);
}

TEST(Families, DegenerateLengthFlagged) {
  const auto fams = enumerate_families(4.0 * std::numbers::pi, 256);
  EXPECT_TRUE(fams.degenerate);
  EXPECT_EQ(fams.degenerate_k, 2);
}
