#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cchlab/errors.hpp"
#include "cchlab/evolution.hpp"
#include "cchlab/phase_plane.hpp"
#include "cchlab/profile_io.hpp"

using namespace cch;

namespace {

constexpr double kPi = std::numbers::pi;

Field run(const Field& u0, double delta, double T, double dt, Scheme s = Scheme::HochbruckOstermann) {
  EvolveOptions o;
  o.stride = 1 << 30;
  o.precision = Precision::Extended;
  o.scheme = s;
  return evolve(u0, delta, T, dt, o).final_state();
}

// phi_n by direct series in long double.
double phi_series(int n, double z) {
  long double term = 1, sum = 0;
  for (int j = 2; j <= n; ++j) term /= j;
  for (int m = 0; m < 200; ++m) {
    sum += term;
    term *= static_cast<long double>(z) / (m + n + 1);
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST(Phi, MatchesSeriesAcrossSwitch) {
  for (int n = 1; n <= 3; ++n) {
    for (double z : {-3.0, -0.7, -0.5000001, -0.4999999, -1e-3, 0.0, 1e-6, 0.3, 0.6, 2.0}) {
      EXPECT_NEAR(phi(n, z), phi_series(n, z), 2e-14 * std::abs(phi_series(n, z))) << n << " " << z;
    }
  }
  EXPECT_NEAR(phi(1, -1e8), 1e-8, 1e-20);
  EXPECT_THROW(phi(4, 0.1), DomainError);
}

TEST(Step, LinearExactness) {
  const SpectralGrid g(10.0, 64);
  for (int k : {1, 2, 5}) {
    const double q = g.wavenumber(k);
    const Field u = Field::sample(g, [&](double x) { return std::sin(q * x); });
    EtdRk4 st(g, 0.0, 0.01);
    st.set_linear_only(true);
    const Field v = st.step(u);
    EXPECT_LT(l2_norm(v - u * std::exp(linear_symbol(q) * 0.01)), 1e-12);
  }
}

TEST(Step, RejectsBadStep) {
  const SpectralGrid g(10.0, 32);
  EXPECT_THROW(EtdRk4(g, 0.0, 0.0), DomainError);
  EXPECT_THROW(evolve(Field::sample(g, [](double) { return 1.0; }), 0.0, 1.0, 0.1), DomainError);
}

TEST(Step, FourthOrderOnSmoothData) {
  const SpectralGrid g(10.0, 64);
  const Field u0 = Field::sample(g, [&](double x) { return 0.5 * std::cos(g.wavenumber(1) * x) + 0.2 * std::sin(g.wavenumber(2) * x); });
  const double T = 0.1;
  const auto order = [&](Scheme s, int n) {
    const double e1 = l2_norm(run(u0, 0.1, T, T / n, s) - run(u0, 0.1, T, T / (16 * n), s));
    const double e2 = l2_norm(run(u0, 0.1, T, T / (2 * n), s) - run(u0, 0.1, T, T / (32 * n), s));
    return std::log2(e1 / e2);
  };
  EXPECT_GT(order(Scheme::HochbruckOstermann, 80), 3.8);
  // The four-stage scheme loses order on the stiff modes.
  const double cm = order(Scheme::CoxMatthews, 80);
  EXPECT_GT(cm, 2.3);
  EXPECT_LT(cm, 3.5);
}

TEST(Evolve, SemigroupProperty) {
  const SpectralGrid g(10.0, 64);
  const Field u0 = random_initial_state(g, 4);
  const Field a = run(u0, 0.1, 0.4, 1e-3);
  const Field b = run(run(u0, 0.1, 0.2, 1e-3), 0.1, 0.2, 1e-3);
  EXPECT_LT(l2_norm(a - b), 1e-8);
}

TEST(Evolve, MeanConservedAndRecordShape) {
  const SpectralGrid g(10.0, 64);
  EvolveOptions o;
  o.stride = 50;
  const auto rec = evolve(random_initial_state(g, 1), 0.2, 2.0, 2e-3, o);
  EXPECT_LT(rec.mean_drift, 1e-11);
  EXPECT_EQ(rec.times.size(), 21u);
  for (std::size_t i = 1; i < rec.times.size(); ++i) EXPECT_GT(rec.times[i], rec.times[i - 1]);
  EXPECT_EQ(rec.snapshots.size(), 2u);
  EXPECT_NEAR(rec.times.back(), 2.0, 1e-12);
  EXPECT_GT(rec.max_h1(), 0.0);
}

TEST(Evolve, GradientFlowDissipatesF) {
  const SpectralGrid g(10.0, 128);
  EvolveOptions o;
  o.stride = 10;
  const auto rec = evolve(random_initial_state(g, 9), 0.0, 20.0, 1e-2, o);
  for (std::size_t i = 1; i < rec.F_values.size(); ++i) EXPECT_LE(rec.F_values[i], rec.F_values[i - 1] + 1e-10);
}

TEST(Evolve, DecaysToZeroBelowThreshold) {
  const SpectralGrid g(5.0, 64);
  const auto rec = evolve(random_initial_state(g, 3, 0.3), 0.0, 60.0, 1e-2);
  EXPECT_LT(max_abs(rec.final_state()), 1e-8);
}

TEST(Evolve, EquilibriumIsFixed) {
  const auto fams = enumerate_families(10.0, 128);
  const Field& u = fams.profiles.at(1).field;
  const auto rec = evolve(u, 0.0, 10.0, 1e-2);
  EXPECT_LT(l2_norm(rec.final_state() - u), 1e-9);

  std::vector<FamilyRef> refs;
  for (const auto& p : fams.profiles) refs.push_back({p.family_id, p.field});
  const auto v = classify_omega(rec, refs);
  EXPECT_EQ(v.status, OmegaStatus::ConvergedToFamily);
  EXPECT_EQ(v.family_id, 1);
  EXPECT_LT(v.distance, 1e-9);
}

TEST(Evolve, BlowUpReportsTime) {
  const SpectralGrid g(10.0, 32);
  const Field big = Field::sample(g, [&](double x) { return 50.0 * std::sin(g.wavenumber(3) * x); });
  try {
    evolve(big, 0.0, 1.0, 0.5);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_FALSE(e.partial().times.empty());
  }
}

TEST(Random, SeededAndNormalized) {
  const SpectralGrid g(10.0, 64);
  const Field a = random_initial_state(g, 5), b = random_initial_state(g, 5), c = random_initial_state(g, 6);
  EXPECT_EQ(l2_norm(a - b), 0.0);
  EXPECT_GT(l2_norm(a - c), 0.0);
  EXPECT_NEAR(l2_norm(a) / std::sqrt(10.0), 0.5, 1e-12);
  EXPECT_NEAR(a.mean(), 0.0, 1e-16);
  for (int k = 64 / 4 + 1; k < g.modes(); ++k) EXPECT_EQ(std::abs(a.coefficient(k)), 0.0);
}

TEST(Omega, EmptyFamiliesRejected) {
  const SpectralGrid g(10.0, 32);
  const auto rec = evolve(random_initial_state(g, 1), 0.0, 0.1, 1e-2);
  EXPECT_THROW(classify_omega(rec, {}), DomainError);
}

TEST(Omega, MovingTrajectoryIsNotConverged) {
  const SpectralGrid g(10.0, 64);
  EvolveOptions o;
  o.stride = 5;
  const auto rec = evolve(random_initial_state(g, 2), 0.0, 0.5, 1e-2, o);
  const auto v = classify_omega(rec, {{0, Field::zero(g)}});
  EXPECT_EQ(v.status, OmegaStatus::NonStationary);
}

TEST(RunDirectory, Layout) {
  const SpectralGrid g(10.0, 32);
  EvolveOptions o;
  o.stride = 10;
  o.snapshot_stride = 2;
  const auto rec = evolve(random_initial_state(g, 1), 0.0, 1.0, 1e-2, o);
  const auto dir = std::filesystem::temp_directory_path() / "cchlab_run_test";
  std::filesystem::remove_all(dir);
  write_run_directory(dir, rec, {10.0, 32, 0.0, 1e-2, 1.0, 1, {}});
  const auto meta = nlohmann::json::parse(read_text_file(dir / "meta.json"));
  EXPECT_EQ(meta["N"], 32);
  EXPECT_EQ(meta["seed"], 1);
  const auto csv = read_text_file(dir / "energies.csv");
  EXPECT_EQ(csv.rfind("t,F,E1,velocity,mean\n", 0), 0u);
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "snapshots")) {
    read_profile_csv(e.path());
    ++n;
  }
  EXPECT_EQ(n, static_cast<int>(rec.snapshots.size()));
  std::filesystem::remove_all(dir);
}
