#include "cchlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cchlab/continuation.hpp"
#include "cchlab/errors.hpp"
#include "cchlab/profile_io.hpp"

namespace cch {

double phi(int n, double z) {
  if (n < 1 || n > 3) throw DomainError("phi: n must be 1, 2 or 3");
  if (std::abs(z) < 0.5) {
    // sum_m z^m / (m + n)!
    double term = 1.0;
    for (int j = 2; j <= n; ++j) term /= j;
    double sum = 0.0;
    for (int m = 0; m < 30; ++m) {
      sum += term;
      term *= z / (m + n + 1);
    }
    return sum;
  }
  const double em1 = std::expm1(z);
  switch (n) {
    case 1:
      return em1 / z;
    case 2:
      return (em1 - z) / (z * z);
    default:
      return (em1 - z - 0.5 * z * z) / (z * z * z);
  }
}

double default_dt(const SpectralGrid& grid) {
  const double h = grid.spacing();
  return 0.1 * h * h;
}

EtdRk4::EtdRk4(const SpectralGrid& grid, double delta, double dt, Precision precision, Scheme scheme)
    : grid_(grid), delta_(delta), dt_(dt), extended_(precision == Precision::Extended), scheme_(scheme) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("EtdRk4: dt must be positive");
  const int m = grid.modes();
  e_.resize(m);
  e2_.resize(m);
  q_.resize(m);
  f1_.resize(m);
  f2_.resize(m);
  f3_.resize(m);
  for (auto* v : {&a21_, &a31_, &a32_, &a41_, &a42_, &a51_, &a52_, &a54_}) v->resize(m);
  for (int k = 0; k < m; ++k) {
    const double lam = linear_symbol(grid.wavenumber(k));
    const double z = lam * dt;
    e_[k] = std::exp(z);
    e2_[k] = std::exp(0.5 * z);
    q_[k] = 0.5 * dt * phi(1, 0.5 * z);
    const double p1 = phi(1, z);
    const double p2 = phi(2, z);
    const double p3 = phi(3, z);
    f1_[k] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
    f2_[k] = dt * (2.0 * p2 - 4.0 * p3);
    f3_[k] = dt * (4.0 * p3 - p2);

    const double h1 = phi(1, 0.5 * z);
    const double h2 = phi(2, 0.5 * z);
    const double h3 = phi(3, 0.5 * z);
    a21_[k] = dt * 0.5 * h1;
    a31_[k] = dt * (0.5 * h1 - h2);
    a32_[k] = dt * h2;
    a41_[k] = dt * (p1 - 2.0 * p2);
    a42_[k] = dt * p2;
    const double a52 = 0.5 * h2 - p3 + 0.25 * p2 - 0.5 * h3;
    const double a54 = 0.25 * h2 - a52;
    a52_[k] = dt * a52;
    a54_[k] = dt * a54;
    a51_[k] = dt * (0.5 * h1 - 2.0 * a52 - a54);
  }
}

void EtdRk4::nonlinear(std::span<const Complex> c, std::span<Complex> out) const {
  if (linear_only_) {
    std::fill(out.begin(), out.end(), Complex(0.0));
  } else if (extended_) {
    detail::nonlinear_part<long double>(grid_, c, delta_, out);
  } else {
    detail::nonlinear_part<double>(grid_, c, delta_, out);
  }
}

void EtdRk4::advance(std::vector<Complex>& c) const {
  if (scheme_ == Scheme::CoxMatthews) {
    advance_cox_matthews(c);
  } else {
    advance_hochbruck_ostermann(c);
  }
  c[0] = 0.0;
  c[grid_.nyquist()].imag(0.0);
}

void EtdRk4::advance_hochbruck_ostermann(std::vector<Complex>& c) const {
  const int m = grid_.modes();
  thread_local std::vector<Complex> n1, n2, n3, n4, n5, s;
  for (auto* v : {&n1, &n2, &n3, &n4, &n5, &s}) v->resize(m);
  nonlinear(c, n1);
  for (int k = 0; k < m; ++k) s[k] = e2_[k] * c[k] + a21_[k] * n1[k];
  nonlinear(s, n2);
  for (int k = 0; k < m; ++k) s[k] = e2_[k] * c[k] + a31_[k] * n1[k] + a32_[k] * n2[k];
  nonlinear(s, n3);
  for (int k = 0; k < m; ++k) s[k] = e_[k] * c[k] + a41_[k] * n1[k] + a42_[k] * (n2[k] + n3[k]);
  nonlinear(s, n4);
  for (int k = 0; k < m; ++k) {
    s[k] = e2_[k] * c[k] + a51_[k] * n1[k] + a52_[k] * (n2[k] + n3[k]) + a54_[k] * n4[k];
  }
  nonlinear(s, n5);
  // b1 = f1, b4 = f3, b5 = 2 f2.
  for (int k = 0; k < m; ++k) c[k] = e_[k] * c[k] + f1_[k] * n1[k] + f3_[k] * n4[k] + 2.0 * f2_[k] * n5[k];
}

void EtdRk4::advance_cox_matthews(std::vector<Complex>& c) const {
  const int m = grid_.modes();
  thread_local std::vector<Complex> nu, na, nb, nc, a, b, cc;
  for (auto* v : {&nu, &na, &nb, &nc, &a, &b, &cc}) v->resize(m);
  nonlinear(c, nu);
  for (int k = 0; k < m; ++k) a[k] = e2_[k] * c[k] + q_[k] * nu[k];
  nonlinear(a, na);
  for (int k = 0; k < m; ++k) b[k] = e2_[k] * c[k] + q_[k] * na[k];
  nonlinear(b, nb);
  for (int k = 0; k < m; ++k) cc[k] = e2_[k] * a[k] + q_[k] * (2.0 * nb[k] - nu[k]);
  nonlinear(cc, nc);
  for (int k = 0; k < m; ++k) {
    c[k] = e_[k] * c[k] + f1_[k] * nu[k] + f2_[k] * (na[k] + nb[k]) + f3_[k] * nc[k];
  }
}

Field EtdRk4::step(const Field& u) const {
  std::vector<Complex> c(u.coefficients().begin(), u.coefficients().end());
  c[0] = 0.0;
  advance(c);
  return Field::from_coefficients(grid_, std::move(c));
}

Field step(const Field& u, double delta, double dt) {
  return EtdRk4(u.grid(), delta, dt, Precision::Extended).step(u);
}

Energies energies(const Field& u, double delta, double c0) {
  const double ux = l2_norm(derivative(u, 1));
  const double w = integral_W(u);
  const double inv = l2_norm(inverse_laplacian(u.without_mean()));
  const double c1 = delta * delta * c0;
  const double f = 0.5 * ux * ux + w;
  return {f, f + 2.0 * c1 * inv * inv};
}

double TrajectoryRecord::max_h1() const {
  return h1_norm.empty() ? 0.0 : *std::max_element(h1_norm.begin(), h1_norm.end());
}

namespace {

void record_state(TrajectoryRecord& rec, const Field& u, double t, double c0) {
  const auto e = energies(u, rec.delta, c0);
  long double sum = 0;
  for (double v : u.values()) sum += v;
  const double mean = static_cast<double>(sum / u.grid().points());
  rec.times.push_back(t);
  rec.F_values.push_back(e.F);
  rec.E1_values.push_back(e.E1);
  rec.velocity.push_back(l2_norm(rhs(u, rec.delta)));
  rec.mean.push_back(mean);
  rec.h1_norm.push_back(sobolev_norm(u, 1));
  rec.mean_drift = std::max(rec.mean_drift, std::abs(mean));
}

}  // namespace

TrajectoryRecord evolve(const Field& u0, double delta, double T, double dt, const EvolveOptions& options) {
  if (!(T > 0.0)) throw DomainError("evolve: T must be positive");
  if (options.stride < 1) throw DomainError("evolve: stride must be positive");
  if (!u0.is_zero_mean(1e-10)) throw DomainError("evolve: initial state must have zero mean");
  const auto& g = u0.grid();
  EtdRk4 stepper(g, delta, dt, options.precision, options.scheme);
  TrajectoryRecord rec;
  rec.grid = g;
  rec.delta = delta;
  rec.dt = dt;

  std::vector<Complex> c(u0.coefficients().begin(), u0.coefficients().end());
  c[0] = 0.0;
  Field u = Field::from_coefficients(g, c);
  record_state(rec, u, 0.0, options.c0);
  rec.snapshots.push_back(u);
  rec.snapshot_times.push_back(0.0);
  if (stepper.extended()) rec.extended_from = 0.0;

  const long long nsteps = static_cast<long long>(std::ceil(T / dt - 1e-9));
  long long records = 0;
  for (long long i = 1; i <= nsteps; ++i) {
    stepper.advance(c);
    const double t = static_cast<double>(i) * dt;
    for (const auto& z : c) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e8) {
        throw BlowUpError(fmt::format("evolve: blow-up at t={}", t), t, rec);
      }
    }
    if (i % options.stride != 0 && i != nsteps) continue;
    u = Field::from_coefficients(g, c);
    record_state(rec, u, t, options.c0);
    ++records;
    if (options.precision == Precision::Auto && !stepper.extended() &&
        rec.velocity.back() < options.switch_velocity) {
      stepper.set_extended(true);
      rec.extended_from = t;
    }
    if (i == nsteps || (options.snapshot_stride > 0 && records % options.snapshot_stride == 0)) {
      rec.snapshots.push_back(u);
      rec.snapshot_times.push_back(t);
    }
  }
  return rec;
}

Field random_initial_state(const SpectralGrid& grid, std::uint64_t seed, double rms, double decay) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> c(grid.modes());
  const int kmax = std::max(1, grid.points() / 4);
  for (int k = 1; k <= kmax; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    c[k] = Complex(re, im) * std::pow(static_cast<double>(k), -decay);
  }
  const Field raw = Field::from_coefficients(grid, std::move(c));
  const double current = l2_norm(raw) / std::sqrt(grid.length());
  return raw * (rms / current);
}

std::string to_string(OmegaStatus s) {
  switch (s) {
    case OmegaStatus::ConvergedToFamily:
      return "ConvergedToFamily";
    case OmegaStatus::Undecided:
      return "Undecided";
    case OmegaStatus::NonStationary:
      return "NonStationary";
  }
  return "Unknown";
}

OmegaVerdict classify_omega(const TrajectoryRecord& record, const std::vector<FamilyRef>& families,
                            const OmegaTolerances& tol) {
  if (families.empty()) throw DomainError("classify_omega: empty family list");
  if (record.snapshots.empty() || record.times.empty()) throw DomainError("classify_omega: empty record");
  const Field& last = record.final_state();
  OmegaVerdict v;
  v.final_time = record.times.back();
  v.final_velocity = record.velocity.back();
  v.distance = std::numeric_limits<double>::infinity();
  for (const auto& fam : families) {
    const auto d = shift_distance(last, fam.u, 2);
    if (d.distance < v.distance) {
      v.distance = d.distance;
      v.shift = d.best_shift;
      v.family_id = fam.id;
    }
  }
  if (v.distance < tol.distance && v.final_velocity < tol.velocity) {
    v.status = OmegaStatus::ConvergedToFamily;
    return v;
  }
  const double quarter = 0.75 * v.final_time;
  bool moving = true;
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    if (record.times[i] >= quarter && record.velocity[i] <= 10.0 * tol.velocity) moving = false;
  }
  v.status = moving ? OmegaStatus::NonStationary : OmegaStatus::Undecided;
  return v;
}

void write_run_directory(const std::filesystem::path& dir, const TrajectoryRecord& record, const RunMeta& meta,
                         const OmegaVerdict* verdict) {
  std::filesystem::create_directories(dir / "snapshots");
  nlohmann::json j;
  j["L"] = meta.length;
  j["N"] = meta.points;
  j["delta"] = meta.delta;
  j["dt"] = meta.dt;
  j["T"] = meta.T;
  j["seed"] = meta.seed;
  j["tolerances"] = {{"distance", meta.tol.distance}, {"velocity", meta.tol.velocity}};
  j["mean_drift"] = record.mean_drift;
  j["max_h1"] = record.max_h1();
  j["extended_from"] = record.extended_from;
  if (verdict != nullptr) {
    j["verdict"] = {{"status", to_string(verdict->status)},
                    {"family_id", verdict->family_id},
                    {"shift", verdict->shift},
                    {"distance", verdict->distance},
                    {"final_time", verdict->final_time},
                    {"final_velocity", verdict->final_velocity}};
  }
  write_text_file(dir / "meta.json", j.dump(2) + "\n");

  std::string csv = "t,F,E1,velocity,mean\n";
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", record.times[i], record.F_values[i],
                       record.E1_values[i], record.velocity[i], record.mean[i]);
  }
  write_text_file(dir / "energies.csv", csv);
  for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
    const auto name = fmt::format("snap_{:04d}_t{:.6f}.csv", i, record.snapshot_times[i]);
    write_profile_csv(dir / "snapshots" / name, field_profile(record.snapshots[i]));
  }
}

}  // namespace cch
