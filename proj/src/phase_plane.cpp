#include "cchlab/phase_plane.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>

#include "cchlab/continuation.hpp"
#include "cchlab/errors.hpp"
#include "cchlab/quadrature.hpp"

namespace cch {

namespace {

constexpr int kMinOrder = 16;
constexpr int kMaxOrder = 8192;
const long double kTwoSqrt2 = 2.0L * std::sqrt(2.0L);

struct Orbit {
  long double u1, um, uM, u2;

  long double u_at(long double t) const {
    const long double s = std::sin(t);
    const long double co = std::cos(t);
    return um * co * co + uM * s * s;
  }

  // 2 sqrt(2) / sqrt(Q(u(t))): dx/dt along the rising half-orbit.
  long double speed(long double t) const {
    const long double s = std::sin(t);
    const long double co = std::cos(t);
    const long double d = uM - um;
    // u - u1 and u2 - u written without cancellation near the endpoints.
    const long double a = (um - u1) + d * s * s;
    const long double b = (u2 - uM) + d * co * co;
    return kTwoSqrt2 / std::sqrt(a * b);
  }
};

Orbit orbit_of(const RootQuartet& r) { return {r.u1(), r.um(), r.uM(), r.u2()}; }

std::pair<double, double> apply_rule(const Orbit& o, int order) {
  const auto rule = gauss_legendre<double>(order);
  const double half = std::numbers::pi / 4.0;
  double s1 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = half * (1.0 + rule.nodes[i]);
    const double st = std::sin(t);
    const double ct = std::cos(t);
    const double d = static_cast<double>(o.uM - o.um);
    const double a = static_cast<double>(o.um - o.u1) + d * st * st;
    const double b = static_cast<double>(o.u2 - o.uM) + d * ct * ct;
    const double f = rule.weights[i] / std::sqrt(a * b);
    s1 += f;
    s2 += f * (static_cast<double>(o.um) * ct * ct + static_cast<double>(o.uM) * st * st);
  }
  const double scale = 2.0 * std::numbers::sqrt2 * half;
  return {s1 * scale, s2 * scale};
}

std::optional<std::pair<double, double>> try_g(const PhaseParams& c) {
  const auto roots = quartic_roots(c);
  if (classify_admissible(roots) != Admissibility::Admissible) return std::nullopt;
  const auto q = quad_g(c);
  return std::pair{q.g1, q.g2};
}

}  // namespace

QuadratureResult quad_g(const PhaseParams& c, double tol) {
  const auto roots = quartic_roots(c);
  if (classify_admissible(roots) != Admissibility::Admissible) {
    throw DomainError("quad_g: parameters are not admissible");
  }
  const Orbit o = orbit_of(roots);
  QuadratureResult out;
  auto prev = apply_rule(o, kMinOrder);
  for (int order = 2 * kMinOrder; order <= kMaxOrder; order *= 2) {
    const auto cur = apply_rule(o, order);
    const double err = std::max(std::abs(cur.first - prev.first), std::abs(cur.second - prev.second));
    out = {cur.first, cur.second, err, false, order};
    if (err <= tol * std::abs(cur.first)) return out;
    prev = cur;
  }
  out.warning = true;
  return out;
}

double PhaseScan::min_g1() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g1.size(); ++i) {
    if (valid[i]) m = std::min(m, g1[i]);
  }
  return m;
}

PhaseParams PhaseScan::params(int i1, int i2) const { return {s[i1] * boundary_r(c2[i2]), c2[i2]}; }

PhaseScan scan_phase_region(const ScanOptions& options) {
  if (options.n1 < 2 || options.n1 % 2 != 0 || options.n2 < 1) {
    throw DomainError("scan_phase_region: n1 must be even and positive, n2 positive");
  }
  if (!(options.c2_min < options.c2_max) || options.c2_min < -0.25 || options.c2_max > 0.0) {
    throw DomainError("scan_phase_region: c2 range must lie in [-1/4, 0]");
  }
  PhaseScan scan;
  scan.options = options;
  const int n1 = options.n1;
  const int n2 = options.n2;
  scan.s.resize(n1);
  scan.c2.resize(n2);
  for (int i = 0; i < n1; ++i) scan.s[i] = -1.0 + (2.0 * i + 1.0) / n1;
  for (int j = 0; j < n2; ++j) {
    scan.c2[j] = options.c2_min + (options.c2_max - options.c2_min) * (j + 0.5) / n2;
  }
  scan.g1.assign(static_cast<std::size_t>(n1) * n2, 0.0);
  scan.g2.assign(scan.g1.size(), 0.0);
  scan.valid.assign(scan.g1.size(), 0);

  auto work = [&](int row_begin, int stride) {
    for (int j = row_begin; j < n2; j += stride) {
      const double r = boundary_r(scan.c2[j]);
      for (int i = 0; i < n1; ++i) {
        const std::size_t idx = static_cast<std::size_t>(j) * n1 + i;
        try {
          const auto q = quad_g({scan.s[i] * r, scan.c2[j]});
          scan.g1[idx] = q.g1;
          scan.g2[idx] = q.g2;
          scan.valid[idx] = !q.warning;
        } catch (const DomainError&) {
          scan.valid[idx] = 0;
        }
      }
    }
  };
  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, n2);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return scan;
}

namespace {

std::optional<SteadyParams> newton_polish(double length, PhaseParams c) {
  const double target = 0.5 * length;
  auto residual = [&](const PhaseParams& p) -> std::optional<std::array<double, 2>> {
    const auto g = try_g(p);
    if (!g) return std::nullopt;
    return std::array<double, 2>{g->first - target, g->second};
  };
  auto norm = [](const std::array<double, 2>& f) { return std::hypot(f[0], f[1]); };

  auto f = residual(c);
  if (!f) return std::nullopt;
  int iters = 0;
  int stalled = 0;
  for (; iters < 60; ++iters) {
    const double h1 = 1e-6 * std::max(std::abs(c.c1), 1e-2);
    const double h2 = 1e-6 * std::max(std::abs(c.c2), 1e-2);
    const auto f1p = residual({c.c1 + h1, c.c2});
    const auto f1m = residual({c.c1 - h1, c.c2});
    const auto f2p = residual({c.c1, c.c2 + h2});
    const auto f2m = residual({c.c1, c.c2 - h2});
    if (!f1p || !f1m || !f2p || !f2m) return std::nullopt;
    const double j11 = ((*f1p)[0] - (*f1m)[0]) / (2 * h1);
    const double j21 = ((*f1p)[1] - (*f1m)[1]) / (2 * h1);
    const double j12 = ((*f2p)[0] - (*f2m)[0]) / (2 * h2);
    const double j22 = ((*f2p)[1] - (*f2m)[1]) / (2 * h2);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const double d1 = -(j22 * (*f)[0] - j12 * (*f)[1]) / det;
    const double d2 = -(-j21 * (*f)[0] + j11 * (*f)[1]) / det;

    double lambda = 1.0;
    std::optional<std::array<double, 2>> fn;
    PhaseParams cn;
    for (int half = 0; half < 30; ++half, lambda *= 0.5) {
      cn = {c.c1 + lambda * d1, c.c2 + lambda * d2};
      fn = residual(cn);
      if (fn && norm(*fn) < norm(*f)) break;
      fn.reset();
    }
    if (!fn) break;
    const bool tiny = std::abs(lambda * d1) <= 1e-16 * std::max(1.0, std::abs(c.c1)) &&
                      std::abs(lambda * d2) <= 1e-16 * std::max(1.0, std::abs(c.c2));
    c = cn;
    if (norm(*fn) > 0.5 * norm(*f)) ++stalled;
    f = fn;
    if (tiny || stalled >= 3 || norm(*f) == 0.0) break;
  }
  if (std::abs(c.c1) < 1e-12) {
    c.c1 = 0.0;
    f = residual(c);
    if (!f) return std::nullopt;
    // On the axis g2 vanishes identically; finish with a secant solve in c2.
    for (int it = 0; it < 20 && (*f)[0] != 0.0; ++it) {
      const double h = 1e-7 * std::max(std::abs(c.c2), 1e-2);
      const auto fp = residual({0.0, c.c2 + h});
      if (!fp) break;
      const double slope = ((*fp)[0] - (*f)[0]) / h;
      const PhaseParams cn{0.0, c.c2 - (*f)[0] / slope};
      const auto fn = residual(cn);
      if (!fn || std::abs((*fn)[0]) >= std::abs((*f)[0])) break;
      c = cn;
      f = fn;
    }
  }
  if (std::abs((*f)[0]) >= 1e-9 * length || std::abs((*f)[1]) >= 1e-9) return std::nullopt;
  return SteadyParams{c, std::abs((*f)[0]), std::abs((*f)[1]), iters};
}

bool changes_sign(double a, double b, double c, double d) {
  const double lo = std::min({a, b, c, d});
  const double hi = std::max({a, b, c, d});
  return lo <= 0.0 && hi >= 0.0;
}

}  // namespace

std::vector<SteadyParams> find_steady_params(double length, const PhaseScan& scan) {
  if (!(length > 0.0)) throw DomainError("find_steady_params: L must be positive");
  const double target = 0.5 * length;
  const int n1 = scan.options.n1;
  const int n2 = scan.options.n2;
  std::vector<SteadyParams> found;
  auto at = [&](int i, int j) { return static_cast<std::size_t>(j) * n1 + i; };
  for (int j = 0; j + 1 < n2; ++j) {
    for (int i = 0; i + 1 < n1; ++i) {
      const std::size_t a = at(i, j), b = at(i + 1, j), c = at(i, j + 1), d = at(i + 1, j + 1);
      if (!scan.valid[a] || !scan.valid[b] || !scan.valid[c] || !scan.valid[d]) continue;
      if (!changes_sign(scan.g1[a] - target, scan.g1[b] - target, scan.g1[c] - target, scan.g1[d] - target)) {
        continue;
      }
      if (!changes_sign(scan.g2[a], scan.g2[b], scan.g2[c], scan.g2[d])) continue;
      const double s = 0.5 * (scan.s[i] + scan.s[i + 1]);
      const double c2 = 0.5 * (scan.c2[j] + scan.c2[j + 1]);
      const auto sol = newton_polish(length, {s * boundary_r(c2), c2});
      if (!sol) continue;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const SteadyParams& p) {
        return std::abs(p.c.c1 - sol->c.c1) < 1e-8 && std::abs(p.c.c2 - sol->c.c2) < 1e-8;
      });
      if (!duplicate) found.push_back(*sol);
    }
  }
  std::sort(found.begin(), found.end(), [](const SteadyParams& x, const SteadyParams& y) {
    return x.c.c2 != y.c.c2 ? x.c.c2 < y.c.c2 : x.c.c1 < y.c.c1;
  });
  return found;
}

std::vector<SteadyParams> find_steady_params(double length, const ScanOptions& options) {
  return find_steady_params(length, scan_phase_region(options));
}

Profile reconstruct_profile(const PhaseParams& c, double length, int points, int k, bool polish) {
  if (k < 1) throw DomainError("reconstruct_profile: k must be positive");
  const SpectralGrid grid(length, points);
  const auto roots = quartic_roots(c);
  if (classify_admissible(roots) != Admissibility::Admissible) {
    throw DomainError("reconstruct_profile: parameters are not admissible");
  }
  const auto q = quad_g(c, 1e-15);
  const long double period = static_cast<long double>(length) / k;
  const long double half = period / 2;
  if (std::abs(q.g1 - static_cast<double>(half)) > 1e-8 * length) {
    throw DomainError("reconstruct_profile: g1(c) does not match L / (2k)");
  }
  const Orbit o = orbit_of(roots);
  const int order = std::min(2 * q.order, kMaxOrder);
  const auto rule = gauss_legendre<long double>(order);
  auto x_of = [&](long double t) {
    long double sum = 0;
    const long double h = t / 2;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * o.speed(h * (1 + rule.nodes[i]));
    return sum * h;
  };
  const long double pi_half = std::numbers::pi_v<long double> / 2;
  const long double g1 = x_of(pi_half);

  std::vector<long double> values(points);
  for (int j = 0; j < points; ++j) {
    const long double x = static_cast<long double>(j) * length / points;
    long double y = x - std::floor(x / period) * period;
    if (y > half) y = period - y;
    const long double target = y / half * g1;
    long double t = pi_half * y / half;
    bool converged = false;
    for (int it = 0; it < 40; ++it) {
      const long double dt = (x_of(t) - target) / o.speed(t);
      t = std::clamp(t - dt, 0.0L, pi_half);
      if (std::abs(dt) <= 8 * std::numeric_limits<long double>::epsilon()) {
        converged = true;
        break;
      }
    }
    if (!converged) throw InternalError("reconstruct_profile: inversion of x(u) did not converge");
    values[j] = o.u_at(t);
  }
  const Field raw = Field::from_values(grid, std::span<const long double>(values));
  Profile p{raw.without_mean(), length, c, k, 0, raw.mean()};
  if (polish) {
    SteadySolveOptions opts;
    opts.pin = PinKind::Phase;
    p.field = solve_steady(p.field, 0.0, opts).u;
  }
  return p;
}

Profile trivial_profile(double length, int points) {
  return Profile{Field::zero(SpectralGrid(length, points)), length, kTrivialParams, 1, 0, 0.0};
}

double reflection_error(const Field& u) {
  const auto v = u.values();
  const int n = static_cast<int>(v.size());
  double err = 0.0;
  for (int j = 1; j < n; ++j) err = std::max(err, std::abs(v[j] - v[n - j]));
  return err;
}

FamilyList enumerate_families(double length, int points, const PhaseScan& scan) {
  if (!(length > 0.0)) throw DomainError("enumerate_families: L must be positive");
  FamilyList out;
  out.profiles.push_back(trivial_profile(length, points));
  out.min_g1 = scan.min_g1();
  const double two_pi = 2.0 * std::numbers::pi;
  const int nearest = static_cast<int>(std::lround(length / two_pi));
  if (nearest >= 1 && std::abs(length - nearest * two_pi) < kDegenerateTol) {
    out.degenerate = true;
    out.degenerate_k = nearest;
  }
  int next_id = 1;
  for (int k = 1; length / k > two_pi; ++k) {
    for (const auto& sol : find_steady_params(length / k, scan)) {
      Profile p = reconstruct_profile(sol.c, length, points, k);
      p.family_id = next_id++;
      out.profiles.push_back(std::move(p));
    }
  }
  return out;
}

FamilyList enumerate_families(double length, int points, const ScanOptions& options) {
  return enumerate_families(length, points, scan_phase_region(options));
}

}  // namespace cch
