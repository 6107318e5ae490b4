#include "cchlab/continuation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cchlab/errors.hpp"
#include "cchlab/linearization.hpp"
#include "fft.hpp"

namespace cch {

Field eval_G(double delta, const Field& u) { return rhs(u, delta); }

namespace {

Eigen::VectorXcd derivative_symbols(const SpectralGrid& g, const std::vector<int>& modes) {
  Eigen::VectorXcd d(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    d[i] = modes[i] == -g.nyquist() ? Complex(0.0) : Complex(0.0, g.wavenumber(modes[i]));
  }
  return d;
}

}  // namespace

SteadySolve solve_steady(const Field& guess, double delta, const SteadySolveOptions& options) {
  const auto& g = guess.grid();
  const auto modes = signed_modes(g);
  const int n = static_cast<int>(modes.size());
  const Eigen::VectorXcd dsym = derivative_symbols(g, modes);
  const double root_l = std::sqrt(g.length());

  Field u = guess.without_mean();
  Eigen::VectorXcd x = to_signed(u);
  const Eigen::VectorXcd x0 = x;
  const Eigen::VectorXcd phase_row = dsym.cwiseProduct(x0).conjugate();
  if (options.pin == PinKind::Point && std::abs(derivative(u, 1)(0.0)) < options.pin_tol) {
    throw DomainError("solve_steady: point pin is degenerate (|u_x(0)| too small); re-shift the guess");
  }
  if (options.pin == PinKind::Phase && phase_row.norm() == 0.0) {
    throw DomainError("solve_steady: phase pin needs a non-constant guess");
  }

  SteadySolve out{u, 0.0, 0.0, 0, {}, false};
  double c = 0.0;
  auto pin_value = [&](const Eigen::VectorXcd& v) {
    return options.pin == PinKind::Point ? v.sum() : phase_row.cwiseProduct(v - x0).sum();
  };
  Eigen::MatrixXcd border(n + 1, n + 1);
  double best = std::numeric_limits<double>::infinity();
  int stalls = 0;
  for (int it = 0; it <= options.max_iters; ++it) {
    const Eigen::VectorXcd ux = dsym.cwiseProduct(x);
    const Eigen::VectorXcd r = to_signed(eval_G(delta, u)) + c * ux;
    const double res = root_l * r.norm();
    out.residual = l2_norm(eval_G(delta, u));
    out.u = u;
    out.drift = c;
    out.iterations = it;
    if (res <= options.tol) {
      out.converged = true;
      return out;
    }
    if (res < 0.5 * best) {
      stalls = 0;
    } else if (++stalls >= 3) {
      break;
    }
    best = std::min(best, res);
    if (it == options.max_iters) break;

    const auto op = assemble(u, delta);
    border.topLeftCorner(n, n) = op.matrix;
    border.topLeftCorner(n, n).diagonal() += c * dsym;
    border.topRightCorner(n, 1) = ux;
    if (options.pin == PinKind::Point) {
      border.bottomLeftCorner(1, n).setOnes();
    } else {
      border.bottomLeftCorner(1, n) = phase_row.transpose();
    }
    border(n, n) = 0.0;
    Eigen::VectorXcd rhs_vec(n + 1);
    rhs_vec.head(n) = -r;
    rhs_vec[n] = -pin_value(x);
    const Eigen::VectorXcd step = border.partialPivLu().solve(rhs_vec);
    if (!step.allFinite()) throw ConvergenceError("solve_steady: singular bordered system");
    x += step.head(n);
    c += step[n].real();
    u = from_signed(g, x);
    x = to_signed(u);
    out.corrections.push_back(root_l * step.head(n).norm());
  }
  throw ConvergenceError(fmt::format("solve_steady: Newton did not reach tol {:.1e} at delta={} (residual {:.3e})",
                                     options.tol, delta, out.residual));
}

Field pin_at_zero(const Field& u) {
  const auto& g = u.grid();
  const auto v = u.values();
  const int n = g.points();
  const Field ux = derivative(u, 1);
  double best_x = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int j = 0; j < n; ++j) {
    const double a = v[j];
    const double b = v[(j + 1) % n];
    if (!(a < 0.0 && b >= 0.0)) continue;
    // Newton on the interpolant from the linear-interpolation guess.
    double x = g.x(j) + g.spacing() * a / (a - b);
    for (int it = 0; it < 50; ++it) {
      const double dx = u(x) / ux(x);
      x -= dx;
      if (std::abs(dx) < 1e-15 * g.length()) break;
    }
    x = x - std::floor(x / g.length()) * g.length();
    const double dist = std::min(x, g.length() - x);
    if (dist < best_dist) {
      best_dist = dist;
      best_x = x;
      found = true;
    }
  }
  if (!found || std::abs(ux(best_x)) < 1e-8) throw DomainError("pin_at_zero: field has no simple upward zero");
  return shift(u, -best_x);
}

std::vector<ContinuedFamily> continue_path(const ContinuedFamily& start, double delta_target, int steps,
                                           const ContinuationOptions& options) {
  if (steps < 1) throw DomainError("continue_path: steps must be positive");
  std::vector<ContinuedFamily> path;
  if (max_abs(start.representative) == 0.0) {
    for (int i = 1; i <= steps; ++i) {
      ContinuedFamily f = start;
      f.delta = start.delta + (delta_target - start.delta) * i / steps;
      f.residual = 0.0;
      f.newton_iters = 0;
      path.push_back(f);
    }
    return path;
  }
  const double h = (delta_target - start.delta) / steps;
  Field prev = start.representative;
  Field prev2 = start.representative;
  int slow = 0;
  for (int i = 1; i <= steps; ++i) {
    const double delta = i == steps ? delta_target : start.delta + h * i;
    const Field guess = i == 1 ? prev : prev * 2.0 - prev2;
    SteadySolve sol{guess, 0.0, 0.0, 0, {}, false};
    try {
      sol = solve_steady(guess, delta, options.newton);
    } catch (const ConvergenceError& e) {
      const double reached = i == 1 ? start.delta : start.delta + h * (i - 1);
      throw ConvergenceError(fmt::format("continuation failed beyond delta={}: {}", reached, e.what()));
    }
    slow = sol.iterations > options.slow_iters ? slow + 1 : 0;
    if (slow >= 2) {
      throw ConvergenceError(
          fmt::format("continuation stopped at delta={}: Newton needed more than {} iterations twice in a row",
                      delta, options.slow_iters));
    }
    ContinuedFamily f = start;
    f.delta = delta;
    f.representative = sol.u;
    f.residual = sol.residual;
    f.newton_iters = sol.iterations;
    f.drift = sol.drift;
    path.push_back(f);
    prev2 = prev;
    prev = sol.u;
  }
  return path;
}

ContinuedFamily continue_to(double delta_target, const Profile& u0, int steps, const ContinuationOptions& options) {
  ContinuedFamily start{0.0, u0.field, u0.family_id, 0.0, 0, 0.0, u0.c, u0.k};
  if (max_abs(u0.field) == 0.0) {
    start.delta = delta_target;
    return start;
  }
  const auto polished = solve_steady(pin_at_zero(u0.field), 0.0, options.newton);
  start.representative = polished.u;
  start.residual = polished.residual;
  start.newton_iters = polished.iterations;
  start.drift = polished.drift;
  if (delta_target == 0.0) return start;
  return continue_path(start, delta_target, steps, options).back();
}

namespace {

struct Correlation {
  SpectralGrid grid;
  std::vector<Complex> a;  ///< (1+q^2)^order u_k conj(v_k), weighted per mode

  // C(s) = sum_k w_k Re(conj(uk) vk exp(-i q_k s)) and its first two derivatives.
  std::array<double, 3> eval(double s) const {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    const int nyq = grid.nyquist();
    for (int k = 0; k <= nyq; ++k) {
      const double q = grid.wavenumber(k);
      if (k == nyq) {
        const double base = a[k].real();
        out[0] += base * std::cos(q * s);
        out[1] -= base * q * std::sin(q * s);
        out[2] -= base * q * q * std::cos(q * s);
        continue;
      }
      const Complex z = std::conj(a[k]) * std::polar(1.0, -q * s);
      out[0] += z.real();
      out[1] += q * z.imag();
      out[2] -= q * q * z.real();
    }
    return out;
  }
};

double distance_at(const Field& u, const Field& v, int order, double s) {
  const auto& g = u.grid();
  const int nyq = g.nyquist();
  long double sum = 0;
  for (int k = 0; k <= nyq; ++k) {
    const double q = g.wavenumber(k);
    const double weight = (k == 0 || k == nyq ? 1.0 : 2.0) * std::pow(1.0 + q * q, order);
    Complex d;
    if (k == nyq) {
      d = u.coefficient(k) - v.coefficient(k) * std::cos(q * s);
    } else {
      d = u.coefficient(k) - v.coefficient(k) * std::polar(1.0, -q * s);
    }
    sum += weight * std::norm(d);
  }
  return std::sqrt(static_cast<double>(sum) * g.length());
}

}  // namespace

ShiftDistance shift_distance(const Field& u, const Field& v, int order) {
  require_same_grid(u, v, "shift_distance");
  const auto& g = u.grid();
  const int n = g.points();
  const int nyq = g.nyquist();
  Correlation corr{g, std::vector<Complex>(nyq + 1)};
  std::vector<std::complex<double>> spec(nyq + 1);
  for (int k = 0; k <= nyq; ++k) {
    const double q = g.wavenumber(k);
    const double sob = std::pow(1.0 + q * q, order);
    const double weight = (k == 0 || k == nyq) ? 1.0 : 2.0;
    corr.a[k] = weight * sob * u.coefficient(k) * std::conj(v.coefficient(k));
    spec[k] = sob * u.coefficient(k) * std::conj(v.coefficient(k));
  }
  // C(s_j) on the grid shifts s_j = j L / N.
  std::vector<double> coarse(n);
  detail::real_transform<double>(n).inverse(spec.data(), coarse.data());

  std::vector<int> candidates;
  for (int j = 0; j < n; ++j) {
    const double c = coarse[j];
    if (c >= coarse[(j + n - 1) % n] && c >= coarse[(j + 1) % n]) candidates.push_back(j);
  }
  std::sort(candidates.begin(), candidates.end(), [&](int x, int y) { return coarse[x] > coarse[y]; });
  if (candidates.size() > 3) candidates.resize(3);
  if (candidates.empty()) candidates.push_back(0);

  const double h = g.spacing();
  ShiftDistance best{std::numeric_limits<double>::infinity(), 0.0};
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int j : candidates) {
    double a = g.x(j) - h;
    double b = g.x(j) + h;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = corr.eval(x1)[0];
    double f2 = corr.eval(x2)[0];
    for (int it = 0; it < 40; ++it) {
      if (f1 > f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = corr.eval(x1)[0];
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = corr.eval(x2)[0];
      }
    }
    double s = 0.5 * (a + b);
    for (int it = 0; it < 5; ++it) {
      const auto c = corr.eval(s);
      if (c[2] >= 0.0) break;
      const double ds = c[1] / c[2];
      if (std::abs(ds) > h) break;
      s -= ds;
      if (std::abs(ds) < 1e-16 * g.length()) break;
    }
    const double d = distance_at(u, v, order, s);
    if (d < best.distance) best = {d, s - std::floor(s / g.length()) * g.length()};
  }
  return best;
}

double hausdorff_families(const Field& a, const Field& b, int n_samples, int order) {
  require_same_grid(a, b, "hausdorff_families");
  if (n_samples < 1) throw DomainError("hausdorff_families: n_samples must be positive");
  const double length = a.grid().length();
  double ab = 0.0;
  double ba = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double s = length * i / n_samples;
    ab = std::max(ab, shift_distance(shift(a, s), b, order).distance);
    ba = std::max(ba, shift_distance(shift(b, s), a, order).distance);
  }
  const double h = std::max(ab, ba);
  const double direct = shift_distance(a, b, order).distance;
  if (std::abs(h - direct) > 1e-8 * (1.0 + direct)) {
    throw InternalError(fmt::format("hausdorff_families: sampled value {} disagrees with shift_distance {}", h, direct));
  }
  return h;
}

double hausdorff_families(const ContinuedFamily& a, const ContinuedFamily& b, int n_samples, int order) {
  return hausdorff_families(a.representative, b.representative, n_samples, order);
}

std::string sidecar_json(const ContinuedFamily& fam) {
  nlohmann::json j;
  j["delta"] = fam.delta;
  j["residual"] = fam.residual;
  j["newton_iters"] = fam.newton_iters;
  j["source_family"] = fam.source_family;
  j["drift"] = fam.drift;
  return j.dump(2);
}

Profile as_profile(const ContinuedFamily& fam) {
  return Profile{fam.representative, fam.representative.grid().length(), fam.source_c, fam.source_k,
                 fam.source_family, 0.0};
}

}  // namespace cch
