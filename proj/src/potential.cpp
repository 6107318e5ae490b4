#include "cchlab/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "cchlab/errors.hpp"

namespace cch {

namespace {

constexpr double kMergeTol = 1e-7;

// k-th derivative of P_c (k = 0..4).
double pc_derivative(const PhaseParams& c, double u, int k) {
  switch (k) {
    case 0: {
      const double s = u * u - 1.0;
      return 0.5 * s * s + 2.0 * c.c1 * u + 2.0 * c.c2;
    }
    case 1:
      return 2.0 * (u * u * u - u + c.c1);
    case 2:
      return 6.0 * u * u - 2.0;
    case 3:
      return 12.0 * u;
    case 4:
      return 12.0;
    default:
      return 0.0;
  }
}

double newton_polish(const PhaseParams& c, double u, int order, int steps) {
  for (int i = 0; i < steps; ++i) {
    const double f = pc_derivative(c, u, order);
    const double df = pc_derivative(c, u, order + 1);
    if (df == 0.0 || !std::isfinite(df)) break;
    const double next = u - f / df;
    // A Newton step that leaves the merge radius is not a polish step.
    if (!std::isfinite(next) || std::abs(next - u) > kMergeTol * (1.0 + std::abs(u)) * 10.0) {
      break;
    }
    u = next;
  }
  return u;
}

}  // namespace

std::string to_string(Admissibility a) {
  switch (a) {
    case Admissibility::Admissible:
      return "Admissible";
    case Admissibility::Boundary:
      return "Boundary";
    case Admissibility::Inadmissible:
      return "Inadmissible";
  }
  return "Unknown";
}

int RootQuartet::real_count() const {
  int n = 0;
  for (int m : multiplicity) n += m;
  return n;
}

bool RootQuartet::has_multiple_root() const {
  return std::any_of(multiplicity.begin(), multiplicity.end(), [](int m) { return m > 1; });
}

double eval_W(double v) {
  const double s = v * v - 1.0;
  return 0.25 * s * s;
}

double eval_W_prime(double v) { return v * v * v - v; }

double eval_W_second(double v) { return 3.0 * v * v - 1.0; }

double eval_Pc(const PhaseParams& c, double u) { return pc_derivative(c, u, 0); }

double eval_Pc_prime(const PhaseParams& c, double u) { return pc_derivative(c, u, 1); }

RootQuartet quartic_roots(const PhaseParams& c) {
  // 2 P_c(u) = u^4 - 2u^2 + 4 c1 u + (1 + 4 c2), monic.
  const std::array<double, 4> a{1.0 + 4.0 * c.c2, 4.0 * c.c1, -2.0, 0.0};
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  for (int i = 1; i < 4; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) companion(i, 3) = -a[i];

  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);
  std::array<std::complex<double>, 4> z;
  for (int i = 0; i < 4; ++i) z[i] = solver.eigenvalues()[i];
  std::sort(z.begin(), z.end(), [](auto x, auto y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });

  auto near_real = [](std::complex<double> w) {
    return std::abs(w.imag()) < kMergeTol * (1.0 + std::abs(w.real()));
  };

  RootQuartet out;
  std::array<bool, 4> used{};
  for (int i = 0; i < 4; ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (!near_real(z[i])) {
      ++out.n_complex;
      continue;
    }
    int count = 1;
    double sum = z[i].real();
    for (int j = i + 1; j < 4; ++j) {
      if (used[j] || !near_real(z[j])) continue;
      if (std::abs(z[j] - z[i]) < kMergeTol * (1.0 + std::abs(z[i]))) {
        used[j] = true;
        ++count;
        sum += z[j].real();
      }
    }
    if (count == 1 && z[i].imag() != 0.0 && std::abs(z[i].imag()) > 1e-14 * (1.0 + std::abs(z[i].real()))) {
      // Isolated member of a conjugate pair with a small imaginary part.
      ++out.n_complex;
      continue;
    }
    const double root = newton_polish(c, sum / count, count - 1, 2);
    out.roots.push_back(root);
    out.multiplicity.push_back(count);
  }

  // Keep roots/multiplicity paired while sorting.
  std::vector<std::size_t> order(out.roots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return out.roots[x] < out.roots[y]; });
  RootQuartet sorted;
  sorted.n_complex = out.n_complex;
  for (auto i : order) {
    sorted.roots.push_back(out.roots[i]);
    sorted.multiplicity.push_back(out.multiplicity[i]);
  }
  sorted.admissible = sorted.roots.size() == 4 && !sorted.has_multiple_root() && sorted.n_complex == 0 &&
                      sorted.roots[1] < 0.0 && sorted.roots[2] > 0.0;
  return sorted;
}

Admissibility classify_admissible(const RootQuartet& roots) {
  if (roots.admissible) return Admissibility::Admissible;
  if (roots.has_multiple_root()) return Admissibility::Boundary;
  return Admissibility::Inadmissible;
}

Admissibility classify_admissible(const PhaseParams& c) { return classify_admissible(quartic_roots(c)); }

double boundary_r(double c2) {
  if (!(c2 >= -0.25 && c2 <= 0.0)) {
    throw DomainError("boundary_r: c2 must lie in [-1/4, 0]");
  }
  // Double root u0 of P_(c1,c2) on the positive side, where uM and u2 merge.
  // Seeded from the exact values at c2 = -1/4 and continued in c2.
  double u = std::sqrt(2.0 / 3.0);
  double c1 = u / 3.0;
  if (c2 == -0.25) return c1;

  const int substeps = std::max(1, static_cast<int>(std::ceil((c2 + 0.25) / 0.01)));
  for (int s = 1; s <= substeps; ++s) {
    const double target = -0.25 + (c2 + 0.25) * s / substeps;
    const PhaseParams base{0.0, target};
    auto residual = [&](double uu, double cc) {
      const PhaseParams p{cc, target};
      return std::array<double, 2>{pc_derivative(p, uu, 0), pc_derivative(p, uu, 1)};
    };
    for (int it = 0; it < 60; ++it) {
      const auto f = residual(u, c1);
      const double fnorm = std::hypot(f[0], f[1]);
      if (fnorm < 1e-15) break;
      // J = [[P', 2u], [P'', 2]]
      const double j11 = pc_derivative({c1, target}, u, 1);
      const double j12 = 2.0 * u;
      const double j21 = pc_derivative(base, u, 2);
      const double j22 = 2.0;
      const double det = j11 * j22 - j12 * j21;
      if (det == 0.0) throw ConvergenceError("boundary_r: singular Jacobian");
      const double du = -(j22 * f[0] - j12 * f[1]) / det;
      const double dc = -(-j21 * f[0] + j11 * f[1]) / det;
      double lambda = 1.0;
      for (int k = 0; k < 30; ++k) {
        const auto trial = residual(u + lambda * du, c1 + lambda * dc);
        if (std::hypot(trial[0], trial[1]) < fnorm || lambda < 1e-6) break;
        lambda *= 0.5;
      }
      u += lambda * du;
      c1 += lambda * dc;
    }
  }
  return std::max(0.0, c1);
}

}  // namespace cch
