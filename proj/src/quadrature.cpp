#include "cchlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "cchlab/errors.hpp"

namespace cch {

namespace {

template <class Real>
struct Rule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

template <class Real>
std::unique_ptr<Rule<Real>> build_rule(int n) {
  auto rule = std::make_unique<Rule<Real>>();
  rule->nodes.resize(n);
  rule->weights.resize(n);
  const Real pi = std::numbers::pi_v<Real>;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    Real x = std::cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1;
      Real p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 4 * std::numeric_limits<Real>::epsilon()) {
        // One more evaluation so the weight uses the converged node.
        p0 = 1;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        break;
      }
    }
    const Real w = 2 / ((1 - x * x) * dp * dp);
    rule->nodes[i] = -x;
    rule->nodes[n - 1 - i] = x;
    rule->weights[i] = w;
    rule->weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule->nodes[n / 2] = 0;
  return rule;
}

}  // namespace

template <class Real>
GaussLegendreRule<Real> gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule<Real>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = build_rule<Real>(order);
  return {slot->nodes, slot->weights};
}

template GaussLegendreRule<double> gauss_legendre<double>(int);
template GaussLegendreRule<long double> gauss_legendre<long double>(int);

}  // namespace cch
