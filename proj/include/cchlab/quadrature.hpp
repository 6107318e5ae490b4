#pragma once

#include <span>

namespace cch {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order and
/// cached. Safe to call concurrently.
template <class Real>
struct GaussLegendreRule {
  std::span<const Real> nodes;
  std::span<const Real> weights;
};

template <class Real>
GaussLegendreRule<Real> gauss_legendre(int order);

extern template GaussLegendreRule<double> gauss_legendre<double>(int);
extern template GaussLegendreRule<long double> gauss_legendre<long double>(int);

/// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
template <class Real, class F>
Real integrate_gauss(F&& f, Real a, Real b, int order) {
  const auto rule = gauss_legendre<Real>(order);
  const Real half = (b - a) / 2;
  const Real mid = (a + b) / 2;
  Real sum = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

}  // namespace cch
