#pragma once

#include <span>
#include <vector>

namespace canon {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t order() const { return nodes.size(); }
};

/// Returns the n-point rule; rules are built once per order and cached.
const GaussLegendre& gauss_legendre(int n);

/// Integrates f over [a, b] with `panels` equal panels of an n-point rule.
template <class F>
auto integrate_panels(F&& f, double a, double b, int panels, int n) -> decltype(f(a)) {
  const GaussLegendre& rule = gauss_legendre(n);
  const double width = (b - a) / panels;
  decltype(f(a)) total{};
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width;
    const double mid = lo + half;
    for (std::size_t i = 0; i < rule.order(); ++i) {
      total += rule.weights[i] * half * f(mid + half * rule.nodes[i]);
    }
  }
  return total;
}

}  // namespace canon
