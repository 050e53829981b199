#pragma once

#include <vector>

namespace gapmm {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

// n-point rule, exact for polynomials of degree 2n-1.
GaussRule gauss_legendre(int n);

// Integrate f over [a, b] with a mapped rule.
template <class F>
double integrate(const GaussRule& rule, double a, double b, F&& f) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

}  // namespace gapmm
