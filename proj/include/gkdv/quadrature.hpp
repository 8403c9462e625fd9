#pragma once

#include <vector>

namespace gkdv {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule; cached per n, safe to call concurrently.
const GaussLegendre& gauss_legendre(int n);

/// Integrates `fn` over [a, b] with the n-point rule.
template <class Fn>
double integrate(Fn&& fn, double a, double b, int n) {
  const GaussLegendre& gl = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) acc += gl.weights[i] * fn(mid + half * gl.nodes[i]);
  return acc * half;
}

}  // namespace gkdv
