// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mclink/errors.hpp"

namespace mclink {

// Gauss-Legendre nodes and weights on [-1, 1]; weights sum to 2.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes are the roots of P_n found by Newton iteration from the Chebyshev
// initial guess; accurate to machine precision for any practical n.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.assign(size_t(n), 0.0);
  rule.weights.assign(size_t(n), 0.0);
  int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (double(i) + 0.75) / (double(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
        p0 = p1;
        p1 = p2;
      }
      dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // One final recurrence pass so dp matches the converged x.
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
          p0 = p1;
          p1 = p2;
        }
        dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[size_t(i)] = -x;
    rule.weights[size_t(i)] = w;
    rule.nodes[size_t(n - 1 - i)] = x;
    rule.weights[size_t(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[size_t(n / 2)] = 0.0;
  return rule;
}

// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
double integrate(F&& f, double a, double b, int n = 64) {
  if (!(b > a)) throw ConfigError("integrate: bounds must satisfy a < b");
  auto rule = gauss_legendre(n);
  double mid = 0.5 * (a + b), halfw = 0.5 * (b - a);
  double s = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(mid + halfw * rule.nodes[i]);
  return s * halfw;
}

}  // namespace mclink
