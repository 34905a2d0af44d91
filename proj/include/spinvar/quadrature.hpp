// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "spinvar/errors.hpp"

namespace spinvar {

/// Gauss-Legendre rule: nodes and weights on [-1, 1]. Exact for polynomials
/// of degree <= 2n-1.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Computes the n-point rule by Newton iteration on P_n, seeded with the
/// Chebyshev-like estimate cos(pi (k + 3/4) / (n + 1/2)).
inline GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw Error("gauss_legendre: need at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int k = 0; k < half; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence: (l+1) P_{l+1} = (2l+1) x P_l - l P_{l-1}
      double p0 = 1.0, p1 = x;
      for (int l = 1; l < n; ++l) {
        const double p2 = ((2.0 * l + 1.0) * x * p1 - l * p0) / (l + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    rule.nodes[k] = -x;  // ascending order
    rule.nodes[n - 1 - k] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[k] = w;
    rule.weights[n - 1 - k] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// integral of g over [0, 1] with the given rule.
inline double integrate01(const GaussLegendreRule& rule, const std::function<double(double)>& g) {
  double acc = 0.0;
  for (int k = 0; k < rule.size(); ++k) {
    const double u = 0.5 * (rule.nodes[k] + 1.0);
    acc += 0.5 * rule.weights[k] * g(u);
  }
  return acc;
}

}  // namespace spinvar
