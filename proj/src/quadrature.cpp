#include "dmifilm/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "dmifilm/error.hpp"

namespace dmifilm {

const std::array<TriQuadPoint, 7>& triangle_rule_7() {
  static const std::array<TriQuadPoint, 7> rule = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w1 = (155.0 - s15) / 1200.0;
    const double w2 = (155.0 + s15) / 1200.0;
    std::array<TriQuadPoint, 7> r;
    r[0] = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, 9.0 / 40};
    r[1] = {{b1, a1, a1}, w1};
    r[2] = {{a1, b1, a1}, w1};
    r[3] = {{a1, a1, b1}, w1};
    r[4] = {{b2, a2, a2}, w2};
    r[5] = {{a2, b2, a2}, w2};
    r[6] = {{a2, a2, b2}, w2};
    return r;
  }();
  return rule;
}

GaussRule gauss_legendre_01(int n) {
  if (n < 1 || n > 16)
    fail(ErrorKind::invalid_parameter, "gauss_legendre_01 supports n in [1, 16]");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // initial guess on (-1, 1), refined by Newton on P_n
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1 - x);  // mapped to (0, 1); roots come in +/- pairs
    rule.weights[i] = 0.5 * w;
    rule.nodes[n - 1 - i] = 0.5 * (1 + x);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace dmifilm
