#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace dmifilm {

/// Degree-5 7-point triangle rule in barycentric coordinates; weights sum
/// to 1 and scale with the triangle area.
struct TriQuadPoint {
  Eigen::Vector3d bary;
  double weight;
};

const std::array<TriQuadPoint, 7>& triangle_rule_7();

/// Gauss-Legendre nodes/weights on (0, 1), n in [1, 16]. Computed by
/// Newton iteration on the Legendre polynomial; deterministic.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre_01(int n);

}  // namespace dmifilm
