#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dmifilm {

/// Conforming 2D triangle mesh with counter-clockwise elements.
///
/// Coordinates are dimensionless (lengths in units of the exchange length).
/// Instances are immutable after construction and safe to share across
/// threads.
struct TriMesh {
  Eigen::Matrix2Xd vertices;                     // column per vertex
  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles;  // ccw vertex indices
  std::vector<int> boundary_vertices;            // sorted, derived

  int num_vertices() const { return static_cast<int>(vertices.cols()); }
  int num_triangles() const { return static_cast<int>(triangles.cols()); }

  /// Signed area of triangle k (positive for valid meshes).
  double triangle_area(int k) const {
    const Eigen::Vector2d a = vertices.col(triangles(0, k));
    const Eigen::Vector2d b = vertices.col(triangles(1, k));
    const Eigen::Vector2d c = vertices.col(triangles(2, k));
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) -
                  (b.y() - a.y()) * (c.x() - a.x()));
  }
};

struct MeshStats {
  double h_max = 0;      // longest edge
  double h_min = 0;      // shortest edge
  double min_angle = 0;  // radians
  double total_area = 0;
  int n_vertices = 0;
  int n_triangles = 0;
};

/// Validates connectivity/orientation and derives the boundary vertex set.
/// Throws topology-error on inverted triangles, dangling vertices,
/// out-of-range indices, or non-conforming edges.
TriMesh make_mesh(Eigen::Matrix2Xd vertices,
                  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles);

/// Deterministic quasi-uniform disk mesh centered at the origin.
///
/// Concentric rings at spacing dr = R / ceil(R / (target_h * sqrt(3)/2)),
/// ring j carrying round(2*pi*r_j / dr) equally spaced nodes, stitched
/// ring-to-ring by an angular merge walk. The boundary is the inscribed
/// polygon of the outermost ring.
TriMesh generate_disk(double diameter, double target_h);

/// Parses the native "dmimesh 1" ASCII format. Parse failures carry the
/// offending line number; structural failures throw topology-error.
TriMesh parse_native(std::string_view text);

/// Serializes with 17-significant-digit coordinates so that
/// parse_native(write_native(m)) reproduces m exactly.
std::string write_native(const TriMesh& mesh);

/// Reads the Gmsh MSH v2.2 ASCII subset. Only 3-node triangles (element
/// type 2) are consumed; referenced nodes are renumbered densely in file
/// order. Throws empty-mesh when no triangles are present.
TriMesh parse_msh2(std::string_view text);

MeshStats mesh_stats(const TriMesh& mesh);

/// Boundary edge loops, each a closed ccw (outer) or cw (hole) vertex cycle.
std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh);

/// Signed shoelace area summed over all boundary loops.
double boundary_polygon_area(const TriMesh& mesh);

}  // namespace dmifilm
