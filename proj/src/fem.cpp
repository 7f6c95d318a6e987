#include "dmifilm/fem.hpp"

#include <cmath>
#include <vector>

#include "dmifilm/error.hpp"

namespace dmifilm {

TriangleGeometry triangle_geometry(const TriMesh& mesh, int k) {
  const Eigen::Vector2d p0 = mesh.vertices.col(mesh.triangles(0, k));
  const Eigen::Vector2d p1 = mesh.vertices.col(mesh.triangles(1, k));
  const Eigen::Vector2d p2 = mesh.vertices.col(mesh.triangles(2, k));
  const double area2 = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                       (p1.y() - p0.y()) * (p2.x() - p0.x());
  TriangleGeometry geom;
  geom.area = 0.5 * area2;
  // grad lambda_a = rot90(p_{a+2} - p_{a+1}) / (2|K|), rot90(x,y) = (-y,x)
  const Eigen::Vector2d e0 = p2 - p1, e1 = p0 - p2, e2 = p1 - p0;
  geom.grad_lambda.col(0) = Eigen::Vector2d(-e0.y(), e0.x()) / area2;
  geom.grad_lambda.col(1) = Eigen::Vector2d(-e1.y(), e1.x()) / area2;
  geom.grad_lambda.col(2) = Eigen::Vector2d(-e2.y(), e2.x()) / area2;
  return geom;
}

namespace {

double degenerate_threshold(const TriMesh& mesh) {
  double h_max_sq = 0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d d = mesh.vertices.col(mesh.triangles((e + 1) % 3, k)) -
                                mesh.vertices.col(mesh.triangles(e, k));
      h_max_sq = std::max(h_max_sq, d.squaredNorm());
    }
  }
  return 1e-14 * h_max_sq;
}

}  // namespace

Eigen::VectorXd assemble_lumped_mass(const TriMesh& mesh) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double third = mesh.triangle_area(k) / 3;
    for (int e = 0; e < 3; ++e) w[mesh.triangles(e, k)] += third;
  }
  return w;
}

SparseMat assemble_stiffness(const TriMesh& mesh) {
  const double min_area = degenerate_threshold(mesh);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const TriangleGeometry geom = triangle_geometry(mesh, k);
    if (geom.area < min_area)
      fail(ErrorKind::assembly, "degenerate triangle " + std::to_string(k));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        triplets.emplace_back(mesh.triangles(a, k), mesh.triangles(b, k),
                              geom.area * geom.grad_lambda.col(a).dot(geom.grad_lambda.col(b)));
  }
  SparseMat stiffness(mesh.num_vertices(), mesh.num_vertices());
  stiffness.setFromTriplets(triplets.begin(), triplets.end());
  return stiffness;
}

SparseMat expand_to_vector3(const SparseMat& scalar_op, int nv) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(3 * scalar_op.nonZeros());
  for (int col = 0; col < scalar_op.outerSize(); ++col) {
    for (SparseMat::InnerIterator it(scalar_op, col); it; ++it) {
      for (int c = 0; c < 3; ++c)
        triplets.emplace_back(3 * static_cast<int>(it.row()) + c, 3 * col + c, it.value());
    }
  }
  SparseMat out(3 * nv, 3 * nv);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

SparseMat assemble_curl_form(const TriMesh& mesh) {
  const double min_area = degenerate_threshold(mesh);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(27 * mesh.num_triangles());
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const TriangleGeometry geom = triangle_geometry(mesh, k);
    if (geom.area < min_area)
      fail(ErrorKind::assembly, "degenerate triangle " + std::to_string(k));
    for (int a = 0; a < 3; ++a) {
      // curl_w contribution of nodal value v_a is g_a x v_a with
      // g_a = (grad lambda_a, 0); pairing with phi picks up |K|/3 per node
      const double g1 = geom.grad_lambda(0, a);
      const double g2 = geom.grad_lambda(1, a);
      // skew matrix of g = (g1,g2,0): g x v
      Eigen::Matrix3d cross;
      cross << 0, 0, g2,
               0, 0, -g1,
               -g2, g1, 0;
      cross *= geom.area / 3;
      for (int b = 0; b < 3; ++b) {
        const int row0 = 3 * mesh.triangles(b, k);
        const int col0 = 3 * mesh.triangles(a, k);
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c)
            if (cross(r, c) != 0) triplets.emplace_back(row0 + r, col0 + c, cross(r, c));
      }
    }
  }
  SparseMat curl(3 * mesh.num_vertices(), 3 * mesh.num_vertices());
  curl.setFromTriplets(triplets.begin(), triplets.end());
  return curl;
}

Vec3 interpolate_at(const TriMesh& mesh, const NodalField& field,
                    const Eigen::Vector2d& point) {
  if (field.cols() != mesh.num_vertices())
    fail(ErrorKind::size_mismatch, "field size does not match mesh");

  double h_max = 0;
  for (int k = 0; k < mesh.num_triangles(); ++k)
    for (int e = 0; e < 3; ++e)
      h_max = std::max(h_max, (mesh.vertices.col(mesh.triangles((e + 1) % 3, k)) -
                               mesh.vertices.col(mesh.triangles(e, k)))
                                  .norm());

  int best = -1;
  double best_min_bc = -std::numeric_limits<double>::infinity();
  Eigen::Vector3d best_bc;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Eigen::Vector2d a = mesh.vertices.col(mesh.triangles(0, k));
    const Eigen::Vector2d b = mesh.vertices.col(mesh.triangles(1, k));
    const Eigen::Vector2d c = mesh.vertices.col(mesh.triangles(2, k));
    const double area2 = 2 * mesh.triangle_area(k);
    auto cross = [](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
      return u.x() * v.y() - u.y() * v.x();
    };
    Eigen::Vector3d bc;
    bc[0] = cross(b - point, c - point) / area2;
    bc[1] = cross(c - point, a - point) / area2;
    bc[2] = cross(a - point, b - point) / area2;
    const double min_bc = bc.minCoeff();
    if (min_bc > best_min_bc) {
      best_min_bc = min_bc;
      best = k;
      best_bc = bc;
    }
  }
  // tolerance comparable to a 1e-10*h_max distance from the nearest edge
  const double tol = (best >= 0)
                         ? 1e-10 * h_max * h_max / (2 * mesh.triangle_area(best))
                         : 0;
  if (best < 0 || best_min_bc < -tol)
    fail(ErrorKind::point_outside_mesh, "point is outside the mesh");

  Vec3 value = Vec3::Zero();
  for (int e = 0; e < 3; ++e) value += best_bc[e] * field.col(mesh.triangles(e, best));
  return value;
}

}  // namespace dmifilm
