#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dmifilm/mesh.hpp"

namespace dmifilm {

/// One R^3 vector per mesh vertex (P1 vector field); column z is the nodal
/// value at vertex z. The column-major flat view has index 3*z + component,
/// the layout shared by all 3N-sized operators and vectors.
using NodalField = Eigen::Matrix3Xd;

using SparseMat = Eigen::SparseMatrix<double>;
using Vec3 = Eigen::Vector3d;

/// Trapezoidal-rule weights w_z = sum_{K ∋ z} |K|/3 (diagonal mass).
Eigen::VectorXd assemble_lumped_mass(const TriMesh& mesh);

/// Scalar N x N stiffness (P1 Laplacian), applied component-wise to
/// vector fields. Symmetric positive semidefinite, kernel = constants.
SparseMat assemble_stiffness(const TriMesh& mesh);

/// Expands a scalar N x N operator to 3N x 3N acting on each component.
SparseMat expand_to_vector3(const SparseMat& scalar_op, int nv);

/// 3N x 3N curl form C with phi' * C * v = ∫ curl_w v · phi for P1 fields,
/// where curl_w = e1 x d1 + e2 x d2. Exact: the elementwise-constant curl
/// is paired with the affine test function by the centroid rule.
SparseMat assemble_curl_form(const TriMesh& mesh);

/// Barycentric P1 interpolation at an arbitrary point. The point must lie
/// inside the mesh (up to a ~1e-10*h_max tolerance), else throws
/// point-outside-mesh.
Vec3 interpolate_at(const TriMesh& mesh, const NodalField& field,
                    const Eigen::Vector2d& point);

/// P1 gradients of the three barycentric basis functions on triangle k,
/// column per local vertex, plus the triangle area.
struct TriangleGeometry {
  Eigen::Matrix<double, 2, 3> grad_lambda;
  double area;
};
TriangleGeometry triangle_geometry(const TriMesh& mesh, int k);

/// Flat (3N) views of a nodal field.
inline Eigen::Map<const Eigen::VectorXd> flat(const NodalField& f) {
  return {f.data(), 3 * f.cols()};
}
inline Eigen::Map<Eigen::VectorXd> flat(NodalField& f) {
  return {f.data(), 3 * f.cols()};
}

}  // namespace dmifilm
