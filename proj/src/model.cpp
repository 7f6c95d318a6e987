#include "dmifilm/model.hpp"

#include <cmath>

#include "dmifilm/error.hpp"

namespace dmifilm {

MaterialParams derive_params(double A, double D, double Ms, double alpha) {
  if (!(A > 0) || !(Ms > 0) || !(alpha > 0))
    fail(ErrorKind::invalid_parameter, "derive_params requires A > 0, Ms > 0, alpha > 0");
  MaterialParams p;
  p.A = A;
  p.D = D;
  p.Ms = Ms;
  p.alpha = alpha;
  p.ell_ex = std::sqrt(2 * A / (mu0 * Ms * Ms));
  p.kappa = D / (mu0 * Ms * Ms * p.ell_ex);
  p.time_unit = 1.0 / (gamma0 * mu0 * Ms);
  return p;
}

MaterialParams fege_params(double alpha) {
  return derive_params(8.78e-12, 1.58e-3, 3.84e5, alpha);
}

EnergyBreakdown finalize(EnergyBreakdown e) {
  e.total = ((((e.exchange + e.dmi) + e.pi_term) + e.applied_term) + e.constant_term);
  return e;
}

NodalField ThinFilmPi::apply(const NodalField& u) const {
  NodalField out = NodalField::Zero(3, u.cols());
  out.row(2) = -factor_ * u.row(2);
  return out;
}

double ThinFilmPi::quadratic_form_exact(const TriMesh& mesh, const NodalField& u) const {
  // ∫ pi[u]·u = -(1+k^2) ∫ u3^2 with the exact P1 mass matrix per element:
  // ∫_K p q = |K|/12 * (sum_a p_a)(sum_b q_b) + |K|/12 * sum_a p_a q_a
  double integral_u3_sq = 0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double u3[3] = {u(2, mesh.triangles(0, k)), u(2, mesh.triangles(1, k)),
                          u(2, mesh.triangles(2, k))};
    const double sum = u3[0] + u3[1] + u3[2];
    const double sq = u3[0] * u3[0] + u3[1] * u3[1] + u3[2] * u3[2];
    integral_u3_sq += mesh.triangle_area(k) / 12 * (sum * sum + sq);
  }
  return -factor_ * integral_u3_sq;
}

NodalField pi_thinfilm(const NodalField& u, double kappa) {
  return ThinFilmPi(kappa).apply(u);
}

double pi_quadratic_form_lumped(const PiOperator& pi, const Eigen::VectorXd& lumped,
                                const NodalField& u, const NodalField& v) {
  const NodalField pu = pi.apply(u);
  double sum = 0;
  for (int z = 0; z < u.cols(); ++z) sum += lumped[z] * pu.col(z).dot(v.col(z));
  return sum;
}

Operators assemble_operators(const TriMesh& mesh) {
  Operators ops;
  ops.lumped = assemble_lumped_mass(mesh);
  ops.stiffness = assemble_stiffness(mesh);
  ops.stiffness3 = expand_to_vector3(ops.stiffness, mesh.num_vertices());
  ops.curl = assemble_curl_form(mesh);
  ops.curl_sym = ops.curl + SparseMat(ops.curl.transpose());
  ops.total_area = ops.lumped.sum();
  return ops;
}

namespace {

void check_field(const TriMesh& mesh, const NodalField& u) {
  if (u.cols() != mesh.num_vertices())
    fail(ErrorKind::size_mismatch, "field size does not match mesh");
}

// exchange and DMI terms are evaluated the same way by both energy
// variants: elementwise-constant gradient, centroid rule for the affine
// factor of curl u · u (exact for P1)
void add_gradient_terms(const TriMesh& mesh, const NodalField& u, double kappa,
                        EnergyBreakdown& e) {
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const TriangleGeometry geom = triangle_geometry(mesh, k);
    Eigen::Matrix<double, 3, 2> grad = Eigen::Matrix<double, 3, 2>::Zero();
    Vec3 mean = Vec3::Zero();
    Vec3 curl = Vec3::Zero();
    for (int a = 0; a < 3; ++a) {
      const Vec3 ua = u.col(mesh.triangles(a, k));
      grad += ua * geom.grad_lambda.col(a).transpose();
      mean += ua / 3;
      const Vec3 g(geom.grad_lambda(0, a), geom.grad_lambda(1, a), 0);
      curl += g.cross(ua);
    }
    e.exchange += 0.5 * geom.area * grad.squaredNorm();
    e.dmi += kappa * geom.area * curl.dot(mean);
  }
}

}  // namespace

EnergyBreakdown energy(const TriMesh& mesh, const NodalField& u, double kappa,
                       const PiOperator& pi, const AppliedField& applied) {
  check_field(mesh, u);
  EnergyBreakdown e;
  add_gradient_terms(mesh, u, kappa, e);
  e.pi_term = -0.5 * pi.quadratic_form_exact(mesh, u);
  double area = 0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double a = mesh.triangle_area(k);
    area += a;
    const Vec3 mean = (u.col(mesh.triangles(0, k)) + u.col(mesh.triangles(1, k)) +
                       u.col(mesh.triangles(2, k))) /
                      3;
    e.applied_term -= a * applied.f.dot(mean);
  }
  e.constant_term = -0.5 * kappa * kappa * area;
  return finalize(e);
}

EnergyBreakdown energy_lumped(const TriMesh& mesh, const Operators& ops,
                              const NodalField& u, double kappa, const PiOperator& pi,
                              const AppliedField& applied) {
  check_field(mesh, u);
  EnergyBreakdown e;
  add_gradient_terms(mesh, u, kappa, e);
  e.pi_term = -0.5 * pi_quadratic_form_lumped(pi, ops.lumped, u, u);
  for (int z = 0; z < u.cols(); ++z)
    e.applied_term -= ops.lumped[z] * applied.f.dot(u.col(z));
  e.constant_term = -0.5 * kappa * kappa * ops.total_area;
  return finalize(e);
}

Eigen::VectorXd assemble_rhs(const Operators& ops, const NodalField& m, double kappa,
                             const PiOperator& pi, const AppliedField& applied) {
  const int nv = static_cast<int>(m.cols());
  if (3 * nv != ops.stiffness3.rows())
    fail(ErrorKind::size_mismatch, "field size does not match operators");

  Eigen::VectorXd b = -(ops.stiffness3 * flat(m));
  b.noalias() -= kappa * (ops.curl_sym * flat(m));
  const NodalField pm = pi.apply(m);
  for (int z = 0; z < nv; ++z) {
    b.segment<3>(3 * z) += ops.lumped[z] * (pm.col(z) + applied.f);
  }
  return b;
}

}  // namespace dmifilm
