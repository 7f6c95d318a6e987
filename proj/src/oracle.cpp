#include "dmifilm/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "dmifilm/error.hpp"

namespace dmifilm::oracle {

namespace {

// Affine coefficients (c0, cx, cy) of the three barycentric basis
// functions, from the solved Vandermonde system; column a holds lambda_a.
struct ElementBasis {
  Eigen::Matrix3d coeffs;  // rows (c0, cx, cy)
  double area;
  Eigen::Vector2d corner[3];
};

ElementBasis element_basis(const TriMesh& mesh, int k) {
  ElementBasis basis;
  Eigen::Matrix3d vandermonde;
  for (int a = 0; a < 3; ++a) {
    basis.corner[a] = mesh.vertices.col(mesh.triangles(a, k));
    vandermonde(a, 0) = 1.0;
    vandermonde(a, 1) = basis.corner[a].x();
    vandermonde(a, 2) = basis.corner[a].y();
  }
  basis.coeffs = vandermonde.inverse();
  basis.area = 0.5 * vandermonde.determinant();
  return basis;
}

// 3-point edge-midpoint rule, exact to degree 2
template <typename F>
double midpoint_integrate(const ElementBasis& basis, F f) {
  double sum = 0;
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector2d mid = 0.5 * (basis.corner[e] + basis.corner[(e + 1) % 3]);
    sum += f(mid);
  }
  return basis.area / 3 * sum;
}

double lambda_at(const ElementBasis& basis, int a, const Eigen::Vector2d& p) {
  return basis.coeffs(0, a) + basis.coeffs(1, a) * p.x() + basis.coeffs(2, a) * p.y();
}

}  // namespace

DenseForms dense_assemble(const TriMesh& mesh) {
  const int nv = mesh.num_vertices();
  if (3 * nv > 600)
    fail(ErrorKind::invalid_parameter, "dense_assemble is limited to 200 scalar unknowns");

  DenseForms forms;
  forms.mass_lumped = Eigen::MatrixXd::Zero(nv, nv);
  forms.stiffness = Eigen::MatrixXd::Zero(nv, nv);
  forms.curl_form = Eigen::MatrixXd::Zero(3 * nv, 3 * nv);

  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const ElementBasis basis = element_basis(mesh, k);
    for (int a = 0; a < 3; ++a) {
      const int za = mesh.triangles(a, k);
      forms.mass_lumped(za, za) +=
          midpoint_integrate(basis, [&](const Eigen::Vector2d& p) { return lambda_at(basis, a, p); });
      const Eigen::Vector2d grad_a(basis.coeffs(1, a), basis.coeffs(2, a));
      for (int b = 0; b < 3; ++b) {
        const int zb = mesh.triangles(b, k);
        const Eigen::Vector2d grad_b(basis.coeffs(1, b), basis.coeffs(2, b));
        forms.stiffness(za, zb) += basis.area * grad_a.dot(grad_b);
        // ∫ curl(lambda_a v_a) . (lambda_b phi_b): curl contribution is
        // (grad lambda_a, 0) x v_a, constant; lambda_b integrated by the
        // midpoint rule
        const double lb_int = midpoint_integrate(
            basis, [&](const Eigen::Vector2d& p) { return lambda_at(basis, b, p); });
        const Vec3 g(grad_a.x(), grad_a.y(), 0);
        for (int r = 0; r < 3; ++r) {
          const Vec3 er = Vec3::Unit(r);
          const Vec3 gxe[3] = {g.cross(Vec3::UnitX()), g.cross(Vec3::UnitY()),
                               g.cross(Vec3::UnitZ())};
          for (int c = 0; c < 3; ++c)
            forms.curl_form(3 * zb + r, 3 * za + c) += lb_int * er.dot(gxe[c]);
        }
      }
    }
  }
  return forms;
}

GradientCheck fd_gradient_check(const TriMesh& mesh, const Operators& ops,
                                const NodalField& m, double kappa, const PiOperator& pi,
                                const AppliedField& applied,
                                const std::vector<double>& deltas, unsigned seed) {
  const Eigen::VectorXd b = assemble_rhs(ops, m, kappa, pi, applied);
  GradientCheck check;
  std::vector<std::pair<double, double>> samples;  // (delta, deviation)
  for (int trial = 0; trial < 4; ++trial) {
    const NodalField phi = random_field(mesh.num_vertices(), seed + trial);
    const double directional = b.dot(flat(phi));
    for (double delta : deltas) {
      const NodalField plus = m + delta * phi;
      const NodalField minus = m - delta * phi;
      const double g_plus = energy_lumped(mesh, ops, plus, kappa, pi, applied).total;
      const double g_minus = energy_lumped(mesh, ops, minus, kappa, pi, applied).total;
      const double diff = (g_plus - g_minus) / (2 * delta);
      const double deviation = std::abs(diff + directional);
      check.max_deviation = std::max(check.max_deviation, deviation);
      samples.emplace_back(delta, deviation);
    }
  }
  // order from the largest/smallest delta pair, guarding rounding floors
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (auto [delta, dev] : samples) {
    if (dev <= 1e-14) continue;
    const double x = std::log(delta), y = std::log(dev);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  check.observed_order = (n >= 2) ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 2.0;
  return check;
}

EnergyBreakdown quad_energy(const AnalyticField& u, const TriMesh& mesh, double kappa,
                            const AppliedField& applied) {
  // local copy of the degree-5 rule (independent of the production tables)
  struct QP { double b0, b1, b2, w; };
  const double s15 = std::sqrt(15.0);
  const QP rule[7] = {
      {1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40},
      {(9 + 2 * s15) / 21, (6 - s15) / 21, (6 - s15) / 21, (155 - s15) / 1200},
      {(6 - s15) / 21, (9 + 2 * s15) / 21, (6 - s15) / 21, (155 - s15) / 1200},
      {(6 - s15) / 21, (6 - s15) / 21, (9 + 2 * s15) / 21, (155 - s15) / 1200},
      {(9 - 2 * s15) / 21, (6 + s15) / 21, (6 + s15) / 21, (155 + s15) / 1200},
      {(6 + s15) / 21, (9 - 2 * s15) / 21, (6 + s15) / 21, (155 + s15) / 1200},
      {(6 + s15) / 21, (6 + s15) / 21, (9 - 2 * s15) / 21, (155 + s15) / 1200},
  };

  EnergyBreakdown e;
  double area = 0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Eigen::Vector2d p0 = mesh.vertices.col(mesh.triangles(0, k));
    const Eigen::Vector2d p1 = mesh.vertices.col(mesh.triangles(1, k));
    const Eigen::Vector2d p2 = mesh.vertices.col(mesh.triangles(2, k));
    const double tri_area = mesh.triangle_area(k);
    area += tri_area;
    for (const QP& qp : rule) {
      const Eigen::Vector2d sigma = qp.b0 * p0 + qp.b1 * p1 + qp.b2 * p2;
      const Vec3 value = u.value(sigma);
      const Eigen::Matrix<double, 3, 2> J = u.jacobian(sigma);
      const double w = tri_area * qp.w;
      e.exchange += 0.5 * w * J.squaredNorm();
      const Vec3 curl = Vec3::UnitX().cross(J.col(0)) + Vec3::UnitY().cross(J.col(1));
      e.dmi += w * kappa * curl.dot(value);
      e.pi_term += 0.5 * (1 + kappa * kappa) * w * value.z() * value.z();
      e.applied_term -= w * applied.f.dot(value);
    }
  }
  e.constant_term = -0.5 * kappa * kappa * area;
  return finalize(e);
}

double l2_norm_sq_exact(const TriMesh& mesh, const NodalField& v) {
  // consistent P1 mass per element: ∫_K p q = |K|/12 ((Σp)(Σq) + Σ p_a q_a)
  double sum = 0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double a = mesh.triangle_area(k);
    for (int c = 0; c < 3; ++c) {
      const double p[3] = {v(c, mesh.triangles(0, k)), v(c, mesh.triangles(1, k)),
                           v(c, mesh.triangles(2, k))};
      const double total = p[0] + p[1] + p[2];
      sum += a / 12 * (total * total + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    }
  }
  return sum;
}

NodalField random_field(int nv, unsigned seed) {
  std::mt19937 rng(seed);
  auto uniform = [&rng] {
    return (static_cast<double>(rng()) + 0.5) / 4294967296.0;  // (0, 1)
  };
  NodalField field(3, nv);
  for (int z = 0; z < nv; ++z) {
    for (int c = 0; c < 3; ++c) {
      // Box-Muller, written out so the stream is implementation-independent
      const double u1 = uniform(), u2 = uniform();
      field(c, z) = std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
    }
  }
  return field;
}

TriMesh unit_right_triangle() {
  Eigen::Matrix2Xd vertices(2, 3);
  vertices << 0, 1, 0,
              0, 0, 1;
  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles(3, 1);
  triangles << 0, 1, 2;
  return make_mesh(std::move(vertices), std::move(triangles));
}

TriMesh unit_square_mesh() {
  Eigen::Matrix2Xd vertices(2, 4);
  vertices << 0, 1, 1, 0,
              0, 0, 1, 1;
  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles(3, 2);
  triangles << 0, 0,
               1, 2,
               2, 3;
  return make_mesh(std::move(vertices), std::move(triangles));
}

TriMesh random_mesh(int n, unsigned seed) {
  std::mt19937 rng(seed);
  auto uniform = [&rng] { return (static_cast<double>(rng()) + 0.5) / 4294967296.0; };
  const double h = 1.0 / n;
  Eigen::Matrix2Xd vertices(2, (n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      Eigen::Vector2d p(i * h, j * h);
      if (i > 0 && i < n && j > 0 && j < n) {
        p.x() += 0.3 * h * (uniform() - 0.5);
        p.y() += 0.3 * h * (uniform() - 0.5);
      }
      vertices.col(j * (n + 1) + i) = p;
    }
  }
  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles(3, 2 * n * n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * (n + 1) + i, v10 = v00 + 1;
      const int v01 = v00 + (n + 1), v11 = v01 + 1;
      triangles.col(k++) = Eigen::Vector3i(v00, v10, v11);
      triangles.col(k++) = Eigen::Vector3i(v00, v11, v01);
    }
  }
  return make_mesh(std::move(vertices), std::move(triangles));
}

}  // namespace dmifilm::oracle
