#include "dmifilm/gamma.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "dmifilm/error.hpp"
#include "dmifilm/quadrature.hpp"

namespace dmifilm {

AnalyticField constant_field(const Vec3& u) {
  const Vec3 unit = u.normalized();
  AnalyticField field;
  field.value = [unit](const Eigen::Vector2d&) { return unit; };
  field.jacobian = [](const Eigen::Vector2d&) {
    return Eigen::Matrix<double, 3, 2>::Zero().eval();
  };
  return field;
}

AnalyticField normalized_field(
    std::function<Vec3(const Eigen::Vector2d&)> g,
    std::function<Eigen::Matrix<double, 3, 2>(const Eigen::Vector2d&)> jacobian_g) {
  AnalyticField field;
  field.value = [g](const Eigen::Vector2d& sigma) { return g(sigma).normalized().eval(); };
  if (jacobian_g) {
    field.jacobian = [g, jacobian_g](const Eigen::Vector2d& sigma) {
      const Vec3 gv = g(sigma);
      const double norm = gv.norm();
      const Vec3 w = gv / norm;
      const Eigen::Matrix<double, 3, 2> J = jacobian_g(sigma);
      // d(g/|g|) = (I - w w') dg / |g|
      return ((J - w * (w.transpose() * J)) / norm).eval();
    };
  }
  return field;
}

AnalyticField radial_profile() {
  AnalyticField field;
  field.value = [](const Eigen::Vector2d& sigma) {
    const double rho = sigma.norm();
    if (rho < 1e-14) return Vec3(0, 0, 1);
    const double theta = std::numbers::pi * std::min(rho, 1.0);
    const Eigen::Vector2d dir = sigma / rho;
    return Vec3(std::sin(theta) * dir.x(), std::sin(theta) * dir.y(), std::cos(theta));
  };
  field.jacobian = [](const Eigen::Vector2d& sigma) {
    Eigen::Matrix<double, 3, 2> J;
    const double rho = sigma.norm();
    if (rho < 1e-14) {
      // sin(pi rho) (x_i / rho) ~ pi x_i near the center
      J << std::numbers::pi, 0, 0, std::numbers::pi, 0, 0;
      return J;
    }
    const double theta = std::numbers::pi * std::min(rho, 1.0);
    const double dtheta = rho < 1.0 ? std::numbers::pi : 0.0;
    const double st = std::sin(theta), ct = std::cos(theta);
    const double c = sigma.x() / rho, s = sigma.y() / rho;  // cos φ, sin φ
    // d rho = (c, s); d φ = (-s, c) / rho
    for (int i = 0; i < 2; ++i) {
      const double drho = i == 0 ? c : s;
      const double dphi = (i == 0 ? -s : c) / rho;
      J(0, i) = ct * drho * dtheta * c - st * s * dphi;
      J(1, i) = ct * drho * dtheta * s + st * c * dphi;
      J(2, i) = -st * drho * dtheta;
    }
    return J;
  };
  return field;
}

RecoveryField::RecoveryField(const AnalyticField& base, double eps, double kappa)
    : base_(&base), eps_(eps), kappa_(kappa) {
  if (!(eps > 0)) fail(ErrorKind::invalid_parameter, "recovery field requires eps > 0");
}

Vec3 RecoveryField::value(const Eigen::Vector2d& sigma, double s) const {
  const Vec3 u0 = base_->value(sigma);
  const Vec3 q = u0 + eps_ * s * kappa_ * Vec3::UnitZ().cross(u0);
  return q / q.norm();
}

RecoveryField::Derivatives RecoveryField::derivatives(const Eigen::Vector2d& sigma,
                                                      double s) const {
  if (!base_->jacobian) return derivatives_fd(sigma, s);

  const Vec3 u0 = base_->value(sigma);
  const Eigen::Matrix<double, 3, 2> J0 = base_->jacobian(sigma);
  const double a = eps_ * s * kappa_;
  const Vec3 q = u0 + a * Vec3::UnitZ().cross(u0);
  const double norm = q.norm();
  const Vec3 ustar = q / norm;

  // projected derivative of the normalization: d(q/|q|) = u* x (dq x u*) / |q|
  const auto project = [&](const Vec3& dq) {
    return (ustar.cross(dq.cross(ustar)) / norm).eval();
  };

  Derivatives d;
  for (int i = 0; i < 2; ++i) {
    const Vec3 du0 = J0.col(i);
    const Vec3 dq = du0 + a * Vec3::UnitZ().cross(du0);
    (i == 0 ? d.d1 : d.d2) = project(dq);
  }
  d.ds = project(eps_ * kappa_ * Vec3::UnitZ().cross(u0));
  return d;
}

RecoveryField::Derivatives RecoveryField::derivatives_fd(const Eigen::Vector2d& sigma,
                                                         double s) const {
  const double h = 1e-6 * std::min(1.0, eps_);
  Derivatives d;
  d.d1 = (value(sigma + Eigen::Vector2d(h, 0), s) - value(sigma - Eigen::Vector2d(h, 0), s)) /
         (2 * h);
  d.d2 = (value(sigma + Eigen::Vector2d(0, h), s) - value(sigma - Eigen::Vector2d(0, h), s)) /
         (2 * h);
  d.ds = (value(sigma, s + h) - value(sigma, s - h)) / (2 * h);
  return d;
}

double helical_jacobian_sq(const RecoveryField& field, const Eigen::Vector2d& sigma,
                           double s) {
  const Vec3 u = field.value(sigma, s);
  const auto d = field.derivatives(sigma, s);
  const double kappa = field.kappa();
  const Vec3 col1 = d.d1 - kappa * Vec3::UnitX().cross(u);
  const Vec3 col2 = d.d2 - kappa * Vec3::UnitY().cross(u);
  const Vec3 col3 = d.ds / field.eps() - kappa * Vec3::UnitZ().cross(u);
  return col1.squaredNorm() + col2.squaredNorm() + col3.squaredNorm();
}

double local_energy_3d(const RecoveryField& field, const TriMesh& omega, int n_gauss_s) {
  if (n_gauss_s < 2 || n_gauss_s > 10)
    fail(ErrorKind::invalid_parameter, "n_gauss_s must be in [2, 10]");
  const auto& tri_rule = triangle_rule_7();
  const GaussRule s_rule = gauss_legendre_01(n_gauss_s);

  double energy = 0;
  for (int k = 0; k < omega.num_triangles(); ++k) {
    const Eigen::Vector2d p0 = omega.vertices.col(omega.triangles(0, k));
    const Eigen::Vector2d p1 = omega.vertices.col(omega.triangles(1, k));
    const Eigen::Vector2d p2 = omega.vertices.col(omega.triangles(2, k));
    const double area = omega.triangle_area(k);
    for (const auto& qp : tri_rule) {
      const Eigen::Vector2d sigma = qp.bary[0] * p0 + qp.bary[1] * p1 + qp.bary[2] * p2;
      double column = 0;
      for (int j = 0; j < n_gauss_s; ++j)
        column += s_rule.weights[j] * helical_jacobian_sq(field, sigma, s_rule.nodes[j]);
      energy += 0.5 * area * qp.weight * column;
    }
  }
  return energy;
}

namespace {

Eigen::Matrix<double, 3, 2> jacobian_or_fd(const AnalyticField& u0,
                                           const Eigen::Vector2d& sigma) {
  if (u0.jacobian) return u0.jacobian(sigma);
  const double h = 1e-6;
  Eigen::Matrix<double, 3, 2> J;
  J.col(0) =
      (u0.value(sigma + Eigen::Vector2d(h, 0)) - u0.value(sigma - Eigen::Vector2d(h, 0))) /
      (2 * h);
  J.col(1) =
      (u0.value(sigma + Eigen::Vector2d(0, h)) - u0.value(sigma - Eigen::Vector2d(0, h))) /
      (2 * h);
  return J;
}

}  // namespace

F0Reference f0_reference(const AnalyticField& u0, const TriMesh& omega, double kappa) {
  const auto& tri_rule = triangle_rule_7();
  double local = 0, dirichlet = 0, dmi = 0, u3sq = 0, area = 0;
  for (int k = 0; k < omega.num_triangles(); ++k) {
    const Eigen::Vector2d p0 = omega.vertices.col(omega.triangles(0, k));
    const Eigen::Vector2d p1 = omega.vertices.col(omega.triangles(1, k));
    const Eigen::Vector2d p2 = omega.vertices.col(omega.triangles(2, k));
    const double tri_area = omega.triangle_area(k);
    area += tri_area;
    for (const auto& qp : tri_rule) {
      const Eigen::Vector2d sigma = qp.bary[0] * p0 + qp.bary[1] * p1 + qp.bary[2] * p2;
      const Vec3 u = u0.value(sigma);
      const Eigen::Matrix<double, 3, 2> J = jacobian_or_fd(u0, sigma);
      const double w = tri_area * qp.weight;
      const Vec3 h1 = J.col(0) - kappa * Vec3::UnitX().cross(u);
      const Vec3 h2 = J.col(1) - kappa * Vec3::UnitY().cross(u);
      local += 0.5 * w * (h1.squaredNorm() + h2.squaredNorm());
      dirichlet += 0.5 * w * J.squaredNorm();
      const Vec3 curl = Vec3::UnitX().cross(J.col(0)) + Vec3::UnitY().cross(J.col(1));
      dmi += w * kappa * curl.dot(u);
      u3sq += w * u.z() * u.z();
    }
  }
  F0Reference ref;
  ref.local_part = local;
  ref.canonical = dirichlet + dmi + 0.5 * (1 + kappa * kappa) * u3sq -
                  0.5 * kappa * kappa * area;
  ref.helical_expansion = local + 0.5 * u3sq - kappa * kappa * area;
  return ref;
}

GammaTable gamma_study(const AnalyticField& u0, const TriMesh& omega,
                       const std::vector<double>& eps_list, double kappa, int n_gauss_s) {
  if (eps_list.size() < 3)
    fail(ErrorKind::invalid_parameter, "gamma_study needs at least 3 eps values");
  for (size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]) || !(eps_list[i] > 0))
      fail(ErrorKind::invalid_parameter, "eps_list must be positive and strictly decreasing");

  GammaTable table;
  table.reference = f0_reference(u0, omega, kappa);
  table.e_limit = table.reference.local_part;
  for (double eps : eps_list) {
    const RecoveryField recovery(u0, eps, kappa);
    const double e_local = local_energy_3d(recovery, omega, n_gauss_s);
    table.rows.push_back({eps, e_local, std::abs(e_local - table.e_limit)});
  }

  table.exact = true;
  for (const auto& row : table.rows)
    if (row.abs_error > 1e-12) table.exact = false;

  if (!table.exact) {
    // least-squares slope of log|error| against log eps
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& row : table.rows) {
      if (row.abs_error <= 0) continue;
      const double x = std::log(row.eps);
      const double y = std::log(row.abs_error);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n >= 2) table.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return table;
}

std::string gamma_table_csv(const GammaTable& table) {
  std::string out = "eps,E_local,E_limit,abs_error\n";
  char buf[160];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", row.eps, row.e_local,
                  table.e_limit, row.abs_error);
    out += buf;
  }
  if (table.exact) {
    out += "# fitted_order=exact\n";
  } else {
    std::snprintf(buf, sizeof buf, "# fitted_order=%.6g\n", table.fitted_order);
    out += buf;
  }
  return out;
}

}  // namespace dmifilm
