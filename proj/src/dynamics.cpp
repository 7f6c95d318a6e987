#include "dmifilm/dynamics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include "dmifilm/error.hpp"

namespace dmifilm {

TangentFrame build_tangent_frame(const NodalField& m) {
  const int nv = static_cast<int>(m.cols());
  TangentFrame frame;
  frame.t1.resize(3, nv);
  frame.t2.resize(3, nv);
  for (int z = 0; z < nv; ++z) {
    const double norm = m.col(z).norm();
    if (norm < 0.1)
      fail(ErrorKind::degenerate_magnetization,
           "|m| = " + std::to_string(norm) + " < 0.1 at vertex " + std::to_string(z));
    const Vec3 n = m.col(z) / norm;
    int axis = 0;
    double best = std::abs(n[0]);
    for (int a = 1; a < 3; ++a) {
      if (std::abs(n[a]) < best) {
        best = std::abs(n[a]);
        axis = a;
      }
    }
    const Vec3 t1 = Vec3::Unit(axis).cross(n).normalized();
    frame.t1.col(z) = t1;
    frame.t2.col(z) = n.cross(t1);
  }
  return frame;
}

EllipticityResult ellipticity_check(double alpha, double kappa, double tau) {
  EllipticityResult result;
  if (kappa == 0) {
    result.pass = true;
    result.max_tau = std::numeric_limits<double>::infinity();
    return result;
  }
  result.max_tau = alpha / (kappa * kappa);
  result.pass = tau <= result.max_tau;
  return result;
}

namespace {

// 3N x 2N embedding of the tangent frame; column 2z+k holds t_{k+1}(z).
SparseMat frame_embedding(const TangentFrame& frame) {
  const int nv = static_cast<int>(frame.t1.cols());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(6 * nv);
  for (int z = 0; z < nv; ++z) {
    for (int c = 0; c < 3; ++c) {
      triplets.emplace_back(3 * z + c, 2 * z, frame.t1(c, z));
      triplets.emplace_back(3 * z + c, 2 * z + 1, frame.t2(c, z));
    }
  }
  SparseMat T(3 * nv, 2 * nv);
  T.setFromTriplets(triplets.begin(), triplets.end());
  return T;
}

// lumped mass and lumped skew term: block at z is w_z (alpha I + [m(z)]x)
SparseMat lumped_blocks(const Eigen::VectorXd& w, const NodalField& m, double alpha) {
  const int nv = static_cast<int>(m.cols());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * nv);
  for (int z = 0; z < nv; ++z) {
    const Vec3 mz = m.col(z);
    Eigen::Matrix3d block;
    block << alpha, -mz.z(), mz.y(),
             mz.z(), alpha, -mz.x(),
             -mz.y(), mz.x(), alpha;
    block *= w[z];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        triplets.emplace_back(3 * z + r, 3 * z + c, block(r, c));
  }
  SparseMat B(3 * nv, 3 * nv);
  B.setFromTriplets(triplets.begin(), triplets.end());
  return B;
}

struct ReducedSolve {
  Eigen::VectorXd y;
  int iterations = 0;
};

ReducedSolve solve_reduced(const SparseMat& A, const Eigen::VectorXd& b,
                           const SimConfig& config) {
  ReducedSolve out;
  if (config.solver == SolverKind::direct) {
    Eigen::SparseLU<SparseMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      fail(ErrorKind::solver_failure, "sparse LU factorization failed");
    out.y = lu.solve(b);
  } else {
    Eigen::GMRES<SparseMat, Eigen::IncompleteLUT<double>> gmres;
    gmres.setTolerance(config.solver_tol);
    gmres.setMaxIterations(2000);
    gmres.compute(A);
    out.y = gmres.solve(b);
    out.iterations = static_cast<int>(gmres.iterations());
  }
  const double bnorm = b.norm();
  const double rel = (A * out.y - b).norm() / (bnorm > 0 ? bnorm : 1.0);
  if (!(rel <= config.solver_tol))
    fail(ErrorKind::solver_failure,
         "relative residual " + std::to_string(rel) + " above tolerance");
  return out;
}

}  // namespace

StepResult step(const TriMesh& mesh, const Operators& ops, const Model2D& model,
                const NodalField& m, const SimConfig& config, int step_index) {
  const auto ell = ellipticity_check(model.alpha, model.kappa, config.tau);
  if (!ell.pass)
    fail(ErrorKind::ellipticity_violation,
         "tau = " + std::to_string(config.tau) + " exceeds admissible maximum " +
             std::to_string(ell.max_tau));

  const int nv = mesh.num_vertices();
  const double tau = config.tau;
  const TangentFrame frame = build_tangent_frame(m);
  const SparseMat T = frame_embedding(frame);

  // a(v, phi) = alpha ∫I_h[v·phi] + ∫I_h[(m x v)·phi] + tau ∫∇v:∇phi
  //             + (kappa tau / 2) (∫curl v·phi + ∫v·curl phi)
  SparseMat A3 = lumped_blocks(ops.lumped, m, model.alpha);
  A3 += tau * ops.stiffness3;
  if (model.kappa != 0) A3 += (model.kappa * tau / 2) * ops.curl_sym;

  const SparseMat A = T.transpose() * A3 * T;
  const Eigen::VectorXd b3 = assemble_rhs(ops, m, model.kappa, *model.pi, model.applied);
  const Eigen::VectorXd b = T.transpose() * b3;

  const ReducedSolve solve = solve_reduced(A, b, config);

  StepResult result;
  result.v.resize(3, nv);
  flat(result.v) = T * solve.y;
  result.m_next = m + tau * result.v;
  if (config.renormalize)
    for (int z = 0; z < nv; ++z) result.m_next.col(z).normalize();

  // diagnostics
  const EnergyBreakdown e_prev =
      energy_lumped(mesh, ops, m, model.kappa, *model.pi, model.applied);
  const EnergyBreakdown e_next =
      energy_lumped(mesh, ops, result.m_next, model.kappa, *model.pi, model.applied);

  double vsq_lumped = 0, vmax = 0, constraint = 0;
  for (int z = 0; z < nv; ++z) {
    const double vv = result.v.col(z).squaredNorm();
    vsq_lumped += ops.lumped[z] * vv;
    vmax = std::max(vmax, std::sqrt(vv));
    constraint += ops.lumped[z] * std::abs(result.m_next.col(z).squaredNorm() - 1.0);
  }
  const double grad_vsq = flat(result.v).dot(ops.stiffness3 * flat(result.v));
  const double pi_vsq = pi_quadratic_form_lumped(*model.pi, ops.lumped, result.v, result.v);
  const double residual = e_next.total + model.alpha * tau * vsq_lumped +
                          0.5 * tau * tau * grad_vsq + 0.5 * tau * tau * pi_vsq -
                          e_prev.total;

  result.vsq_lumped = vsq_lumped;
  result.diag.step = step_index + 1;
  result.diag.time = (step_index + 1) * tau;
  result.diag.energy = e_next;
  result.diag.energy_law_residual = std::abs(residual);
  result.diag.constraint_l1 = constraint;
  result.diag.vmax = vmax;
  result.diag.solver_iterations = solve.iterations;
  return result;
}

EvolveResult evolve(const TriMesh& mesh, const Operators& ops, const Model2D& model,
                    const NodalField& m0, const SimConfig& config,
                    const EvolveSink& sink) {
  if (m0.cols() != mesh.num_vertices())
    fail(ErrorKind::size_mismatch, "initial field size does not match mesh");
  for (int z = 0; z < m0.cols(); ++z)
    if (std::abs(m0.col(z).norm() - 1.0) > 1e-12)
      fail(ErrorKind::invalid_parameter,
           "initial field is not unit length at vertex " + std::to_string(z));
  if (!(config.tau > 0) || config.t_end < 0)
    fail(ErrorKind::invalid_parameter, "evolve requires tau > 0 and t_end >= 0");

  EvolveResult result;
  result.m = m0;

  StepDiagnostics initial;
  initial.energy = energy_lumped(mesh, ops, m0, model.kappa, *model.pi, model.applied);
  double constraint0 = 0;
  for (int z = 0; z < m0.cols(); ++z)
    constraint0 += ops.lumped[z] * std::abs(m0.col(z).squaredNorm() - 1.0);
  initial.constraint_l1 = constraint0;
  result.series.push_back(initial);
  if (sink.on_step) sink.on_step(initial, m0, NodalField::Zero(3, m0.cols()));

  const int n_steps =
      static_cast<int>(std::ceil(config.t_end / config.tau - 1e-12));
  for (int i = 0; i < n_steps; ++i) {
    StepResult res = step(mesh, ops, model, result.m, config, i);
    result.m = std::move(res.m_next);
    result.vsq_accumulator += config.tau * config.tau * res.vsq_lumped;
    result.steps = i + 1;
    result.series.push_back(res.diag);
    if (sink.on_step) sink.on_step(res.diag, result.m, res.v);
    if (config.snapshot_every > 0 && (i + 1) % config.snapshot_every == 0 && sink.on_snapshot)
      sink.on_snapshot(i + 1, result.m);
    if (config.stop_vmax && res.diag.vmax < *config.stop_vmax) {
      result.stopped_by_vmax = true;
      break;
    }
  }
  return result;
}

NodalField normalized_nodal_field(const TriMesh& mesh,
                                  const std::function<Vec3(const Eigen::Vector2d&)>& f) {
  NodalField m(3, mesh.num_vertices());
  for (int z = 0; z < mesh.num_vertices(); ++z) {
    Vec3 value = f(mesh.vertices.col(z));
    const double norm = value.norm();
    if (norm < 1e-12)
      fail(ErrorKind::invalid_parameter,
           "initial field vanishes at vertex " + std::to_string(z));
    m.col(z) = value / norm;
  }
  return m;
}

}  // namespace dmifilm
