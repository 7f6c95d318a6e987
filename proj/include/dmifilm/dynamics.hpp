#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dmifilm/model.hpp"

namespace dmifilm {

/// Per-vertex orthonormal basis (t1, t2) of the plane normal to m(z).
/// Parameterizes the discrete tangent space with two unknowns per vertex.
struct TangentFrame {
  Eigen::Matrix3Xd t1;
  Eigen::Matrix3Xd t2;
};

/// Deterministic frame: n = m/|m|, t1 = normalize(e_a x n) with e_a the
/// coordinate axis minimizing |e_a . n| (ties -> smallest index),
/// t2 = n x t1. Throws degenerate-magnetization where |m(z)| < 0.1.
TangentFrame build_tangent_frame(const NodalField& m);

enum class SolverKind { direct, iterative };

struct SimConfig {
  double tau = 0;                  // dimensionless time step
  double t_end = 0;                // dimensionless horizon
  double solver_tol = 1e-10;       // relative residual
  SolverKind solver = SolverKind::direct;
  std::optional<double> stop_vmax; // relaxation stop on max nodal |v|
  int snapshot_every = 0;          // steps between snapshots (0 = none)
  bool renormalize = false;        // debug only; breaks the energy law
};

struct StepDiagnostics {
  int step = 0;       // completed steps
  double time = 0;    // step * tau
  EnergyBreakdown energy;           // lumped variant
  double energy_law_residual = 0;   // four-term identity defect, absolute
  double constraint_l1 = 0;         // || I_h[|m|^2] - 1 ||_L1
  double vmax = 0;                  // max nodal |v| of the step
  int solver_iterations = 0;        // 0 for the direct solver
};

struct EllipticityResult {
  bool pass = false;
  double max_tau = 0;  // admissible maximum (inf when kappa = 0)
};

/// Sufficient ellipticity condition tau <= alpha / kappa^2 for the reduced
/// bilinear form (safety factor 2 below the Young-inequality bound).
EllipticityResult ellipticity_check(double alpha, double kappa, double tau);

struct StepResult {
  NodalField m_next;
  NodalField v;
  StepDiagnostics diag;
  double vsq_lumped = 0;  // ∫ I_h[|v|^2], the constraint-law increment
};

/// Physics bundle for the 2D reduced model (or any pi/f realization).
struct Model2D {
  double alpha = 1;
  double kappa = 0;
  const PiOperator* pi = nullptr;
  AppliedField applied;
};

/// One step of the projection-free tangent plane scheme: solves the reduced
/// 2N x 2N system on the tangent frame of m, then m_next = m + tau v.
/// No renormalization is applied unless config.renormalize is set.
StepResult step(const TriMesh& mesh, const Operators& ops, const Model2D& model,
                const NodalField& m, const SimConfig& config, int step_index);

struct EvolveSink {
  std::function<void(const StepDiagnostics&, const NodalField& m, const NodalField& v)>
      on_step;  // called after every step (and once for the initial state with v = 0)
  std::function<void(int step, const NodalField& m)> on_snapshot;
};

struct EvolveResult {
  NodalField m;
  std::vector<StepDiagnostics> series;  // initial row + one row per step
  double vsq_accumulator = 0;           // tau^2 sum_i ∫ I_h[|v_i|^2]
  int steps = 0;
  bool stopped_by_vmax = false;
};

/// Iterates `step` until t >= t_end, or until vmax < stop_vmax when set.
/// m0 must be unit length at every vertex (to 1e-12).
EvolveResult evolve(const TriMesh& mesh, const Operators& ops, const Model2D& model,
                    const NodalField& m0, const SimConfig& config,
                    const EvolveSink& sink = {});

/// Nodal interpolation of an analytic initial datum followed by nodal
/// normalization, satisfying the scheme's |m0(z)| = 1 input contract.
NodalField normalized_nodal_field(const TriMesh& mesh,
                                  const std::function<Vec3(const Eigen::Vector2d&)>& f);

}  // namespace dmifilm
