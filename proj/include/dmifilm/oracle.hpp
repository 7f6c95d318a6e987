#pragma once

#include <vector>

#include "dmifilm/gamma.hpp"
#include "dmifilm/model.hpp"

// Independent brute-force references for tests. Nothing here shares
// element-integration code with the production assembly or energy paths:
// gradients come from solved 3x3 Vandermonde systems and integrals from
// explicit low-order rules.
namespace dmifilm::oracle {

struct DenseForms {
  Eigen::MatrixXd mass_lumped;  // N x N diagonal
  Eigen::MatrixXd stiffness;    // N x N
  Eigen::MatrixXd curl_form;    // 3N x 3N
};

/// Naive dense per-element assembly; refuses meshes above 200 scalar
/// unknowns (dense cost).
DenseForms dense_assemble(const TriMesh& mesh);

struct GradientCheck {
  double max_deviation = 0;  // worst |central difference + b.phi|
  double observed_order = 0; // slope of log(deviation) vs log(delta), 2 when clean
};

/// Central-difference check of the load vector against the lumped energy:
/// (G(m + d phi) - G(m - d phi)) / (2d) must equal -b . phi. The energy is
/// quadratic in m, so the difference is exact up to rounding for every d.
GradientCheck fd_gradient_check(const TriMesh& mesh, const Operators& ops,
                                const NodalField& m, double kappa, const PiOperator& pi,
                                const AppliedField& applied,
                                const std::vector<double>& deltas, unsigned seed = 1);

/// Energy of an analytic unit field by a degree-5 (7-point) rule per
/// triangle, every integrand evaluated pointwise from analytic derivatives.
EnergyBreakdown quad_energy(const AnalyticField& u, const TriMesh& mesh, double kappa,
                            const AppliedField& applied = {});

/// Exact ∫ |v|^2 of a P1 field (consistent mass), for the lumped-domination
/// property ∫ I_h[|v|^2] >= ∫ |v|^2.
double l2_norm_sq_exact(const TriMesh& mesh, const NodalField& v);

/// Deterministic standard-normal field (mt19937 + Box-Muller).
NodalField random_field(int nv, unsigned seed);

/// Test fixtures.
TriMesh unit_right_triangle();  // (0,0), (1,0), (0,1)
TriMesh unit_square_mesh();     // two triangles
TriMesh random_mesh(int n, unsigned seed);  // jittered n x n unit square grid

}  // namespace dmifilm::oracle
