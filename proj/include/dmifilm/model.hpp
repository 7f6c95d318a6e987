#pragma once

#include <memory>

#include "dmifilm/fem.hpp"
#include "dmifilm/mesh.hpp"

namespace dmifilm {

inline constexpr double mu0 = 4e-7 * 3.14159265358979323846;  // vacuum permeability
inline constexpr double gamma0 = 1.760859630e11;  // electron gyromagnetic ratio, rad/(s*T)

/// Physical material constants plus the derived nondimensionalization.
/// Internally all lengths are measured in ell_ex, all times in time_unit,
/// and all energies in mu0 * Ms^2 * ell_ex^3 per unit thickness.
struct MaterialParams {
  double A = 0;      // exchange stiffness, J/m
  double D = 0;      // DMI constant, J/m^2
  double Ms = 0;     // saturation magnetization, A/m
  double alpha = 0;  // Gilbert damping, dimensionless

  double ell_ex = 0;     // sqrt(2A / (mu0 Ms^2)), m
  double kappa = 0;      // D / (mu0 Ms^2 ell_ex)
  double time_unit = 0;  // 1 / (gamma0 mu0 Ms), s
};

MaterialParams derive_params(double A, double D, double Ms, double alpha);

/// FeGe reference material: A = 8.78e-12 J/m, D = 1.58e-3 J/m^2,
/// Ms = 3.84e5 A/m (kappa ~ 0.876, ell_ex ~ 9.73 nm).
MaterialParams fege_params(double alpha = 1.0);

/// Constant dimensionless applied field.
struct AppliedField {
  Vec3 f = Vec3::Zero();
};

/// Per-term dimensionless energies. `total` is the fixed-order sum
/// ((((exchange + dmi) + pi_term) + applied_term) + constant_term).
struct EnergyBreakdown {
  double exchange = 0;
  double dmi = 0;
  double pi_term = 0;
  double applied_term = 0;
  double constant_term = 0;
  double total = 0;
};

EnergyBreakdown finalize(EnergyBreakdown e);

/// Linear, bounded, self-adjoint lower-order operator of the energy
/// functional. Implementations must be nodewise (value at z depends only
/// on the field at z) so that the lumped pairing stays self-adjoint.
class PiOperator {
 public:
  virtual ~PiOperator() = default;

  /// Nodal values of pi[u].
  virtual NodalField apply(const NodalField& u) const = 0;

  /// Element-exact ∫ pi[u] · u.
  virtual double quadratic_form_exact(const TriMesh& mesh, const NodalField& u) const = 0;
};

/// Thin-film operator pi[u] = -(1 + kappa^2) (e3 ⊗ e3) u, the local limit
/// of the stray field augmented by the out-of-plane DMI contribution.
class ThinFilmPi final : public PiOperator {
 public:
  explicit ThinFilmPi(double kappa) : factor_(1 + kappa * kappa) {}

  NodalField apply(const NodalField& u) const override;
  double quadratic_form_exact(const TriMesh& mesh, const NodalField& u) const override;

 private:
  double factor_;
};

/// Nodewise (0, 0, -(1+kappa^2) u3).
NodalField pi_thinfilm(const NodalField& u, double kappa);

/// Lumped pairing sum_z w_z pi[u](z) · v(z).
double pi_quadratic_form_lumped(const PiOperator& pi, const Eigen::VectorXd& lumped,
                                const NodalField& u, const NodalField& v);

/// Pre-assembled immutable operators for one mesh.
struct Operators {
  Eigen::VectorXd lumped;   // w_z
  SparseMat stiffness;      // N x N scalar
  SparseMat stiffness3;     // 3N x 3N component-wise expansion
  SparseMat curl;           // C, phi' C v = ∫ curl_w v · phi
  SparseMat curl_sym;       // C + C'
  double total_area = 0;
};

Operators assemble_operators(const TriMesh& mesh);

/// Reporting energy: element-exact quadrature for every term, including
/// the additive constant -kappa^2 |w| / 2 of the reduced functional.
EnergyBreakdown energy(const TriMesh& mesh, const NodalField& u, double kappa,
                       const PiOperator& pi, const AppliedField& applied);

/// Scheme-consistent energy: pi and applied terms by the trapezoidal rule,
/// matching the quadrature of the time integrator. The discrete energy law
/// is exact for this variant.
EnergyBreakdown energy_lumped(const TriMesh& mesh, const Operators& ops,
                              const NodalField& u, double kappa, const PiOperator& pi,
                              const AppliedField& applied);

/// Load vector b (3N) with b · phi = -∫∇m:∇phi + ∫I_h[pi[m]·phi] + ∫I_h[f·phi]
///                                   - kappa ∫curl m·phi - kappa ∫m·curl phi,
/// i.e. the negative gradient of the lumped energy.
Eigen::VectorXd assemble_rhs(const Operators& ops, const NodalField& m, double kappa,
                             const PiOperator& pi, const AppliedField& applied);

}  // namespace dmifilm
