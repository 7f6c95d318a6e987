#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dmifilm/fem.hpp"
#include "dmifilm/mesh.hpp"

namespace dmifilm {

/// Unit-sphere-valued field on the 2D cross-section, with optional analytic
/// tangential derivatives (columns d1 u, d2 u). Without a jacobian, callers
/// fall back to central differences.
struct AnalyticField {
  std::function<Vec3(const Eigen::Vector2d&)> value;
  std::function<Eigen::Matrix<double, 3, 2>(const Eigen::Vector2d&)> jacobian;  // may be empty
};

/// u = e3 (or any constant unit vector).
AnalyticField constant_field(const Vec3& u);

/// Pointwise normalization g/|g| of a smooth field, derivatives by the
/// projection rule.
AnalyticField normalized_field(
    std::function<Vec3(const Eigen::Vector2d&)> g,
    std::function<Eigen::Matrix<double, 3, 2>(const Eigen::Vector2d&)> jacobian_g);

/// Radially symmetric profile (sin θ cos φ, sin θ sin φ, cos θ) with
/// θ(ρ) = π min(ρ, 1); covers the sphere from +e3 at the center to -e3 at
/// unit radius.
AnalyticField radial_profile();

/// Thickness recovery map u*(σ, s) = (u0 + ε s κ (e3 x u0)) / |...| with
/// first derivatives (analytic when the base field has a jacobian, otherwise
/// central differences of step 1e-6 min(1, ε)).
class RecoveryField {
 public:
  RecoveryField(const AnalyticField& base, double eps, double kappa);

  Vec3 value(const Eigen::Vector2d& sigma, double s) const;

  struct Derivatives {
    Vec3 d1, d2, ds;
  };
  Derivatives derivatives(const Eigen::Vector2d& sigma, double s) const;
  Derivatives derivatives_fd(const Eigen::Vector2d& sigma, double s) const;

  double eps() const { return eps_; }
  double kappa() const { return kappa_; }

 private:
  const AnalyticField* base_;
  double eps_;
  double kappa_;
};

/// Frobenius square of the ε-rescaled helical Jacobian
/// ( d1 u - κ e1 x u, d2 u - κ e2 x u, ε^{-1} ds u - κ e3 x u ).
double helical_jacobian_sq(const RecoveryField& field, const Eigen::Vector2d& sigma,
                           double s);

/// Local part of the rescaled thin-film energy,
/// (1/2) ∫_{ω x (0,1)} |D_ε u*|^2, by a 7-point triangle rule tensorized
/// with an n-point Gauss rule in the thickness variable.
double local_energy_3d(const RecoveryField& field, const TriMesh& omega, int n_gauss_s);

/// Reference values of the limit functional on u0:
///   local_part         = (1/2) Σ_{i=1,2} ∫ |d_i u0|^2
///   canonical          = (1/2)∫|∇u0|^2 + κ∫curl u0·u0 + (1+κ^2)/2 ∫ u3^2 - κ^2|ω|/2
///   helical_expansion  = local_part + (1/2)∫ u3^2 - κ^2 |ω|
/// The two full forms differ by exactly κ^2 |ω| / 2; both are reported.
struct F0Reference {
  double local_part = 0;
  double canonical = 0;
  double helical_expansion = 0;
};

F0Reference f0_reference(const AnalyticField& u0, const TriMesh& omega, double kappa);

struct GammaTable {
  struct Row {
    double eps;
    double e_local;
    double abs_error;
  };
  std::vector<Row> rows;    // eps strictly decreasing
  double e_limit = 0;       // local part of the limit
  double fitted_order = 0;  // least-squares slope of log|error| vs log eps
  bool exact = false;       // all errors at rounding level (<= 1e-12)
  F0Reference reference;
};

/// Tabulates the thickness-limit convergence of the local energy along the
/// recovery sequence and fits the observed order.
GammaTable gamma_study(const AnalyticField& u0, const TriMesh& omega,
                       const std::vector<double>& eps_list, double kappa,
                       int n_gauss_s = 4);

/// CSV with header "eps,E_local,E_limit,abs_error" and a trailing
/// "# fitted_order=..." comment line.
std::string gamma_table_csv(const GammaTable& table);

}  // namespace dmifilm
