#pragma once

#include <string>
#include <vector>

#include "dmifilm/mesh.hpp"

namespace dmifilm {

/// One property-suite outcome. `value` is a residual (pass when below
/// threshold) or an observed order (pass when above), per `less_is_pass`.
struct CheckResult {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool less_is_pass = true;
  bool pass = false;
  std::string note;
};

/// Invariant suites on small fixtures: oracle assembly equivalence,
/// gradient consistency, helical identities, lumped-mass domination,
/// energy-law and constraint-law residuals, equilibrium fixed points.
/// Runs in well under a second.
std::vector<CheckResult> run_checks_fast(unsigned seed = 1);

/// Fast suites plus the tau-refinement constraint study and the
/// h-refinement energy convergence study.
std::vector<CheckResult> run_checks_full(unsigned seed = 1);

/// Time-step refinement of the unit-length defect on a fixed horizon.
/// Each run also verifies the exact accumulator identity
/// || I_h[|m^N|^2] - 1 ||_L1 = tau^2 sum_i ∫ I_h[|v_i|^2].
struct TauStudy {
  std::vector<double> taus;            // dimensionless steps, decreasing
  std::vector<double> constraints;     // final L1 defect per run
  std::vector<double> accumulator_rel; // identity defect per run (relative)
  double observed_order = 0;           // least-squares slope in log-log
};

/// FeGe disk protocol with configurable damping (the largest paper step
/// needs alpha >= 2 to satisfy the ellipticity condition).
TauStudy constraint_tau_study(double diameter_nm, double target_h_nm,
                              const std::vector<double>& dt_list_s, double t_end_s,
                              double alpha);

}  // namespace dmifilm
