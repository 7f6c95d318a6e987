#pragma once

#include <string>
#include <vector>

#include "dmifilm/dynamics.hpp"
#include "dmifilm/fem.hpp"
#include "dmifilm/mesh.hpp"

namespace dmifilm {

/// Exact P1 spatial average of one component (0-based) over the mesh.
double average_component(const TriMesh& mesh, const NodalField& field, int component);

/// |ω|^{-1} ∫ m3.
double average_m3(const TriMesh& mesh, const NodalField& field);

/// m3 samples along the horizontal symmetry line through the origin,
/// ordered by abscissa.
struct Profile {
  Eigen::VectorXd x;
  Eigen::VectorXd m3;
};

/// Samples n equally spaced points on the segment between the leftmost and
/// rightmost mesh extent at y = 0; points marginally outside the polygonal
/// boundary are pulled to the nearest interior point along the segment.
Profile extract_profile(const TriMesh& mesh, const NodalField& field, int n_samples);

enum class SkyrmionClass { incomplete, isolated, target };

struct Classification {
  SkyrmionClass cls = SkyrmionClass::incomplete;
  int alternations = 0;
};

const char* to_string(SkyrmionClass cls);

/// Band-alternation classification on the center-to-edge half profile:
/// samples map to H (m3 >= 1 - band_tol), L (m3 <= -1 + band_tol) or
/// neither; consecutive repeats collapse; the number a of H/L alternations
/// decides the class (a = 0 incomplete, a = 1 isolated, a >= 2 target).
/// Both halves are scanned so the result is invariant under profile
/// reversal; for radially symmetric states they agree.
Classification classify_skyrmion(const Profile& profile, double band_tol = 0.1);

/// Legacy VTK 2.0 ASCII unstructured grid with the field as point vectors.
std::string vtk_string(const TriMesh& mesh, const NodalField& field,
                       const std::string& title = "dmifilm snapshot");
void write_vtk(const TriMesh& mesh, const NodalField& field, const std::string& path);

/// Time series CSV with the fixed column schema
/// step,time,exchange,dmi,pi,applied,constant,total,avg_m1,avg_m2,avg_m3,
/// vmax,constraint_l1,energy_residual.
/// `averages` holds one (avg_m1, avg_m2, avg_m3) triple per row and
/// `energy_scale` converts the six energy columns (1 = dimensionless).
std::string series_csv(const std::vector<StepDiagnostics>& series,
                       const std::vector<Vec3>& averages, double energy_scale = 1.0);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dmifilm
