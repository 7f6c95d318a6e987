#pragma once

#include <optional>
#include <string>

#include "dmifilm/dynamics.hpp"
#include "dmifilm/mesh.hpp"
#include "dmifilm/model.hpp"

namespace dmifilm {

/// Parsed INI experiment configuration. All physical quantities are SI at
/// this boundary; conversion to dimensionless units happens in prepare_run.
struct RunConfig {
  // [material]
  double A_J_per_m = 0;
  double D_J_per_m2 = 0;
  double Ms_A_per_m = 0;
  double alpha = 0;

  // [mesh]
  enum class MeshSource { disk, file } mesh_source = MeshSource::disk;
  double diameter_nm = 0;
  double target_h_nm = 0;
  std::string mesh_path;

  // [dynamics]
  double dt_s = 0;
  double t_end_s = 0;
  std::optional<double> relax_vmax;
  SolverKind solver = SolverKind::direct;
  double solver_tol = 1e-10;

  // [initial]
  enum class InitialPreset { uniform_z, uniform_x, file } initial = InitialPreset::uniform_z;
  std::string initial_path;

  // [output]
  std::string out_dir = ".";
  int snapshot_every = 0;
  int profile_samples = 257;
};

/// Parses "key = value" lines under [section] headers; '#' and ';' start
/// comments. Unknown sections or keys are rejected.
RunConfig parse_run_config(std::string_view text);

RunConfig load_run_config(const std::string& path);

/// Everything a simulation needs, in dimensionless units. Construction
/// validates the config, including that dt_s passes the ellipticity check
/// (the failure message carries the admissible maximum).
struct PreparedRun {
  MaterialParams params;
  TriMesh mesh;
  NodalField m0;
  SimConfig sim;
};

PreparedRun prepare_run(const RunConfig& config, bool relaxation_mode);

/// Reads a mesh file, dispatching on a ".msh" suffix to the Gmsh reader.
TriMesh load_mesh_file(const std::string& path);

/// Nodal field file: one "m1 m2 m3" line per vertex.
NodalField load_field_file(const std::string& path, int expected_vertices);
std::string field_file_string(const NodalField& field);

}  // namespace dmifilm
