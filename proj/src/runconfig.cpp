#include "dmifilm/runconfig.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dmifilm/error.hpp"

namespace dmifilm {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& value, const std::string& key) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::parse, "config key '" + key + "': not a number: '" + value + "'");
  }
}

int to_int(const std::string& value, const std::string& key) {
  const double v = to_double(value, key);
  if (v != std::floor(v))
    fail(ErrorKind::parse, "config key '" + key + "': expected an integer");
  return static_cast<int>(v);
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  RunConfig config;
  bool dt_set = false, tend_set = false, material_set = false;
  bool diameter_set = false, path_set = false;

  std::string section;
  std::istringstream stream{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(stream, raw)) {
    ++lineno;
    auto comment = raw.find_first_of("#;");
    if (comment != std::string::npos) raw.erase(comment);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        fail(ErrorKind::parse, "config line " + std::to_string(lineno) + ": malformed section");
      section = line.substr(1, line.size() - 2);
      if (section != "material" && section != "mesh" && section != "dynamics" &&
          section != "initial" && section != "output")
        fail(ErrorKind::parse, "config line " + std::to_string(lineno) + ": unknown section [" +
                                   section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::parse, "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section == "material") {
      material_set = true;
      if (key == "A_J_per_m") config.A_J_per_m = to_double(value, key);
      else if (key == "D_J_per_m2") config.D_J_per_m2 = to_double(value, key);
      else if (key == "Ms_A_per_m") config.Ms_A_per_m = to_double(value, key);
      else if (key == "alpha") config.alpha = to_double(value, key);
      else fail(ErrorKind::parse, "unknown [material] key '" + key + "'");
    } else if (section == "mesh") {
      if (key == "source") {
        if (value == "disk") config.mesh_source = RunConfig::MeshSource::disk;
        else if (value == "file") config.mesh_source = RunConfig::MeshSource::file;
        else fail(ErrorKind::parse, "mesh source must be 'disk' or 'file'");
      } else if (key == "diameter_nm") {
        config.diameter_nm = to_double(value, key);
        diameter_set = true;
      } else if (key == "target_h_nm") {
        config.target_h_nm = to_double(value, key);
      } else if (key == "path") {
        config.mesh_path = value;
        path_set = true;
      } else {
        fail(ErrorKind::parse, "unknown [mesh] key '" + key + "'");
      }
    } else if (section == "dynamics") {
      if (key == "dt_s") {
        config.dt_s = to_double(value, key);
        dt_set = true;
      } else if (key == "t_end_s") {
        config.t_end_s = to_double(value, key);
        tend_set = true;
      } else if (key == "relax_vmax") {
        config.relax_vmax = to_double(value, key);
      } else if (key == "solver") {
        if (value == "direct") config.solver = SolverKind::direct;
        else if (value == "iterative") config.solver = SolverKind::iterative;
        else fail(ErrorKind::parse, "solver must be 'direct' or 'iterative'");
      } else if (key == "solver_tol") {
        config.solver_tol = to_double(value, key);
      } else {
        fail(ErrorKind::parse, "unknown [dynamics] key '" + key + "'");
      }
    } else if (section == "initial") {
      if (key == "preset") {
        if (value == "uniform_z") config.initial = RunConfig::InitialPreset::uniform_z;
        else if (value == "uniform_x") config.initial = RunConfig::InitialPreset::uniform_x;
        else if (value == "file") config.initial = RunConfig::InitialPreset::file;
        else fail(ErrorKind::parse, "initial preset must be uniform_z, uniform_x or file");
      } else if (key == "path") {
        config.initial_path = value;
      } else {
        fail(ErrorKind::parse, "unknown [initial] key '" + key + "'");
      }
    } else if (section == "output") {
      if (key == "dir") config.out_dir = value;
      else if (key == "snapshot_every") config.snapshot_every = to_int(value, key);
      else if (key == "profile_samples") config.profile_samples = to_int(value, key);
      else fail(ErrorKind::parse, "unknown [output] key '" + key + "'");
    } else {
      fail(ErrorKind::parse, "config line " + std::to_string(lineno) + ": key outside a section");
    }
  }

  if (!material_set)
    fail(ErrorKind::invalid_parameter, "config is missing the [material] section");
  if (!dt_set || !tend_set)
    fail(ErrorKind::invalid_parameter, "config is missing dt_s or t_end_s");
  if (config.mesh_source == RunConfig::MeshSource::disk && path_set)
    fail(ErrorKind::invalid_parameter, "mesh source 'disk' does not take a path");
  if (config.mesh_source == RunConfig::MeshSource::file && diameter_set)
    fail(ErrorKind::invalid_parameter, "mesh source 'file' does not take a diameter");
  if (!(config.solver_tol > 0) || config.solver_tol > 1e-4)
    fail(ErrorKind::invalid_parameter, "solver_tol must be in (0, 1e-4]");
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::io, "cannot open config file " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_run_config(buffer.str());
}

TriMesh load_mesh_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::io, "cannot open mesh file " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".msh")
    return parse_msh2(buffer.str());
  return parse_native(buffer.str());
}

NodalField load_field_file(const std::string& path, int expected_vertices) {
  std::ifstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::io, "cannot open field file " + path);
  NodalField field(3, expected_vertices);
  std::string line;
  int z = 0;
  int lineno = 0;
  while (std::getline(file, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    if (z >= expected_vertices)
      fail(ErrorKind::parse, "field file has more rows than mesh vertices");
    double a, b, c;
    if (std::sscanf(line.c_str(), "%lf %lf %lf", &a, &b, &c) != 3)
      fail(ErrorKind::parse,
           "field file line " + std::to_string(lineno) + ": expected \"m1 m2 m3\"");
    field.col(z++) = Vec3(a, b, c);
  }
  if (z != expected_vertices)
    fail(ErrorKind::parse, "field file has " + std::to_string(z) + " rows, mesh has " +
                               std::to_string(expected_vertices) + " vertices");
  return field;
}

std::string field_file_string(const NodalField& field) {
  std::string out;
  out.reserve(64 * field.cols());
  char buf[128];
  for (int z = 0; z < field.cols(); ++z) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", field(0, z), field(1, z),
                  field(2, z));
    out += buf;
  }
  return out;
}

PreparedRun prepare_run(const RunConfig& config, bool relaxation_mode) {
  PreparedRun run;
  run.params = derive_params(config.A_J_per_m, config.D_J_per_m2, config.Ms_A_per_m,
                             config.alpha);
  const double nm = 1e-9 / run.params.ell_ex;  // nm -> dimensionless

  if (config.mesh_source == RunConfig::MeshSource::disk) {
    if (!(config.diameter_nm > 0) || !(config.target_h_nm > 0))
      fail(ErrorKind::invalid_parameter, "disk mesh requires diameter_nm and target_h_nm");
    run.mesh = generate_disk(config.diameter_nm * nm, config.target_h_nm * nm);
  } else {
    if (config.mesh_path.empty())
      fail(ErrorKind::invalid_parameter, "mesh source 'file' requires a path");
    run.mesh = load_mesh_file(config.mesh_path);
  }

  switch (config.initial) {
    case RunConfig::InitialPreset::uniform_z:
      run.m0 = normalized_nodal_field(run.mesh, [](const Eigen::Vector2d&) {
        return Vec3(0, 0, 1);
      });
      break;
    case RunConfig::InitialPreset::uniform_x:
      run.m0 = normalized_nodal_field(run.mesh, [](const Eigen::Vector2d&) {
        return Vec3(1, 0, 0);
      });
      break;
    case RunConfig::InitialPreset::file: {
      if (config.initial_path.empty())
        fail(ErrorKind::invalid_parameter, "initial preset 'file' requires a path");
      NodalField raw = load_field_file(config.initial_path, run.mesh.num_vertices());
      for (int z = 0; z < raw.cols(); ++z) {
        const double norm = raw.col(z).norm();
        if (norm < 1e-12)
          fail(ErrorKind::invalid_parameter, "initial field vanishes at vertex " +
                                                 std::to_string(z));
        raw.col(z) /= norm;
      }
      run.m0 = std::move(raw);
      break;
    }
  }

  if (!(config.dt_s > 0) || !(config.t_end_s >= 0))
    fail(ErrorKind::invalid_parameter, "dt_s must be positive and t_end_s nonnegative");
  run.sim.tau = config.dt_s / run.params.time_unit;
  run.sim.t_end = config.t_end_s / run.params.time_unit;
  run.sim.solver = config.solver;
  run.sim.solver_tol = config.solver_tol;
  run.sim.snapshot_every = config.snapshot_every;
  if (relaxation_mode && config.relax_vmax) run.sim.stop_vmax = *config.relax_vmax;

  const auto ell = ellipticity_check(run.params.alpha, run.params.kappa, run.sim.tau);
  if (!ell.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "dt_s = %.6g exceeds the admissible maximum %.6g s "
                  "(tau <= alpha/kappa^2 = %.6g dimensionless)",
                  config.dt_s, ell.max_tau * run.params.time_unit, ell.max_tau);
    fail(ErrorKind::invalid_parameter, buf);
  }
  return run;
}

}  // namespace dmifilm
