#include "dmifilm/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "dmifilm/error.hpp"

namespace dmifilm {

double average_component(const TriMesh& mesh, const NodalField& field, int component) {
  if (field.cols() != mesh.num_vertices())
    fail(ErrorKind::size_mismatch, "field size does not match mesh");
  double integral = 0, area = 0;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const double a = mesh.triangle_area(k);
    const double mean = (field(component, mesh.triangles(0, k)) +
                         field(component, mesh.triangles(1, k)) +
                         field(component, mesh.triangles(2, k))) /
                        3;
    integral += a * mean;
    area += a;
  }
  return integral / area;
}

double average_m3(const TriMesh& mesh, const NodalField& field) {
  return average_component(mesh, field, 2);
}

Profile extract_profile(const TriMesh& mesh, const NodalField& field, int n_samples) {
  if (n_samples < 16)
    fail(ErrorKind::invalid_parameter, "extract_profile requires n_samples >= 16");

  const double x_min = mesh.vertices.row(0).minCoeff();
  const double x_max = mesh.vertices.row(0).maxCoeff();

  Profile profile;
  profile.x.resize(n_samples);
  profile.m3.resize(n_samples);
  int inside = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double x = x_min + (x_max - x_min) * i / (n_samples - 1);
    profile.x[i] = x;
    Eigen::Vector2d p(x, 0.0);
    try {
      profile.m3[i] = interpolate_at(mesh, field, p).z();
      ++inside;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::point_outside_mesh) throw;
      // pull marginally exterior samples inward along the segment
      bool recovered = false;
      double shrink = 1.0;
      for (int attempt = 0; attempt < 60; ++attempt) {
        shrink *= (attempt < 30) ? 0.9999 : 0.99;
        try {
          profile.m3[i] = interpolate_at(mesh, field, {x * shrink, 0.0}).z();
          recovered = true;
          ++inside;
          break;
        } catch (const Error& inner) {
          if (inner.kind() != ErrorKind::point_outside_mesh) throw;
        }
      }
      if (!recovered) profile.m3[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (inside == 0)
    fail(ErrorKind::point_outside_mesh, "profile segment lies outside the mesh");
  // NaN gaps at the extreme ends copy their inner neighbor
  for (int i = 1; i < n_samples; ++i)
    if (std::isnan(profile.m3[i - 1]) && !std::isnan(profile.m3[i]))
      profile.m3[i - 1] = profile.m3[i];
  for (int i = n_samples - 2; i >= 0; --i)
    if (std::isnan(profile.m3[i + 1]) && !std::isnan(profile.m3[i]))
      profile.m3[i + 1] = profile.m3[i];
  return profile;
}

const char* to_string(SkyrmionClass cls) {
  switch (cls) {
    case SkyrmionClass::incomplete: return "incomplete";
    case SkyrmionClass::isolated: return "isolated";
    case SkyrmionClass::target: return "target";
  }
  return "?";
}

namespace {

// alternation count of the collapsed H/L band sequence along one half
int half_alternations(const Eigen::VectorXd& m3, int begin, int end, int stride,
                      double band_tol) {
  int alternations = 0;
  int last = 0;  // 0 none yet, +1 high band, -1 low band
  for (int i = begin; i != end; i += stride) {
    int band = 0;
    if (m3[i] >= 1.0 - band_tol) band = 1;
    else if (m3[i] <= -1.0 + band_tol) band = -1;
    if (band == 0) continue;
    if (last != 0 && band != last) ++alternations;
    last = band;
  }
  return alternations;
}

}  // namespace

Classification classify_skyrmion(const Profile& profile, double band_tol) {
  const int n = static_cast<int>(profile.m3.size());
  if (n < 2) fail(ErrorKind::invalid_parameter, "profile too short");

  // center sample = abscissa closest to 0
  int center = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(profile.x[i]) < std::abs(profile.x[center])) center = i;

  const int right = half_alternations(profile.m3, center, n, +1, band_tol);
  const int left = half_alternations(profile.m3, center, -1, -1, band_tol);

  Classification result;
  result.alternations = std::max(left, right);
  if (result.alternations == 0) result.cls = SkyrmionClass::incomplete;
  else if (result.alternations == 1) result.cls = SkyrmionClass::isolated;
  else result.cls = SkyrmionClass::target;
  return result;
}

std::string vtk_string(const TriMesh& mesh, const NodalField& field,
                       const std::string& title) {
  if (field.cols() != mesh.num_vertices())
    fail(ErrorKind::size_mismatch, "field size does not match mesh");
  std::string out;
  out.reserve(64 * mesh.num_vertices());
  char buf[160];

  out += "# vtk DataFile Version 2.0\n";
  out += title + "\n";
  out += "ASCII\n";
  out += "DATASET UNSTRUCTURED_GRID\n";
  std::snprintf(buf, sizeof buf, "POINTS %d float\n", mesh.num_vertices());
  out += buf;
  for (int z = 0; z < mesh.num_vertices(); ++z) {
    std::snprintf(buf, sizeof buf, "%.9e %.9e 0\n", mesh.vertices(0, z), mesh.vertices(1, z));
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "CELLS %d %d\n", mesh.num_triangles(),
                4 * mesh.num_triangles());
  out += buf;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    std::snprintf(buf, sizeof buf, "3 %d %d %d\n", mesh.triangles(0, k), mesh.triangles(1, k),
                  mesh.triangles(2, k));
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "CELL_TYPES %d\n", mesh.num_triangles());
  out += buf;
  for (int k = 0; k < mesh.num_triangles(); ++k) out += "5\n";
  std::snprintf(buf, sizeof buf, "POINT_DATA %d\n", mesh.num_vertices());
  out += buf;
  out += "VECTORS m float\n";
  for (int z = 0; z < mesh.num_vertices(); ++z) {
    std::snprintf(buf, sizeof buf, "%.9e %.9e %.9e\n", field(0, z), field(1, z), field(2, z));
    out += buf;
  }
  return out;
}

void write_vtk(const TriMesh& mesh, const NodalField& field, const std::string& path) {
  write_text_file(path, vtk_string(mesh, field));
}

std::string series_csv(const std::vector<StepDiagnostics>& series,
                       const std::vector<Vec3>& averages, double energy_scale) {
  if (averages.size() != series.size())
    fail(ErrorKind::size_mismatch, "series and averages length mismatch");
  std::string out =
      "step,time,exchange,dmi,pi,applied,constant,total,"
      "avg_m1,avg_m2,avg_m3,vmax,constraint_l1,energy_residual\n";
  char buf[512];
  for (size_t i = 0; i < series.size(); ++i) {
    const auto& d = series[i];
    const auto& e = d.energy;
    std::snprintf(buf, sizeof buf,
                  "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  d.step, d.time, e.exchange * energy_scale, e.dmi * energy_scale,
                  e.pi_term * energy_scale, e.applied_term * energy_scale,
                  e.constant_term * energy_scale, e.total * energy_scale, averages[i].x(),
                  averages[i].y(), averages[i].z(), d.vmax, d.constraint_l1,
                  d.energy_law_residual);
    out += buf;
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::io, "cannot open " + path + " for writing");
  file << content;
  if (!file) fail(ErrorKind::io, "failed writing " + path);
}

}  // namespace dmifilm
