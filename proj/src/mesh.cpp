#include "dmifilm/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "dmifilm/error.hpp"

namespace dmifilm {

namespace {

// Undirected edge key with the directed multiplicity needed by the
// conformity check: a ccw triangulation traverses each interior edge once
// in each direction and each boundary edge exactly once.
struct EdgeUse {
  int count = 0;
  int forward = 0;  // uses with a < b in traversal order
};

std::map<std::pair<int, int>, EdgeUse> collect_edges(
    const Eigen::Matrix<int, 3, Eigen::Dynamic>& triangles) {
  std::map<std::pair<int, int>, EdgeUse> edges;
  for (int k = 0; k < triangles.cols(); ++k) {
    for (int e = 0; e < 3; ++e) {
      const int a = triangles(e, k);
      const int b = triangles((e + 1) % 3, k);
      auto& use = edges[{std::min(a, b), std::max(a, b)}];
      ++use.count;
      if (a < b) ++use.forward;
    }
  }
  return edges;
}

}  // namespace

TriMesh make_mesh(Eigen::Matrix2Xd vertices,
                  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles) {
  const int nv = static_cast<int>(vertices.cols());
  const int nt = static_cast<int>(triangles.cols());
  if (nv < 3 || nt < 1)
    fail(ErrorKind::topology, "mesh needs at least 3 vertices and 1 triangle");

  TriMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);

  std::vector<char> referenced(nv, 0);
  for (int k = 0; k < nt; ++k) {
    for (int e = 0; e < 3; ++e) {
      const int v = mesh.triangles(e, k);
      if (v < 0 || v >= nv)
        fail(ErrorKind::topology,
             "triangle " + std::to_string(k) + " references vertex " +
                 std::to_string(v) + " out of range");
      referenced[v] = 1;
    }
    if (mesh.triangles(0, k) == mesh.triangles(1, k) ||
        mesh.triangles(1, k) == mesh.triangles(2, k) ||
        mesh.triangles(0, k) == mesh.triangles(2, k))
      fail(ErrorKind::topology,
           "triangle " + std::to_string(k) + " has repeated vertices");
    if (mesh.triangle_area(k) <= 0)
      fail(ErrorKind::topology,
           "triangle " + std::to_string(k) +
               " has non-positive area (orientation must be ccw)");
  }
  for (int v = 0; v < nv; ++v)
    if (!referenced[v])
      fail(ErrorKind::topology,
           "vertex " + std::to_string(v) + " is not referenced by any triangle");

  const auto edges = collect_edges(mesh.triangles);
  std::vector<char> on_boundary(nv, 0);
  for (const auto& [key, use] : edges) {
    if (use.count > 2)
      fail(ErrorKind::topology, "edge shared by more than 2 triangles");
    if (use.count == 2 && use.forward != 1)
      fail(ErrorKind::topology, "interior edge traversed twice in the same direction");
    if (use.count == 1) {
      on_boundary[key.first] = 1;
      on_boundary[key.second] = 1;
    }
  }
  for (int v = 0; v < nv; ++v)
    if (on_boundary[v]) mesh.boundary_vertices.push_back(v);

  return mesh;
}

TriMesh generate_disk(double diameter, double target_h) {
  if (!(diameter > 0) || !(target_h > 0) || !(target_h < diameter / 2))
    fail(ErrorKind::invalid_parameter,
         "generate_disk requires diameter > 0 and 0 < target_h < diameter/2");

  const double radius = diameter / 2;
  const double dr0 = target_h * std::numbers::sqrt3 / 2;
  const int n_rings = std::max(1, static_cast<int>(std::ceil(radius / dr0 - 1e-12)));
  const double dr = radius / n_rings;

  std::vector<int> ring_start(n_rings + 1);  // first vertex index of ring j
  std::vector<int> ring_count(n_rings + 1);
  ring_start[0] = 0;
  ring_count[0] = 1;  // center vertex

  std::vector<Eigen::Vector2d> pts;
  pts.emplace_back(0.0, 0.0);
  for (int j = 1; j <= n_rings; ++j) {
    const double r = j * dr;
    const int n = std::max(3, static_cast<int>(std::lround(2 * std::numbers::pi * r / dr)));
    ring_start[j] = static_cast<int>(pts.size());
    ring_count[j] = n;
    for (int k = 0; k < n; ++k) {
      const double phi = 2 * std::numbers::pi * k / n;
      pts.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
  }

  std::vector<Eigen::Vector3i> tris;
  // center fan
  for (int k = 0; k < ring_count[1]; ++k) {
    tris.emplace_back(0, ring_start[1] + k, ring_start[1] + (k + 1) % ring_count[1]);
  }
  // annuli: merge the two uniform angle sequences, advancing whichever
  // pointer has the smaller next angle; ties advance the outer ring
  for (int j = 2; j <= n_rings; ++j) {
    const int na = ring_count[j - 1], sa = ring_start[j - 1];
    const int nb = ring_count[j], sb = ring_start[j];
    int i = 0, k = 0;
    while (i < na || k < nb) {
      const double next_inner = 2 * std::numbers::pi * (i + 1) / na;
      const double next_outer = 2 * std::numbers::pi * (k + 1) / nb;
      const bool advance_outer = (k < nb) && (i == na || next_outer <= next_inner);
      if (advance_outer) {
        tris.emplace_back(sa + i % na, sb + k, sb + (k + 1) % nb);
        ++k;
      } else {
        tris.emplace_back(sa + i, sb + k % nb, sa + (i + 1) % na);
        ++i;
      }
    }
  }

  Eigen::Matrix2Xd vertices(2, pts.size());
  for (size_t i = 0; i < pts.size(); ++i) vertices.col(i) = pts[i];
  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles(3, tris.size());
  for (size_t i = 0; i < tris.size(); ++i) triangles.col(i) = tris[i];
  return make_mesh(std::move(vertices), std::move(triangles));
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  // Next non-empty line; trailing '\r' stripped. Returns false at EOF.
  bool next(std::string& line) {
    while (pos_ < text_.size()) {
      size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      line.assign(text_.substr(pos_, end - pos_));
      pos_ = end + 1;
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line.find_first_not_of(" \t") != std::string::npos)
        return true;
    }
    return false;
  }

  int lineno() const { return lineno_; }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  int lineno_ = 0;
};

[[noreturn]] void parse_fail(const LineReader& reader, const std::string& what) {
  fail(ErrorKind::parse, "line " + std::to_string(reader.lineno()) + ": " + what);
}

}  // namespace

TriMesh parse_native(std::string_view text) {
  LineReader reader(text);
  std::string line;

  if (!reader.next(line) || line != "dmimesh 1")
    parse_fail(reader, "expected header \"dmimesh 1\"");

  long nv = 0;
  if (!reader.next(line) || std::sscanf(line.c_str(), "vertices %ld", &nv) != 1 || nv < 0)
    parse_fail(reader, "expected \"vertices N\"");

  Eigen::Matrix2Xd vertices(2, nv);
  for (long i = 0; i < nv; ++i) {
    double x, y;
    if (!reader.next(line))
      parse_fail(reader, "unexpected end of input while reading vertices");
    if (std::sscanf(line.c_str(), "%lf %lf", &x, &y) != 2)
      parse_fail(reader, "expected vertex coordinates \"x y\"");
    vertices(0, i) = x;
    vertices(1, i) = y;
  }

  long nt = 0;
  if (!reader.next(line) || std::sscanf(line.c_str(), "triangles %ld", &nt) != 1 || nt < 0)
    parse_fail(reader, "expected \"triangles M\"");

  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles(3, nt);
  for (long k = 0; k < nt; ++k) {
    long a, b, c;
    if (!reader.next(line))
      parse_fail(reader, "unexpected end of input while reading triangles");
    if (std::sscanf(line.c_str(), "%ld %ld %ld", &a, &b, &c) != 3)
      parse_fail(reader, "expected triangle indices \"i j k\"");
    triangles(0, k) = static_cast<int>(a);
    triangles(1, k) = static_cast<int>(b);
    triangles(2, k) = static_cast<int>(c);
  }

  return make_mesh(std::move(vertices), std::move(triangles));
}

std::string write_native(const TriMesh& mesh) {
  std::string out;
  out.reserve(32 * mesh.num_vertices() + 16 * mesh.num_triangles());
  char buf[96];
  out += "dmimesh 1\n";
  std::snprintf(buf, sizeof buf, "vertices %d\n", mesh.num_vertices());
  out += buf;
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", mesh.vertices(0, i), mesh.vertices(1, i));
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "triangles %d\n", mesh.num_triangles());
  out += buf;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    std::snprintf(buf, sizeof buf, "%d %d %d\n", mesh.triangles(0, k), mesh.triangles(1, k),
                  mesh.triangles(2, k));
    out += buf;
  }
  return out;
}

TriMesh parse_msh2(std::string_view text) {
  LineReader reader(text);
  std::string line;

  std::unordered_map<long, int> node_order;       // gmsh id -> position in $Nodes
  std::vector<Eigen::Vector2d> node_coords;       // by position
  std::vector<std::array<long, 3>> raw_triangles;  // gmsh node ids
  bool saw_nodes = false, saw_elements = false;

  while (reader.next(line)) {
    if (line == "$MeshFormat") {
      if (!reader.next(line)) parse_fail(reader, "truncated $MeshFormat section");
      double version = 0;
      int file_type = 0, data_size = 0;
      if (std::sscanf(line.c_str(), "%lf %d %d", &version, &file_type, &data_size) < 1)
        parse_fail(reader, "malformed $MeshFormat line");
      if (std::abs(version - 2.2) > 1e-9)
        parse_fail(reader, "unsupported version (expected 2.2)");
      if (file_type != 0) parse_fail(reader, "binary MSH files are not supported");
      if (!reader.next(line) || line != "$EndMeshFormat")
        parse_fail(reader, "expected $EndMeshFormat");
    } else if (line == "$Nodes") {
      saw_nodes = true;
      long n = 0;
      if (!reader.next(line) || std::sscanf(line.c_str(), "%ld", &n) != 1 || n < 0)
        parse_fail(reader, "expected node count");
      for (long i = 0; i < n; ++i) {
        long id;
        double x, y, z;
        if (!reader.next(line)) parse_fail(reader, "truncated $Nodes section");
        if (std::sscanf(line.c_str(), "%ld %lf %lf %lf", &id, &x, &y, &z) != 4)
          parse_fail(reader, "malformed node line");
        node_order.emplace(id, static_cast<int>(node_coords.size()));
        node_coords.emplace_back(x, y);
      }
      if (!reader.next(line) || line != "$EndNodes")
        parse_fail(reader, "expected $EndNodes");
    } else if (line == "$Elements") {
      saw_elements = true;
      long n = 0;
      if (!reader.next(line) || std::sscanf(line.c_str(), "%ld", &n) != 1 || n < 0)
        parse_fail(reader, "expected element count");
      for (long i = 0; i < n; ++i) {
        if (!reader.next(line)) parse_fail(reader, "truncated $Elements section");
        std::istringstream iss(line);
        long id = 0, type = 0, ntags = 0;
        if (!(iss >> id >> type >> ntags))
          parse_fail(reader, "malformed element line");
        long tag;
        for (long t = 0; t < ntags; ++t)
          if (!(iss >> tag)) parse_fail(reader, "malformed element tags");
        if (type == 2) {
          std::array<long, 3> nodes;
          if (!(iss >> nodes[0] >> nodes[1] >> nodes[2]))
            parse_fail(reader, "triangle element with missing nodes");
          raw_triangles.push_back(nodes);
        }
        // other element types are ignored
      }
      if (!reader.next(line) || line != "$EndElements")
        parse_fail(reader, "expected $EndElements");
    } else if (line[0] == '$' && line.substr(0, 4) != "$End") {
      // skip unknown section
      const std::string end = "$End" + line.substr(1);
      while (reader.next(line) && line != end) {
      }
    }
  }

  if (!saw_nodes || !saw_elements)
    fail(ErrorKind::parse, "missing $Nodes or $Elements section");
  if (raw_triangles.empty())
    fail(ErrorKind::empty_mesh, "no triangle (type 2) elements in file");

  // dense renumbering of referenced nodes, in $Nodes file order
  std::vector<char> used(node_coords.size(), 0);
  for (const auto& t : raw_triangles)
    for (long id : t) {
      auto it = node_order.find(id);
      if (it == node_order.end())
        fail(ErrorKind::parse, "element references unknown node " + std::to_string(id));
      used[it->second] = 1;
    }
  std::vector<int> dense(node_coords.size(), -1);
  int next = 0;
  for (size_t i = 0; i < node_coords.size(); ++i)
    if (used[i]) dense[i] = next++;

  Eigen::Matrix2Xd vertices(2, next);
  for (size_t i = 0; i < node_coords.size(); ++i)
    if (used[i]) vertices.col(dense[i]) = node_coords[i];

  Eigen::Matrix<int, 3, Eigen::Dynamic> triangles(3, raw_triangles.size());
  for (size_t k = 0; k < raw_triangles.size(); ++k) {
    for (int e = 0; e < 3; ++e)
      triangles(e, k) = dense[node_order.at(raw_triangles[k][e])];
    // external generators do not guarantee orientation; normalize to ccw
    const Eigen::Vector2d a = vertices.col(triangles(0, k));
    const Eigen::Vector2d b = vertices.col(triangles(1, k));
    const Eigen::Vector2d c = vertices.col(triangles(2, k));
    const double area2 = (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    if (area2 < 0) std::swap(triangles(1, k), triangles(2, k));
  }

  return make_mesh(std::move(vertices), std::move(triangles));
}

MeshStats mesh_stats(const TriMesh& mesh) {
  MeshStats stats;
  stats.n_vertices = mesh.num_vertices();
  stats.n_triangles = mesh.num_triangles();
  stats.h_max = 0;
  stats.h_min = std::numeric_limits<double>::infinity();
  stats.min_angle = std::numbers::pi;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    const Eigen::Vector2d p[3] = {mesh.vertices.col(mesh.triangles(0, k)),
                                  mesh.vertices.col(mesh.triangles(1, k)),
                                  mesh.vertices.col(mesh.triangles(2, k))};
    stats.total_area += mesh.triangle_area(k);
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d u = p[(e + 1) % 3] - p[e];
      const Eigen::Vector2d v = p[(e + 2) % 3] - p[e];
      const double len = u.norm();
      stats.h_max = std::max(stats.h_max, len);
      stats.h_min = std::min(stats.h_min, len);
      const double angle =
          std::atan2(std::abs(u.x() * v.y() - u.y() * v.x()), u.dot(v));
      stats.min_angle = std::min(stats.min_angle, angle);
    }
  }
  return stats;
}

std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh) {
  // directed boundary edges (a -> b appearing exactly once)
  std::map<std::pair<int, int>, int> counts;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.triangles(e, k);
      const int b = mesh.triangles((e + 1) % 3, k);
      counts[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  std::unordered_map<int, int> succ;
  for (int k = 0; k < mesh.num_triangles(); ++k) {
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.triangles(e, k);
      const int b = mesh.triangles((e + 1) % 3, k);
      if (counts.at({std::min(a, b), std::max(a, b)}) == 1) succ[a] = b;
    }
  }

  std::vector<std::vector<int>> loops;
  std::unordered_map<int, char> visited;
  for (const auto& entry : succ) {
    const int start = entry.first;
    if (visited.count(start)) continue;
    std::vector<int> loop;
    int v = start;
    do {
      loop.push_back(v);
      visited[v] = 1;
      auto it = succ.find(v);
      if (it == succ.end())
        fail(ErrorKind::topology, "boundary is not a closed loop");
      v = it->second;
    } while (v != start);
    // canonical rotation: begin at the smallest vertex index
    const auto lo = std::min_element(loop.begin(), loop.end());
    std::rotate(loop.begin(), lo, loop.end());
    loops.push_back(std::move(loop));
  }
  // deterministic order: by smallest vertex index
  std::sort(loops.begin(), loops.end(),
            [](const auto& a, const auto& b) {
              return *std::min_element(a.begin(), a.end()) <
                     *std::min_element(b.begin(), b.end());
            });
  return loops;
}

double boundary_polygon_area(const TriMesh& mesh) {
  double area = 0;
  for (const auto& loop : boundary_loops(mesh)) {
    const size_t n = loop.size();
    for (size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d a = mesh.vertices.col(loop[i]);
      const Eigen::Vector2d b = mesh.vertices.col(loop[(i + 1) % n]);
      area += 0.5 * (a.x() * b.y() - a.y() * b.x());
    }
  }
  return area;
}

}  // namespace dmifilm
