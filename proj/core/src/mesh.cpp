#include "cavesim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace cavesim {

int Mesh::active_tri_count() const {
  int n = 0;
  for (std::uint8_t a : tri_active) n += a ? 1 : 0;
  return n;
}

int Mesh::active_node_count() const {
  int n = 0;
  for (std::uint8_t a : node_active) n += a ? 1 : 0;
  return n;
}

double Mesh::active_area() const {
  double area = 0.0;
  for (int t = 0; t < tri_count(); ++t) {
    if (tri_active[t]) area += p1_geometry(*this, t).area;
  }
  return area;
}

double Mesh::carved_area() const {
  double area = 0.0;
  for (int t = 0; t < tri_count(); ++t) {
    if (!tri_active[t]) area += p1_geometry(*this, t).area;
  }
  return area;
}

P1Geometry p1_geometry(Vec2 a, Vec2 b, Vec2 c) {
  const double two_area = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  if (!(two_area > 0.0)) {
    throw std::invalid_argument("p1_geometry: non-positive triangle area");
  }
  P1Geometry g;
  g.area = 0.5 * two_area;
  g.grad[0] = {(b.y - c.y) / two_area, (c.x - b.x) / two_area};
  g.grad[1] = {(c.y - a.y) / two_area, (a.x - c.x) / two_area};
  g.grad[2] = {(a.y - b.y) / two_area, (b.x - a.x) / two_area};
  return g;
}

P1Geometry p1_geometry(const Mesh& mesh, int tri) {
  const auto& t = mesh.tris[tri];
  return p1_geometry(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
}

namespace {

std::uint64_t edge_key(int a, int b) {
  const std::uint32_t lo = static_cast<std::uint32_t>(std::min(a, b));
  const std::uint32_t hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

struct EdgeInfo {
  int active_count = 0;
  int total_count = 0;
  int active_tri = -1;
};

}  // namespace

void tag_boundaries(Mesh& mesh) {
  mesh.node_active.assign(mesh.nodes.size(), 0);
  std::unordered_map<std::uint64_t, EdgeInfo> edges;
  edges.reserve(mesh.tris.size() * 2);

  for (int t = 0; t < mesh.tri_count(); ++t) {
    const auto& tri = mesh.tris[t];
    const bool active = mesh.tri_active[t] != 0;
    if (active) {
      for (int k = 0; k < 3; ++k) mesh.node_active[tri[k]] = 1;
    }
    for (int k = 0; k < 3; ++k) {
      EdgeInfo& e = edges[edge_key(tri[k], tri[(k + 1) % 3])];
      ++e.total_count;
      if (active) {
        ++e.active_count;
        e.active_tri = t;
      }
    }
  }

  const double tol = 1e-9 * std::max(mesh.domain.width(), mesh.domain.height());
  mesh.boundary.clear();
  for (int t = 0; t < mesh.tri_count(); ++t) {
    if (!mesh.tri_active[t]) continue;
    const auto& tri = mesh.tris[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      const EdgeInfo& e = edges.at(edge_key(a, b));
      if (e.active_count != 1) continue;  // interior edge of the active region
      const Vec2 pa = mesh.nodes[a];
      const Vec2 pb = mesh.nodes[b];
      BoundaryTag tag;
      if (std::abs(pa.x - mesh.domain.xmin) < tol && std::abs(pb.x - mesh.domain.xmin) < tol) {
        tag = BoundaryTag::Lat;
      } else if (std::abs(pa.x - mesh.domain.xmax) < tol && std::abs(pb.x - mesh.domain.xmax) < tol) {
        tag = BoundaryTag::Lat;
      } else if (std::abs(pa.y - mesh.domain.ymax) < tol && std::abs(pb.y - mesh.domain.ymax) < tol) {
        tag = BoundaryTag::Up;
      } else if (std::abs(pa.y - mesh.domain.ymin) < tol && std::abs(pb.y - mesh.domain.ymin) < tol) {
        tag = BoundaryTag::Down;
      } else if (e.total_count == 2) {
        // Interior edge exposed by a deactivated neighbour.
        tag = BoundaryTag::Cav;
      } else {
        throw std::logic_error("tag_boundaries: active boundary edge with no tag");
      }
      mesh.boundary.push_back({a, b, t, tag});
    }
  }
}

Mesh build_mesh(const Rect& domain, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("build_mesh: h must be positive");
  if (!(domain.width() > 0.0 && domain.height() > 0.0)) {
    throw std::invalid_argument("build_mesh: empty domain");
  }
  const int nx = static_cast<int>(std::lround(domain.width() / h));
  const int ny = static_cast<int>(std::lround(domain.height() / h));
  if (nx < 4 || ny < 4) {
    throw std::invalid_argument(
        "build_mesh: h = " + std::to_string(h) +
        " yields fewer than 4 cells in one direction");
  }

  Mesh mesh;
  mesh.domain = domain;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.hx = domain.width() / nx;
  mesh.hy = domain.height() / ny;
  mesh.h = std::max(mesh.hx, mesh.hy);

  mesh.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    const double y = (j == ny) ? domain.ymax : domain.ymin + j * mesh.hy;
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? domain.xmax : domain.xmin + i * mesh.hx;
      mesh.nodes.push_back({x, y});
    }
  }

  const auto node_id = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.tris.reserve(static_cast<std::size_t>(nx) * ny * 2);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int bl = node_id(i, j);
      const int br = node_id(i + 1, j);
      const int tl = node_id(i, j + 1);
      const int tr = node_id(i + 1, j + 1);
      // Alternating diagonals reduce directional bias of the split.
      if ((i + j) % 2 == 0) {
        mesh.tris.push_back({bl, br, tr});
        mesh.tris.push_back({bl, tr, tl});
      } else {
        mesh.tris.push_back({bl, br, tl});
        mesh.tris.push_back({br, tr, tl});
      }
    }
  }
  mesh.tri_active.assign(mesh.tris.size(), 1);
  tag_boundaries(mesh);
  return mesh;
}

Mesh carve_cavity(const Mesh& mesh, int step, const CavitySpec& spec) {
  if (step < 0) throw std::invalid_argument("carve_cavity: negative step");
  Mesh out = mesh;
  const Rect cavity = spec.rect_at(step);
  if (cavity.width() <= 0.0) {
    tag_boundaries(out);
    return out;
  }
  const Rect& d = mesh.domain;
  if (!(cavity.xmin > d.xmin && cavity.xmax < d.xmax && cavity.ymin > d.ymin &&
        cavity.ymax < d.ymax)) {
    throw std::invalid_argument("carve_cavity: cavity extends outside the domain");
  }
  for (int t = 0; t < out.tri_count(); ++t) {
    if (!out.tri_active[t]) continue;
    const auto& tri = out.tris[t];
    const Vec2 centroid = (1.0 / 3.0) * (out.nodes[tri[0]] + out.nodes[tri[1]] +
                                         out.nodes[tri[2]]);
    if (cavity.contains_strict(centroid)) out.tri_active[t] = 0;
  }
  tag_boundaries(out);
  return out;
}

Mesh mesh_from_raw(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> tris,
                   const Rect& domain) {
  Mesh mesh;
  mesh.domain = domain;
  mesh.nodes = std::move(nodes);
  mesh.tris = std::move(tris);
  mesh.tri_active.assign(mesh.tris.size(), 1);
  double hmax = 0.0;
  for (int t = 0; t < mesh.tri_count(); ++t) {
    const P1Geometry g = p1_geometry(mesh, t);  // validates orientation
    hmax = std::max(hmax, std::sqrt(2.0 * g.area));
  }
  mesh.hx = mesh.hy = mesh.h = hmax;
  tag_boundaries(mesh);
  return mesh;
}

}  // namespace cavesim
