#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cavesim/types.hpp"

namespace cavesim {

struct Rect {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains_strict(Vec2 p) const {
    return p.x > xmin && p.x < xmax && p.y > ymin && p.y < ymax;
  }
};

/// Growing extraction cavity: the rectangle
///   (x_start, x_start + rate * step) x (y_center - half_height, y_center + half_height).
/// At step 0 the interval is empty and nothing is carved.
struct CavitySpec {
  double x_start = -500.0;
  double rate = 40.0;  // horizontal growth per step [m]
  double half_height = 20.0;
  double y_center = 0.0;

  Rect rect_at(int step) const {
    return {x_start, x_start + rate * static_cast<double>(step),
            y_center - half_height, y_center + half_height};
  }
};

enum class BoundaryTag { Lat, Up, Down, Cav };

struct BoundaryEdge {
  int n0 = -1;
  int n1 = -1;
  int tri = -1;  // the adjacent active triangle
  BoundaryTag tag = BoundaryTag::Cav;
};

/// Structured triangulation of a rectangle with an element-deactivation mask
/// for the cavity. Node indexing is row-major and stays fixed across carving
/// steps, so nodal fields transfer without interpolation.
struct Mesh {
  Rect domain;
  int nx = 0;  // cells in x
  int ny = 0;  // cells in y
  double hx = 0.0;
  double hy = 0.0;
  double h = 0.0;  // characteristic size, max(hx, hy)

  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> tris;        // CCW connectivity
  std::vector<std::uint8_t> tri_active;
  std::vector<std::uint8_t> node_active;       // touches an active triangle
  std::vector<BoundaryEdge> boundary;          // boundary of the active region

  int node_count() const { return static_cast<int>(nodes.size()); }
  int tri_count() const { return static_cast<int>(tris.size()); }
  int active_tri_count() const;
  int active_node_count() const;
  double active_area() const;
  double carved_area() const;
};

/// Structured grid of rectangles, each split into two triangles along
/// alternating diagonals. The cell count per direction is rounded to the
/// nearest divisor of the side length; fewer than 4 cells in either direction
/// is rejected.
Mesh build_mesh(const Rect& domain, double h);

/// Deactivates every triangle whose centroid lies strictly inside the cavity
/// rectangle at the given step, then retags the boundary. Carving is
/// cumulative: previously deactivated triangles stay deactivated.
/// Rejects a cavity rectangle that is not strictly inside the domain.
Mesh carve_cavity(const Mesh& mesh, int step, const CavitySpec& spec);

/// Recomputes node_active and the tagged boundary of the active region:
/// edges on the outer rectangle get Lat/Up/Down, edges exposed by carving get
/// Cav. Throws if an active boundary edge fits neither case.
void tag_boundaries(Mesh& mesh);

struct P1Geometry {
  double area = 0.0;                 // [m^2]
  std::array<Vec2, 3> grad;          // constant shape-function gradients [1/m]
};

/// Area and shape-function gradients of a P1 triangle.
/// Throws for non-positive signed area.
P1Geometry p1_geometry(Vec2 a, Vec2 b, Vec2 c);
P1Geometry p1_geometry(const Mesh& mesh, int tri);

/// Assembles a mesh from explicit nodes and triangles (all active); used for
/// small hand-built patches. Connectivity must be CCW.
Mesh mesh_from_raw(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> tris,
                   const Rect& domain);

}  // namespace cavesim
