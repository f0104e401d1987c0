#pragma once

#include <array>
#include <string>
#include <vector>

namespace phaserec {

enum class BoundarySide { Left, Right, Bottom, Top };

/// Oriented boundary edge (a -> b counter-clockwise around the domain).
struct BoundaryEdge {
  int a;
  int b;
  BoundarySide side;
};

/// Conforming triangulation of an axis-aligned rectangle.
/// Triangles are counter-clockwise; boundary edges carry the side they lie on.
struct Mesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;  // nominal element diameter (cell diagonal)
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  double triangle_area(int t) const;
  double total_area() const;
  double boundary_length() const;
};

/// Uniform grid of squares, each split along the bottom-left/top-right
/// diagonal. n is the subdivision count per unit length; extents that are
/// not multiples of 1/n are tiled with the nearest integer cell count.
Mesh build_structured_mesh(double xmin, double xmax, double ymin, double ymax, int n);

/// Indices of boundary vertices ordered by a counter-clockwise traversal
/// of the boundary polygon, starting at the bottom-left corner.
std::vector<int> boundary_trace_indices(const Mesh& mesh);

/// Legacy ASCII VTK (UNSTRUCTURED_GRID) with one scalar point field per entry.
void write_vtk(const Mesh& mesh, const std::vector<std::pair<std::string, std::vector<double>>>& point_fields,
               const std::string& path);

}  // namespace phaserec
