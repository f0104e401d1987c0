#include "phaserec/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace phaserec {

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const auto& p0 = vertices[tri[0]];
  const auto& p1 = vertices[tri[1]];
  const auto& p2 = vertices[tri[2]];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

double Mesh::total_area() const {
  double s = 0.0;
  for (int t = 0; t < num_triangles(); ++t) s += triangle_area(t);
  return s;
}

double Mesh::boundary_length() const {
  double s = 0.0;
  for (const auto& e : boundary_edges) {
    const auto& pa = vertices[e.a];
    const auto& pb = vertices[e.b];
    s += std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
  }
  return s;
}

Mesh build_structured_mesh(double xmin, double xmax, double ymin, double ymax, int n) {
  if (n < 1) throw std::invalid_argument("build_structured_mesh: n must be >= 1");
  if (!(xmax > xmin) || !(ymax > ymin))
    throw std::invalid_argument("build_structured_mesh: empty extents");

  const int nx = std::max(1, static_cast<int>(std::lround((xmax - xmin) * n)));
  const int ny = std::max(1, static_cast<int>(std::lround((ymax - ymin) * n)));
  const double dx = (xmax - xmin) / nx;
  const double dy = (ymax - ymin) / ny;

  Mesh mesh;
  mesh.xmin = xmin;
  mesh.xmax = xmax;
  mesh.ymin = ymin;
  mesh.ymax = ymax;
  mesh.h = std::hypot(dx, dy);
  mesh.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int iy = 0; iy <= ny; ++iy) {
    const double y = (iy == ny) ? ymax : ymin + iy * dy;
    for (int ix = 0; ix <= nx; ++ix) {
      const double x = (ix == nx) ? xmax : xmin + ix * dx;
      mesh.vertices.push_back({x, y});
    }
  }

  auto vid = [nx](int ix, int iy) { return iy * (nx + 1) + ix; };
  mesh.triangles.reserve(static_cast<size_t>(2) * nx * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int v00 = vid(ix, iy);
      const int v10 = vid(ix + 1, iy);
      const int v01 = vid(ix, iy + 1);
      const int v11 = vid(ix + 1, iy + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }

  // counter-clockwise boundary walk: bottom, right, top, left
  mesh.boundary_edges.reserve(static_cast<size_t>(2) * (nx + ny));
  for (int ix = 0; ix < nx; ++ix)
    mesh.boundary_edges.push_back({vid(ix, 0), vid(ix + 1, 0), BoundarySide::Bottom});
  for (int iy = 0; iy < ny; ++iy)
    mesh.boundary_edges.push_back({vid(nx, iy), vid(nx, iy + 1), BoundarySide::Right});
  for (int ix = nx; ix > 0; --ix)
    mesh.boundary_edges.push_back({vid(ix, ny), vid(ix - 1, ny), BoundarySide::Top});
  for (int iy = ny; iy > 0; --iy)
    mesh.boundary_edges.push_back({vid(0, iy), vid(0, iy - 1), BoundarySide::Left});
  return mesh;
}

std::vector<int> boundary_trace_indices(const Mesh& mesh) {
  // boundary_edges already form a closed CCW walk starting at the
  // bottom-left corner; emit the first vertex of each edge.
  std::vector<int> trace;
  trace.reserve(mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) trace.push_back(e.a);
  return trace;
}

void write_vtk(const Mesh& mesh, const std::vector<std::pair<std::string, std::vector<double>>>& point_fields,
               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open " + path);
  char buf[64];
  out << "# vtk DataFile Version 3.0\n";
  out << "phaserec field export\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.12g %.12g 0\n", v[0], v[1]);
    out << buf;
  }
  out << "CELLS " << mesh.num_triangles() << " " << 4 * mesh.num_triangles() << "\n";
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.num_triangles() << "\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) out << "5\n";
  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.num_vertices() << "\n";
    for (const auto& [name, values] : point_fields) {
      if (static_cast<int>(values.size()) != mesh.num_vertices())
        throw std::invalid_argument("write_vtk: field '" + name + "' has wrong length");
      out << "SCALARS " << name << " double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.12g\n", v);
        out << buf;
      }
    }
  }
  if (!out) throw std::runtime_error("write_vtk: write failed for " + path);
}

}  // namespace phaserec
