#include "phaserec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "phaserec/rng.hpp"

namespace phaserec {

bool ShapePrimitive::contains(double x, double y) const {
  switch (kind) {
    case Kind::Ellipse: {
      const double dx = (x - cx) / rx;
      const double dy = (y - cy) / ry;
      return dx * dx + dy * dy <= 1.0;
    }
    case Kind::Circle: {
      const double dx = x - cx;
      const double dy = y - cy;
      return dx * dx + dy * dy <= rx * rx;
    }
    case Kind::Polygon: {
      // Even-odd crossing rule.
      bool inside = false;
      const size_t n = polygon.size();
      for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const double xi = polygon[i][0], yi = polygon[i][1];
        const double xj = polygon[j][0], yj = polygon[j][1];
        const bool crosses = (yi > y) != (yj > y);
        if (crosses && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
      }
      return inside;
    }
  }
  return false;
}

void ShapeSpec::validate(const Mesh& mesh, int phases) const {
  auto check_label = [&](int label) {
    if (label < 1 || label > phases)
      throw std::invalid_argument("shape label " + std::to_string(label) + " outside 1.." +
                                  std::to_string(phases));
  };
  check_label(background_label);
  const double tol = 1e-12;
  auto inside_box = [&](double x, double y) {
    return x >= mesh.xmin - tol && x <= mesh.xmax + tol && y >= mesh.ymin - tol &&
           y <= mesh.ymax + tol;
  };
  for (const ShapePrimitive& p : primitives) {
    check_label(p.label);
    switch (p.kind) {
      case ShapePrimitive::Kind::Ellipse:
      case ShapePrimitive::Kind::Circle: {
        const double ry = (p.kind == ShapePrimitive::Kind::Circle) ? p.rx : p.ry;
        if (p.rx <= 0.0 || ry <= 0.0)
          throw std::invalid_argument("shape semi-axes must be positive");
        if (!inside_box(p.cx - p.rx, p.cy - ry) || !inside_box(p.cx + p.rx, p.cy + ry))
          throw std::invalid_argument("shape extends outside the domain");
        break;
      }
      case ShapePrimitive::Kind::Polygon: {
        if (p.polygon.size() < 3)
          throw std::invalid_argument("polygon needs at least 3 vertices");
        for (const auto& v : p.polygon)
          if (!inside_box(v[0], v[1]))
            throw std::invalid_argument("polygon vertex outside the domain");
        break;
      }
    }
  }
}

PhaseField rasterize_objective(const ShapeSpec& spec, const Mesh& mesh, int phases) {
  spec.validate(mesh, phases);
  const int n = mesh.num_vertices();
  PhaseField u(n, phases, 0.0);
  for (int j = 0; j < n; ++j) {
    const double x = mesh.vertices[j][0];
    const double y = mesh.vertices[j][1];
    int label = spec.background_label;
    for (const ShapePrimitive& p : spec.primitives)
      if (p.contains(x, y)) label = p.label;
    u.at(j, label - 1) = 1.0;
  }
  return u;
}

double boundary_flux(FluxCase c, double x, double y) {
  const double tol = 1e-12;
  const bool left = std::abs(x + 1.0) <= tol;
  const bool right = std::abs(x - 1.0) <= tol;
  const bool bottom = std::abs(y + 1.0) <= tol;
  const bool top = std::abs(y - 1.0) <= tol;
  if (!(left || right || bottom || top))
    throw std::invalid_argument("boundary_flux: point is not on the boundary of (-1,1)^2");
  double sum = 0.0;
  int sides = 0;
  auto add = [&](bool active, double value) {
    if (active) {
      sum += value;
      ++sides;
    }
  };
  switch (c) {
    case FluxCase::OpposingCorners:
      add(left, -0.5);
      add(bottom, -0.5);
      add(right, 0.5);
      add(top, 0.5);
      break;
    case FluxCase::TopBottom:
      add(left, 0.0);
      add(right, 0.0);
      add(bottom, -0.5);
      add(top, 0.5);
      break;
  }
  return sum / sides;
}

ScalarField boundary_flux_field(FluxCase c, const Mesh& mesh) {
  ScalarField g(mesh.num_vertices(), 0.0);
  std::vector<char> seen(mesh.num_vertices(), 0);
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    for (int v : {e.a, e.b}) {
      if (seen[v]) continue;
      seen[v] = 1;
      g[v] = boundary_flux(c, mesh.vertices[v][0], mesh.vertices[v][1]);
    }
  }
  return g;
}

ScalarField synthesize_observation(const Mesh& mesh, const PhaseField& u_obj,
                                   const CoefficientValues& a,
                                   const std::vector<double>& boundary_load,
                                   double noise_amplitude, std::uint64_t seed,
                                   const ObservationSpace& space) {
  ScalarField y = solve_state(mesh, u_obj, a, boundary_load, /*mean_target=*/0.0, space);
  if (noise_amplitude == 0.0) return y;
  Rng rng(seed);
  if (space.kind == ObservationKind::Bulk) {
    for (double& v : y) v += noise_amplitude * rng.normal();
  } else {
    std::vector<char> seen(mesh.num_vertices(), 0);
    for (const BoundaryEdge& e : mesh.boundary_edges) {
      seen[e.a] = 1;
      seen[e.b] = 1;
    }
    for (int j = 0; j < mesh.num_vertices(); ++j)
      if (seen[j]) y[j] += noise_amplitude * rng.normal();
  }
  return y;
}

double l1_mismatch(const Mesh& mesh, const PhaseField& u, const PhaseField& v) {
  if (u.num_nodes() != v.num_nodes() || u.phases() != v.phases())
    throw std::invalid_argument("l1_mismatch: mismatched field shapes");
  const std::vector<double> lumped = assemble_lumped_mass(mesh);
  double total = 0.0;
  for (int j = 0; j < u.num_nodes(); ++j) {
    double node_sum = 0.0;
    for (int i = 0; i < u.phases(); ++i) node_sum += std::abs(u.at(j, i) - v.at(j, i));
    total += lumped[j] * node_sum;
  }
  return total;
}

ComponentReport connected_components(const Mesh& mesh, const PhaseField& u, int phase,
                                     double threshold) {
  const int n = mesh.num_vertices();
  if (phase < 0 || phase >= u.phases())
    throw std::invalid_argument("connected_components: phase index out of range");

  std::vector<char> active(n, 0);
  for (int j = 0; j < n; ++j) active[j] = u.at(j, phase) > threshold ? 1 : 0;

  // Adjacency over mesh edges (CSR built from triangle edges).
  std::vector<int> degree(n, 0);
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      ++degree[t[k]];
      ++degree[t[(k + 1) % 3]];
    }
  std::vector<int> offsets(n + 1, 0);
  for (int j = 0; j < n; ++j) offsets[j + 1] = offsets[j] + degree[j];
  std::vector<int> adj(offsets[n]);
  std::vector<int> fill(n, 0);
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const int p = t[k], q = t[(k + 1) % 3];
      adj[offsets[p] + fill[p]++] = q;
      adj[offsets[q] + fill[q]++] = p;
    }

  ComponentReport report;
  std::vector<char> visited(n, 0);
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (!active[start] || visited[start]) continue;
    int size = 0;
    stack.push_back(start);
    visited[start] = 1;
    while (!stack.empty()) {
      const int j = stack.back();
      stack.pop_back();
      ++size;
      for (int k = offsets[j]; k < offsets[j + 1]; ++k) {
        const int q = adj[k];
        if (active[q] && !visited[q]) {
          visited[q] = 1;
          stack.push_back(q);
        }
      }
    }
    report.sizes.push_back(size);
  }
  std::sort(report.sizes.begin(), report.sizes.end(), std::greater<int>());
  report.count = static_cast<int>(report.sizes.size());
  return report;
}

}  // namespace phaserec
