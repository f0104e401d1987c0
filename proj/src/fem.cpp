#include "phaserec/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phaserec {

namespace {

// area and basis gradients of triangle t; grads[i] = grad of the hat
// function of local vertex i (constant on the element)
struct TriGeometry {
  double area;
  double gx[3];
  double gy[3];
};

TriGeometry tri_geometry(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const auto& p0 = mesh.vertices[tri[0]];
  const auto& p1 = mesh.vertices[tri[1]];
  const auto& p2 = mesh.vertices[tri[2]];
  const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  if (!(det > 0.0)) throw std::runtime_error("tri_geometry: degenerate or clockwise triangle");
  TriGeometry g;
  g.area = 0.5 * det;
  g.gx[0] = (p1[1] - p2[1]) / det;
  g.gx[1] = (p2[1] - p0[1]) / det;
  g.gx[2] = (p0[1] - p1[1]) / det;
  g.gy[0] = (p2[0] - p1[0]) / det;
  g.gy[1] = (p0[0] - p2[0]) / det;
  g.gy[2] = (p1[0] - p0[0]) / det;
  return g;
}

void check_field_size(const Mesh& mesh, const ScalarField& f, const char* where) {
  if (static_cast<int>(f.size()) != mesh.num_vertices())
    throw std::invalid_argument(std::string(where) + ": field length does not match mesh");
}

}  // namespace

CoefficientValues::CoefficientValues(std::vector<double> values) : a(std::move(values)) {
  if (a.size() < 2) throw std::invalid_argument("CoefficientValues: need at least two phases");
  a_min = a[0];
  a_max = a[0];
  double s = 0.0;
  for (double v : a) {
    if (!(v > 0.0)) throw std::invalid_argument("CoefficientValues: phase values must be positive");
    a_min = std::min(a_min, v);
    a_max = std::max(a_max, v);
    s += v * v;
  }
  a_hat = std::sqrt(s);
}

std::vector<double> PhaseField::component_copy(int phase) const {
  auto s = component(phase);
  return {s.begin(), s.end()};
}

void PhaseField::set_component(int phase, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != nodes_)
    throw std::invalid_argument("PhaseField::set_component: length mismatch");
  std::copy(values.begin(), values.end(), component(phase).begin());
}

double PhaseField::max_simplex_violation() const {
  double worst = 0.0;
  for (int j = 0; j < nodes_; ++j) {
    double sum = 0.0;
    for (int i = 0; i < r_; ++i) {
      const double v = at(j, i);
      sum += v;
      worst = std::max(worst, -v);
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

ScalarField diffusion_coefficient(const PhaseField& u, const CoefficientValues& a) {
  if (u.phases() != a.phases())
    throw std::invalid_argument("diffusion_coefficient: phase count mismatch");
  ScalarField c(u.num_nodes(), 0.0);
  for (int i = 0; i < a.phases(); ++i) {
    auto ui = u.component(i);
    for (int j = 0; j < u.num_nodes(); ++j) c[j] += a.a[i] * ui[j];
  }
  return c;
}

namespace {

SparseMatrix assemble_stiffness_impl(const Mesh& mesh, const ScalarField* coeff) {
  const int n = mesh.num_vertices();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(9) * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = tri_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    double c = 1.0;
    if (coeff) c = ((*coeff)[tri[0]] + (*coeff)[tri[1]] + (*coeff)[tri[2]]) / 3.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.push_back({tri[i], tri[j], c * g.area * (g.gx[i] * g.gx[j] + g.gy[i] * g.gy[j])});
  }
  return csr_from_triplets(n, n, std::move(trip));
}

}  // namespace

SparseMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& coeff) {
  check_field_size(mesh, coeff, "assemble_stiffness");
  for (double c : coeff)
    if (!(c > 0.0)) throw std::invalid_argument("assemble_stiffness: coefficient must be strictly positive");
  return assemble_stiffness_impl(mesh, &coeff);
}

SparseMatrix assemble_unit_stiffness(const Mesh& mesh) { return assemble_stiffness_impl(mesh, nullptr); }

SparseMatrix assemble_mass(const Mesh& mesh) {
  const int n = mesh.num_vertices();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(9) * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = mesh.triangle_area(t);
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trip.push_back({tri[i], tri[j], area * (i == j ? 2.0 : 1.0) / 12.0});
  }
  return csr_from_triplets(n, n, std::move(trip));
}

std::vector<double> assemble_lumped_mass(const Mesh& mesh) {
  std::vector<double> m(mesh.num_vertices(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double third = mesh.triangle_area(t) / 3.0;
    for (int i = 0; i < 3; ++i) m[mesh.triangles[t][i]] += third;
  }
  return m;
}

SparseMatrix assemble_boundary_mass(const Mesh& mesh) {
  const int n = mesh.num_vertices();
  std::vector<Triplet> trip;
  trip.reserve(4 * mesh.boundary_edges.size());
  for (const auto& e : mesh.boundary_edges) {
    const auto& pa = mesh.vertices[e.a];
    const auto& pb = mesh.vertices[e.b];
    const double len = std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
    trip.push_back({e.a, e.a, len / 3.0});
    trip.push_back({e.b, e.b, len / 3.0});
    trip.push_back({e.a, e.b, len / 6.0});
    trip.push_back({e.b, e.a, len / 6.0});
  }
  return csr_from_triplets(n, n, std::move(trip));
}

namespace {

std::vector<double> boundary_load_from_edges(const Mesh& mesh,
                                             const std::vector<std::array<double, 2>>& edge_values,
                                             const char* where) {
  std::vector<double> load(mesh.num_vertices(), 0.0);
  double integral = 0.0;
  double scale = 0.0;
  for (size_t k = 0; k < mesh.boundary_edges.size(); ++k) {
    const auto& e = mesh.boundary_edges[k];
    const auto& pa = mesh.vertices[e.a];
    const auto& pb = mesh.vertices[e.b];
    const double len = std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
    const double ga = edge_values[k][0];
    const double gb = edge_values[k][1];
    load[e.a] += len * (2.0 * ga + gb) / 6.0;
    load[e.b] += len * (ga + 2.0 * gb) / 6.0;
    integral += len * (ga + gb) / 2.0;
    scale += len * (std::abs(ga) + std::abs(gb)) / 2.0;
  }
  if (std::abs(integral) > 1e-10 * (1.0 + scale))
    throw std::invalid_argument(std::string(where) + ": boundary data violates the zero-mean compatibility condition");
  return load;
}

}  // namespace

std::vector<double> assemble_boundary_load(const Mesh& mesh, const ScalarField& g) {
  check_field_size(mesh, g, "assemble_boundary_load");
  std::vector<std::array<double, 2>> ev(mesh.boundary_edges.size());
  for (size_t k = 0; k < mesh.boundary_edges.size(); ++k)
    ev[k] = {g[mesh.boundary_edges[k].a], g[mesh.boundary_edges[k].b]};
  return boundary_load_from_edges(mesh, ev, "assemble_boundary_load");
}

std::vector<double> assemble_boundary_load_edges(const Mesh& mesh,
                                                 const std::vector<std::array<double, 2>>& edge_values) {
  if (edge_values.size() != mesh.boundary_edges.size())
    throw std::invalid_argument("assemble_boundary_load_edges: one value pair per boundary edge required");
  return boundary_load_from_edges(mesh, edge_values, "assemble_boundary_load_edges");
}

std::vector<double> gradient_pair_load(const Mesh& mesh, const ScalarField& y, const ScalarField& p) {
  check_field_size(mesh, y, "gradient_pair_load");
  check_field_size(mesh, p, "gradient_pair_load");
  std::vector<double> d(mesh.num_vertices(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = tri_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    double yx = 0.0, yy = 0.0, px = 0.0, py = 0.0;
    for (int i = 0; i < 3; ++i) {
      yx += y[tri[i]] * g.gx[i];
      yy += y[tri[i]] * g.gy[i];
      px += p[tri[i]] * g.gx[i];
      py += p[tri[i]] * g.gy[i];
    }
    const double q = g.area * (yx * px + yy * py) / 3.0;
    for (int i = 0; i < 3; ++i) d[tri[i]] += q;
  }
  return d;
}

std::vector<double> weighted_gradient_load(const Mesh& mesh, const ScalarField& coeff, const ScalarField& y) {
  check_field_size(mesh, coeff, "weighted_gradient_load");
  check_field_size(mesh, y, "weighted_gradient_load");
  std::vector<double> out(mesh.num_vertices(), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = tri_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    const double c = (coeff[tri[0]] + coeff[tri[1]] + coeff[tri[2]]) / 3.0;
    double yx = 0.0, yy = 0.0;
    for (int i = 0; i < 3; ++i) {
      yx += y[tri[i]] * g.gx[i];
      yy += y[tri[i]] * g.gy[i];
    }
    for (int i = 0; i < 3; ++i) out[tri[i]] += c * g.area * (yx * g.gx[i] + yy * g.gy[i]);
  }
  return out;
}

double gradient_energy(const Mesh& mesh, const ScalarField& f) {
  check_field_size(mesh, f, "gradient_energy");
  double s = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = tri_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    double fx = 0.0, fy = 0.0;
    for (int i = 0; i < 3; ++i) {
      fx += f[tri[i]] * g.gx[i];
      fy += f[tri[i]] * g.gy[i];
    }
    s += g.area * (fx * fx + fy * fy);
  }
  return s;
}

double max_gradient(const Mesh& mesh, const ScalarField& f) {
  check_field_size(mesh, f, "max_gradient");
  double worst = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = tri_geometry(mesh, t);
    const auto& tri = mesh.triangles[t];
    double fx = 0.0, fy = 0.0;
    for (int i = 0; i < 3; ++i) {
      fx += f[tri[i]] * g.gx[i];
      fy += f[tri[i]] * g.gy[i];
    }
    worst = std::max(worst, fx * fx + fy * fy);
  }
  return std::sqrt(worst);
}

double l2_norm_squared(const Mesh& mesh, const ScalarField& f) {
  check_field_size(mesh, f, "l2_norm_squared");
  double s = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = mesh.triangle_area(t);
    const auto& tri = mesh.triangles[t];
    const double f0 = f[tri[0]], f1 = f[tri[1]], f2 = f[tri[2]];
    s += area * (f0 * f0 + f1 * f1 + f2 * f2 + f0 * f1 + f0 * f2 + f1 * f2) / 6.0;
  }
  return s;
}

}  // namespace phaserec
