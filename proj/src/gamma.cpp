#include "phaserec/gamma.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "phaserec/objective.hpp"

namespace phaserec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double optimal_profile(double tau, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("optimal_profile: eps must be positive");
  if (tau <= 0.0) return 0.0;
  if (tau >= eps * kPi) return 1.0;
  return 0.5 * (1.0 + std::sin(tau / eps - kPi / 2.0));
}

double linear_profile(double tau, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("linear_profile: eps must be positive");
  if (tau <= 0.0) return 0.0;
  if (tau >= eps * kPi) return 1.0;
  return tau / (eps * kPi);
}

namespace {

// Distance from p to the ray {t * d : t >= 0} with |d| = 1.
double ray_distance(double px, double py, double dx, double dy) {
  const double t = px * dx + py * dy;
  if (t <= 0.0) return std::hypot(px, py);
  return std::abs(px * dy - py * dx);
}

}  // namespace

double SignedDistanceFn::operator()(double x, double y) const {
  switch (kind) {
    case Kind::HalfPlane: {
      const double len = std::hypot(nx, ny);
      return (nx * x + ny * y - offset) / len;
    }
    case Kind::Circle:
      return std::hypot(x - cx, y - cy) - radius;
    case Kind::Sector: {
      const double px = x - cx;
      const double py = y - cy;
      const double d0x = std::cos(angle0), d0y = std::sin(angle0);
      const double d1x = std::cos(angle1), d1y = std::sin(angle1);
      // Inside the wedge (span <= pi): left of the first ray, right of the
      // second.
      const bool inside = (d0x * py - d0y * px) >= 0.0 && (px * d1y - py * d1x) >= 0.0;
      const double d = std::min(ray_distance(px, py, d0x, d0y), ray_distance(px, py, d1x, d1y));
      return inside ? -d : d;
    }
  }
  return 0.0;
}

void PartitionSpec::validate() const {
  if (phases < 2) throw std::invalid_argument("partition needs at least 2 phases");
  if (static_cast<int>(distances.size()) != phases - 1)
    throw std::invalid_argument("partition needs one signed distance per phase except the last");
}

PartitionSpec vertical_interface(double x0) {
  PartitionSpec spec;
  spec.phases = 2;
  SignedDistanceFn h;
  h.kind = SignedDistanceFn::Kind::HalfPlane;
  h.nx = 1.0;
  h.ny = 0.0;
  h.offset = x0;
  spec.distances = {h};
  return spec;
}

PartitionSpec circle_partition(double cx, double cy, double radius) {
  PartitionSpec spec;
  spec.phases = 2;
  SignedDistanceFn h;
  h.kind = SignedDistanceFn::Kind::Circle;
  h.cx = cx;
  h.cy = cy;
  h.radius = radius;
  spec.distances = {h};
  return spec;
}

PartitionSpec triple_junction() {
  PartitionSpec spec;
  spec.phases = 3;
  SignedDistanceFn h1;
  h1.kind = SignedDistanceFn::Kind::Sector;
  h1.angle0 = kPi / 2.0;          // 90 deg
  h1.angle1 = 7.0 * kPi / 6.0;    // 210 deg
  SignedDistanceFn h2;
  h2.kind = SignedDistanceFn::Kind::Sector;
  h2.angle0 = 7.0 * kPi / 6.0;    // 210 deg
  h2.angle1 = 11.0 * kPi / 6.0;   // 330 deg
  spec.distances = {h1, h2};
  return spec;
}

double sharp_limit_vertical_interface() {
  // Interface length 2, two phases share it: (pi/8) * 2 * 2.
  return kPi / 2.0;
}

double sharp_limit_circle(double radius) {
  return (kPi / 8.0) * 2.0 * (2.0 * kPi * radius);
}

double sharp_limit_triple_junction() {
  // Rays at 90/210/330 deg from the origin hit the unit box at lengths
  // 1, 2/sqrt(3), 2/sqrt(3); each interface separates two phases.
  const double total_length = 1.0 + 4.0 / std::sqrt(3.0);
  return (kPi / 8.0) * 2.0 * total_length;
}

PhaseField recovery_sequence(const PartitionSpec& spec, double eps, const Mesh& mesh) {
  spec.validate();
  if (eps <= 0.0) throw std::invalid_argument("recovery_sequence: eps must be positive");
  const int r = spec.phases;
  const int n = mesh.num_vertices();
  PhaseField u(n, r, 0.0);
  for (int j = 0; j < n; ++j) {
    const double x = mesh.vertices[j][0];
    const double y = mesh.vertices[j][1];
    double prefix = 1.0;
    for (int i = 0; i + 1 < r; ++i) {
      const double phi = optimal_profile(spec.distances[i](x, y), eps);
      u.at(j, i) = prefix * (1.0 - phi);
      prefix *= phi;
    }
    u.at(j, r - 1) = prefix;
  }
  return u;
}

double evaluate_relaxed_perimeter(const PhaseField& u, double eps, const Mesh& mesh) {
  if (eps <= 0.0) throw std::invalid_argument("evaluate_relaxed_perimeter: eps must be positive");
  return phase_field_energy(mesh, u, eps);
}

int mesh_subdivisions_for_eps(double eps, double factor) {
  if (eps <= 0.0 || factor <= 0.0)
    throw std::invalid_argument("mesh_subdivisions_for_eps: eps and factor must be positive");
  return static_cast<int>(std::ceil(factor * std::sqrt(2.0) / eps));
}

std::vector<GammaRow> gamma_sweep(const PartitionSpec& spec, const std::vector<double>& eps_values,
                                  double sharp_limit, double resolution_factor) {
  spec.validate();
  if (resolution_factor < 8.0)
    throw std::invalid_argument("gamma_sweep: resolution factor below 8 violates h <= eps/8");
  std::vector<GammaRow> rows;
  rows.reserve(eps_values.size());
  for (double eps : eps_values) {
    GammaRow row;
    row.eps = eps;
    row.mesh_n = mesh_subdivisions_for_eps(eps, resolution_factor);
    const Mesh mesh = build_structured_mesh(-1.0, 1.0, -1.0, 1.0, row.mesh_n);
    const PhaseField u = recovery_sequence(spec, eps, mesh);
    row.f_eps = evaluate_relaxed_perimeter(u, eps, mesh);
    row.f_sharp = sharp_limit;
    row.gap = (row.f_eps - sharp_limit) / sharp_limit;
    rows.push_back(row);
  }
  return rows;
}

void write_gamma_csv(const std::vector<GammaRow>& rows, std::ostream& out) {
  out << "eps,f_eps,f_sharp,gap\n";
  char buf[160];
  for (const GammaRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", r.eps, r.f_eps, r.f_sharp, r.gap);
    out << buf;
  }
}

void write_gamma_csv(const std::vector<GammaRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_gamma_csv(rows, out);
}

}  // namespace phaserec
