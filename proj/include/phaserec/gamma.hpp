#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "phaserec/fem.hpp"
#include "phaserec/mesh.hpp"

namespace phaserec {

/// Monotone interface profile: 0 for tau <= 0, 1 for tau >= eps*pi,
/// (1 + sin(tau/eps - pi/2)) / 2 across the transition layer.
double optimal_profile(double tau, double eps);

/// Linear ramp over the same layer width (non-optimal comparison profile).
double linear_profile(double tau, double eps);

/// Analytic signed distance to the boundary of a planar region
/// (negative inside, positive outside).
struct SignedDistanceFn {
  enum class Kind { HalfPlane, Circle, Sector };
  Kind kind = Kind::HalfPlane;
  // HalfPlane: region {n . x < offset}; (nx, ny) normalized at evaluation.
  double nx = 1.0, ny = 0.0, offset = 0.0;
  // Circle: region inside radius around (cx, cy).
  // Sector: angular wedge [angle0, angle1] (radians, span <= pi) with apex
  // (cx, cy); distance is to the two bounding rays.
  double cx = 0.0, cy = 0.0, radius = 0.0;
  double angle0 = 0.0, angle1 = 0.0;

  double operator()(double x, double y) const;
};

/// Region partition described by the signed distances h_1..h_{r-1}; the last
/// phase fills the remainder.
struct PartitionSpec {
  int phases = 2;
  std::vector<SignedDistanceFn> distances;  // size phases - 1

  void validate() const;
};

/// Two phases split by the vertical line x = x0 (phase 1 on the left).
PartitionSpec vertical_interface(double x0);
/// Two phases: phase 1 inside the circle.
PartitionSpec circle_partition(double cx, double cy, double radius);
/// Three 120-degree sectors meeting at the origin (rays at 90/210/330 deg).
PartitionSpec triple_junction();

/// Sharp-interface limit energy (pi/8) * sum_i length(boundary of E_i in the
/// box): analytic values for the three builders above on (-1,1)^2.
double sharp_limit_vertical_interface();
double sharp_limit_circle(double radius);
double sharp_limit_triple_junction();

/// Nodal evaluation of the layered indicator built from the optimal profile
/// on the exact signed distances: component i carries
/// phi(t_1)...phi(t_{i-1}) (1 - phi(t_i)), the last carries the full product.
/// Feasible by construction (components in [0,1], sum exactly 1).
PhaseField recovery_sequence(const PartitionSpec& spec, double eps, const Mesh& mesh);

/// F_eps(u) = integral(eps/2 |Du|^2 + 1/(2 eps)(1 - |u|^2)); exact P1
/// quadrature. Requires eps > 0.
double evaluate_relaxed_perimeter(const PhaseField& u, double eps, const Mesh& mesh);

struct GammaRow {
  double eps = 0.0;
  int mesh_n = 0;
  double f_eps = 0.0;
  double f_sharp = 0.0;
  double gap = 0.0;  // (f_eps - f_sharp) / f_sharp
};

/// Mesh resolution for a layer width: smallest subdivision count n with
/// h = sqrt(2)/n <= eps/factor on the unit-square grid scale.
int mesh_subdivisions_for_eps(double eps, double factor);

/// Sweep over eps values: build the recovery sequence on a mesh with
/// h <= eps/resolution_factor (factor >= 8 enforced) over (-1,1)^2 and
/// compare against the sharp limit.
std::vector<GammaRow> gamma_sweep(const PartitionSpec& spec, const std::vector<double>& eps_values,
                                  double sharp_limit, double resolution_factor = 8.0);

/// Columns: eps,f_eps,f_sharp,gap
void write_gamma_csv(const std::vector<GammaRow>& rows, std::ostream& out);
void write_gamma_csv(const std::vector<GammaRow>& rows, const std::string& path);

}  // namespace phaserec
