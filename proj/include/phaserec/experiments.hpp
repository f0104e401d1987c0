#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "phaserec/fem.hpp"
#include "phaserec/mesh.hpp"
#include "phaserec/state.hpp"

namespace phaserec {

/// Geometric primitive carrying a phase label. Later primitives paint over
/// earlier ones, so nested arrangements list outer shapes first.
struct ShapePrimitive {
  enum class Kind { Ellipse, Circle, Polygon };
  Kind kind = Kind::Circle;
  double cx = 0.0, cy = 0.0;
  double rx = 0.0, ry = 0.0;                     // semi-axes; Circle uses rx
  std::vector<std::array<double, 2>> polygon;    // closed (last->first edge implied)
  int label = 1;                                 // 1-based phase index

  bool contains(double x, double y) const;
};

struct ShapeSpec {
  std::vector<ShapePrimitive> primitives;
  int background_label = 1;

  /// Labels in 1..phases, positive semi-axes, primitives within the mesh box.
  void validate(const Mesh& mesh, int phases) const;
};

/// Nodal indicator field: each node gets the pure vertex of the last
/// primitive containing it, else the background vertex. Exactly feasible.
PhaseField rasterize_objective(const ShapeSpec& spec, const Mesh& mesh, int phases);

/// Boundary flux patterns on the square (-1,1)^2.
///   OpposingCorners: -1/2 on the left and bottom sides, +1/2 on the right
///                    and top sides (drives flow corner to corner).
///   TopBottom:       -1/2 on the bottom, +1/2 on the top, 0 on the sides.
/// Corner values are the mean of the two adjacent sides; both patterns have
/// zero boundary mean (Neumann compatibility).
enum class FluxCase { OpposingCorners, TopBottom };

/// Pointwise flux; throws for points not on the boundary of (-1,1)^2.
double boundary_flux(FluxCase c, double x, double y);

/// Nodal samples of the flux (zero at interior nodes).
ScalarField boundary_flux_field(FluxCase c, const Mesh& mesh);

/// Forward-solve the observation with coefficient a(u_obj), pinning the
/// observation mean to zero, then add amplitude * iid standard normal noise
/// per node (boundary nodes only when the observation lives on the
/// boundary). Fixed seed => bit-identical output.
ScalarField synthesize_observation(const Mesh& mesh, const PhaseField& u_obj,
                                   const CoefficientValues& a,
                                   const std::vector<double>& boundary_load,
                                   double noise_amplitude, std::uint64_t seed,
                                   const ObservationSpace& space);

/// integral over the domain of sum_i |u_i - v_i| (piecewise-linear
/// interpolant of the integrand). Symmetric; zero iff nodally equal.
double l1_mismatch(const Mesh& mesh, const PhaseField& u, const PhaseField& v);

struct ComponentReport {
  int count = 0;
  std::vector<int> sizes;  // node counts per component, descending
};

/// Connected components of {nodes with u[phase] > threshold} in the mesh
/// edge graph.
ComponentReport connected_components(const Mesh& mesh, const PhaseField& u, int phase,
                                     double threshold = 0.5);

}  // namespace phaserec
