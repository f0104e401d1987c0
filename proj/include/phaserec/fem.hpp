#pragma once

#include <span>
#include <vector>

#include "phaserec/mesh.hpp"
#include "phaserec/sparse.hpp"

namespace phaserec {

/// Nodal values of a continuous piecewise-linear function.
using ScalarField = std::vector<double>;

/// Per-phase diffusion values a_i with the derived bounds used by the
/// timestep estimate: a_min, a_max and a_hat = (sum a_i^2)^(1/2).
struct CoefficientValues {
  std::vector<double> a;
  double a_min = 0.0;
  double a_max = 0.0;
  double a_hat = 0.0;

  explicit CoefficientValues(std::vector<double> values);
  int phases() const { return static_cast<int>(a.size()); }
};

/// Vector-valued nodal field with r components stored component-major.
/// Used both for phase fields (values in the Gibbs simplex) and for nodal
/// gradients/functionals over the same space.
class PhaseField {
 public:
  PhaseField() = default;
  PhaseField(int num_nodes, int r, double fill = 0.0)
      : nodes_(num_nodes), r_(r), data_(static_cast<size_t>(num_nodes) * r, fill) {}

  int num_nodes() const { return nodes_; }
  int phases() const { return r_; }

  double& at(int node, int phase) { return data_[static_cast<size_t>(phase) * nodes_ + node]; }
  double at(int node, int phase) const { return data_[static_cast<size_t>(phase) * nodes_ + node]; }

  std::span<double> component(int phase) {
    return {data_.data() + static_cast<size_t>(phase) * nodes_, static_cast<size_t>(nodes_)};
  }
  std::span<const double> component(int phase) const {
    return {data_.data() + static_cast<size_t>(phase) * nodes_, static_cast<size_t>(nodes_)};
  }
  std::vector<double> component_copy(int phase) const;
  void set_component(int phase, const std::vector<double>& values);

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  /// Largest constraint violation against the Gibbs simplex:
  /// max(-min_i u_i, |sum_i u_i - 1|) over all nodes.
  double max_simplex_violation() const;

 private:
  int nodes_ = 0;
  int r_ = 0;
  std::vector<double> data_;
};

/// Nodal diffusion coefficient a(u) = sum_i a_i u_i.
ScalarField diffusion_coefficient(const PhaseField& u, const CoefficientValues& a);

/// Stiffness with nodal coefficient, integrated exactly for piecewise-linear
/// coefficients (element value = vertex mean). Rejects non-positive coeff.
SparseMatrix assemble_stiffness(const Mesh& mesh, const ScalarField& coeff);
SparseMatrix assemble_unit_stiffness(const Mesh& mesh);

SparseMatrix assemble_mass(const Mesh& mesh);
std::vector<double> assemble_lumped_mass(const Mesh& mesh);

/// Boundary (trace) mass matrix; rows/cols of interior vertices are empty.
SparseMatrix assemble_boundary_mass(const Mesh& mesh);

/// Load vector (g_h, trace of phi_j) from nodal boundary data. Entries at
/// interior vertices are zero. Rejects data whose boundary integral is not
/// zero (Neumann compatibility).
std::vector<double> assemble_boundary_load(const Mesh& mesh, const ScalarField& g);

/// Same, but with data given per boundary edge as (value at a, value at b).
/// Admits side-wise data that is discontinuous across corners.
std::vector<double> assemble_boundary_load_edges(const Mesh& mesh,
                                                 const std::vector<std::array<double, 2>>& edge_values);

/// d_j = integral of phi_j * (grad y . grad p).
std::vector<double> gradient_pair_load(const Mesh& mesh, const ScalarField& y, const ScalarField& p);

/// K[coeff] * y without assembling, for coefficients of any sign.
std::vector<double> weighted_gradient_load(const Mesh& mesh, const ScalarField& coeff, const ScalarField& y);

/// integral of |grad f|^2 (exact for the piecewise-linear interpolant).
double gradient_energy(const Mesh& mesh, const ScalarField& f);

/// max over triangles of |grad f| (discrete W^{1,inf} seminorm).
double max_gradient(const Mesh& mesh, const ScalarField& f);

/// integral of f^2 via the consistent mass quadrature (exact for P1).
double l2_norm_squared(const Mesh& mesh, const ScalarField& f);

}  // namespace phaserec
