#pragma once

#include "phaserec/fem.hpp"
#include "phaserec/mesh.hpp"
#include "phaserec/sparse.hpp"

namespace phaserec {

enum class ObservationKind { Bulk, Boundary };

/// Inner-product structure of the observation space: L2 over the domain
/// (Bulk) or over the boundary (Boundary), with the constant-mean functional
/// used to fix the Neumann kernel.
struct ObservationSpace {
  ObservationKind kind = ObservationKind::Bulk;
  SparseMatrix mass;                   // M_O
  std::vector<double> mass_times_one;  // M_O * 1
  double one_norm_sq = 0.0;            // |Omega| or |boundary|

  double inner(const ScalarField& f, const ScalarField& g) const;
  double norm(const ScalarField& f) const;
  double mean(const ScalarField& f) const;  // (f,1)_O / ||1||_O^2
};

ObservationSpace make_observation_space(const Mesh& mesh, ObservationKind kind);

double mean_value(const ScalarField& f, const ObservationSpace& space);

struct StateSolveOptions {
  double tol = 1e-10;                      // relative residual
  int maxit_factor = 10;                   // maxit = factor * N
  const ScalarField* warm_start = nullptr;
  SolveStats* stats = nullptr;
};

/// Solve the discrete Neumann problem K x = rhs (K singular, constants in
/// the kernel, rhs compatible) and fix the constant so the observation mean
/// of x equals mean_target. CG keeps iterates projected onto the zero-mean
/// subspace; the final shift lands on the target exactly.
ScalarField solve_neumann_system(const SparseMatrix& K, const std::vector<double>& rhs,
                                 const ObservationSpace& space, double mean_target,
                                 const StateSolveOptions& opts = {});

/// Forward state: a(u)-weighted Neumann solve against the boundary load.
ScalarField solve_state(const Mesh& mesh, const PhaseField& u, const CoefficientValues& a,
                        const std::vector<double>& boundary_load, double mean_target,
                        const ObservationSpace& space, const StateSolveOptions& opts = {});

/// Adjoint state: same operator, observation misfit as the source,
/// zero observation mean. Requires mean(y) == mean(y_obs) (compatibility).
ScalarField solve_adjoint(const Mesh& mesh, const PhaseField& u, const CoefficientValues& a,
                          const ScalarField& y, const ScalarField& y_obs, const ObservationSpace& space,
                          const StateSolveOptions& opts = {});

/// Directional state derivative in direction w (nodally tangent: per-node
/// component sums vanish). Solves the linearized equation with zero mean.
ScalarField solve_sensitivity(const Mesh& mesh, const PhaseField& u, const CoefficientValues& a,
                              const PhaseField& w, const ScalarField& y, const ObservationSpace& space,
                              const StateSolveOptions& opts = {});

/// Smallest nonzero generalized eigenvalue of (K_1, M_O) on the zero-mean
/// subspace, by inverse power iteration: the discrete Poincare constant
/// c_hat in ||eta||_O^2 <= (1/c_hat) |eta|_{H1}^2.
double estimate_poincare_constant(const Mesh& mesh, const ObservationSpace& space, double tol = 1e-6,
                                  int maxit = 200);

}  // namespace phaserec
