#pragma once

#include <span>

#include "phaserec/fem.hpp"
#include "phaserec/mesh.hpp"

namespace phaserec {

struct DiscreteOperators;

/// Euclidean projection onto the Gibbs simplex {v >= 0, sum v = 1},
/// in place. Sort-based threshold search, exact for any dimension.
void project_simplex(std::span<double> v);

/// One semi-implicit step: minimize over nodal simplex fields
///   1/2 ||v - u_prev||_L^2  - tau * int a(v) grad y . grad p
///   + tau*sigma*( eps/2 |Dv|^2 - 1/eps (u_prev, v)_M )
/// with the lumped-mass proximal metric.
struct StepProblem {
  const PhaseField* u_prev = nullptr;
  const ScalarField* y = nullptr;
  const ScalarField* p = nullptr;
  double tau = 0.0;
  double sigma = 0.0;
  double eps = 0.0;
  const CoefficientValues* a = nullptr;
  double tol = 0.0;      // <= 0: default 1e-10 * (1 + ||u_prev||_L)
  int max_inner = 2000;
};

struct StepResult {
  PhaseField u_next;
  int inner_iterations = 0;
  double pg_residual = 0.0;  // projected-gradient residual at exit
};

/// Monotone accelerated projected gradient in the lumped metric; the step
/// length comes from the power-iteration eigenvalue estimate cached in ops.
StepResult solve_step_subproblem(const Mesh& mesh, const DiscreteOperators& ops, const StepProblem& prob);

/// Two-phase reduction: parametrize u = (v, 1-v) and solve the equivalent
/// box-constrained problem in v. Agrees with the vector solver; used as a
/// cross-check.
StepResult solve_step_subproblem_scalar(const Mesh& mesh, const DiscreteOperators& ops,
                                        const StepProblem& prob);

}  // namespace phaserec
