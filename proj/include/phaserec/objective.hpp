#pragma once

#include "phaserec/fem.hpp"
#include "phaserec/mesh.hpp"
#include "phaserec/state.hpp"

namespace phaserec {

struct ObjectiveBreakdown {
  double fidelity = 0.0;        // (1/2) ||y - y_obs||_O^2
  double regularization = 0.0;  // sigma * integral(eps/2 |Du|^2 + 1/(2 eps)(1 - |u|^2))
  double total = 0.0;
};

/// Double-obstacle phase-field energy integral(eps/2 |Du|^2 + 1/(2eps)(1-|u|^2)),
/// integrated exactly for P1 fields (identical to the K_1 / consistent-mass
/// quadratic forms, element by element).
double phase_field_energy(const Mesh& mesh, const PhaseField& u, double eps);

ObjectiveBreakdown evaluate_objective(const Mesh& mesh, const PhaseField& u, const ScalarField& y,
                                      const ScalarField& y_obs, double sigma, double eps,
                                      const ObservationSpace& space);

/// Assembled operators shared by the reduced gradient, the step subproblem
/// and the stopping residual.
struct DiscreteOperators {
  SparseMatrix stiffness_unit;      // K_1
  SparseMatrix mass;                // consistent M
  std::vector<double> lumped_mass;  // row sums of M
  double domain_area = 0.0;
  double lumped_max_eigenvalue = 0.0;  // lambda_max of M_L^{-1} K_1 (power iteration)
};

DiscreteOperators assemble_operators(const Mesh& mesh);

/// Norm induced by the lumped mass over all components.
double lumped_norm(const DiscreteOperators& ops, const PhaseField& v);

/// Nodal representation G of the reduced derivative: the Euclidean pairing
/// sum_{j,i} G[j][i] w[j][i] equals J'(u)w for every nodal direction w.
PhaseField reduced_gradient(const Mesh& mesh, const DiscreteOperators& ops, const PhaseField& u,
                            const ScalarField& y, const ScalarField& p, double sigma, double eps,
                            const CoefficientValues& a);

/// Projected-step criticality measure
/// || u - Pi_K(u - step * M_L^{-1} G) ||_{M_L} / step.
double criticality_residual(const DiscreteOperators& ops, const PhaseField& u, const PhaseField& G,
                            double step);

}  // namespace phaserec
