#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "phaserec/fem.hpp"
#include "phaserec/mesh.hpp"
#include "phaserec/objective.hpp"
#include "phaserec/state.hpp"

namespace phaserec {

enum class TauRule { Fixed, TheoreticalBound };

struct InitialCondition {
  enum class Kind { Circle, Barycenter, Random };
  Kind kind = Kind::Barycenter;
  double cx = 0.0, cy = 0.0, radius = 0.0;  // Circle
  std::uint64_t seed = 1;                   // Random
};

/// Everything the outer iteration needs besides the data (y_obs, load, u0).
struct RecoveryConfig {
  double eps = 0.0;
  double sigma = 0.0;
  std::vector<double> coefficients;  // a_i
  double noise_amplitude = 0.0;
  ObservationKind observation = ObservationKind::Bulk;
  TauRule tau_rule = TauRule::Fixed;
  double tau0 = 0.0;  // <= 0: default 0.01/eps
  double stop_residual = 1e-3;
  int max_iterations = 10000;
  int mesh_n = 0;
  std::uint64_t seed = 1;
  InitialCondition initial;
  double solver_tol = 1e-10;
  double subproblem_tol = 0.0;  // <= 0: subproblem default

  double tau_initial() const { return tau0 > 0.0 ? tau0 : 0.01 / eps; }

  /// Parameter sanity plus the interface-resolution floor
  /// h <= eps*pi/2 (at least two elements across the diffuse layer).
  void validate(const Mesh& mesh) const;
};

struct IterationRecord {
  int n = 0;
  double tau = 0.0;
  double j_fid = 0.0;
  double j_reg = 0.0;
  double j_total = 0.0;
  double residual = 0.0;
  int backtracks = 0;
  int inner_iterations = 0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;

  /// Header: n,tau,j_fid,j_reg,j_total,residual,backtracks
  void write_csv(std::ostream& out) const;
  void write_csv(const std::string& path) const;
};

/// Step-size bound under which the semi-implicit step is provably
/// energy-decreasing:
/// 1 / (1 + (a_hat^2/a_min)|grad y|_inf |grad p|_inf
///        + (a_hat^2/a_min^2)(1/(2 c_hat)) |grad y|_inf^2).
double compute_timestep_bound(const Mesh& mesh, const ScalarField& y, const ScalarField& p,
                              const CoefficientValues& a, double poincare_constant);

PhaseField make_initial_condition(const InitialCondition& init, const Mesh& mesh, int phases);

struct RecoveryResult {
  PhaseField u;
  ScalarField y;
  IterationTrace trace;
};

/// Invoked after every accepted step with the record just written, the new
/// iterate and its state.
using IterationObserver =
    std::function<void(const IterationRecord&, const PhaseField&, const ScalarField&)>;

/// Semi-implicit projected phase-field iteration with energy backtracking.
/// Each accepted step decreases the objective (up to 1e-12); the trace rows
/// carry the accepted iterates. boundary_load is the assembled Neumann
/// functional; the observation mean of every state solve is pinned to
/// mean(y_obs).
RecoveryResult run_recovery(const Mesh& mesh, const DiscreteOperators& ops, const ObservationSpace& space,
                            const RecoveryConfig& config, const ScalarField& y_obs,
                            const std::vector<double>& boundary_load, const PhaseField& u0,
                            const IterationObserver& observer = {});

}  // namespace phaserec
