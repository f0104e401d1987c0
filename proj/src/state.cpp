#include "phaserec/state.hpp"

#include <cmath>
#include <stdexcept>

namespace phaserec {

double ObservationSpace::inner(const ScalarField& f, const ScalarField& g) const {
  double s = 0.0;
  const auto mg = mass.multiply(g);
  for (size_t i = 0; i < f.size(); ++i) s += f[i] * mg[i];
  return s;
}

double ObservationSpace::norm(const ScalarField& f) const { return std::sqrt(std::max(0.0, mass.quadratic_form(f))); }

double ObservationSpace::mean(const ScalarField& f) const {
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) s += mass_times_one[i] * f[i];
  return s / one_norm_sq;
}

ObservationSpace make_observation_space(const Mesh& mesh, ObservationKind kind) {
  ObservationSpace space;
  space.kind = kind;
  space.mass = (kind == ObservationKind::Bulk) ? assemble_mass(mesh) : assemble_boundary_mass(mesh);
  space.mass_times_one = space.mass.multiply(std::vector<double>(mesh.num_vertices(), 1.0));
  space.one_norm_sq = 0.0;
  for (double v : space.mass_times_one) space.one_norm_sq += v;
  return space;
}

double mean_value(const ScalarField& f, const ObservationSpace& space) { return space.mean(f); }

namespace {

struct MeanProjectionCtx {
  const ObservationSpace* space;
};

void mean_projection_hook(std::vector<double>& x, const void* ctx) {
  const auto* c = static_cast<const MeanProjectionCtx*>(ctx);
  const double m = c->space->mean(x);
  for (double& v : x) v -= m;
}

void check_compatible(const std::vector<double>& rhs, const char* where) {
  double sum = 0.0, scale = 0.0;
  for (double v : rhs) {
    sum += v;
    scale += std::abs(v);
  }
  if (std::abs(sum) > 1e-8 * (1.0 + scale))
    throw std::invalid_argument(std::string(where) + ": right-hand side is not compatible (nonzero sum)");
}

}  // namespace

ScalarField solve_neumann_system(const SparseMatrix& K, const std::vector<double>& rhs,
                                 const ObservationSpace& space, double mean_target,
                                 const StateSolveOptions& opts) {
  check_compatible(rhs, "solve_neumann_system");
  auto diag = K.diagonal();
  MeanProjectionCtx ctx{&space};
  const int maxit = opts.maxit_factor * K.rows;
  ScalarField x = cg_solve(K, rhs, diag, opts.tol, maxit, opts.warm_start, opts.stats, mean_projection_hook, &ctx);
  const double shift = mean_target - space.mean(x);
  for (double& v : x) v += shift;
  return x;
}

ScalarField solve_state(const Mesh& mesh, const PhaseField& u, const CoefficientValues& a,
                        const std::vector<double>& boundary_load, double mean_target,
                        const ObservationSpace& space, const StateSolveOptions& opts) {
  const auto coeff = diffusion_coefficient(u, a);
  const auto K = assemble_stiffness(mesh, coeff);
  return solve_neumann_system(K, boundary_load, space, mean_target, opts);
}

ScalarField solve_adjoint(const Mesh& mesh, const PhaseField& u, const CoefficientValues& a,
                          const ScalarField& y, const ScalarField& y_obs, const ObservationSpace& space,
                          const StateSolveOptions& opts) {
  if (y.size() != y_obs.size()) throw std::invalid_argument("solve_adjoint: field size mismatch");
  const double mean_gap = space.mean(y) - space.mean(y_obs);
  if (std::abs(mean_gap) > 1e-9 * (1.0 + std::abs(space.mean(y_obs))))
    throw std::invalid_argument("solve_adjoint: observation means of y and y_obs disagree");
  ScalarField misfit(y.size());
  for (size_t i = 0; i < y.size(); ++i) misfit[i] = y[i] - y_obs[i];
  const auto rhs = space.mass.multiply(misfit);
  const auto coeff = diffusion_coefficient(u, a);
  const auto K = assemble_stiffness(mesh, coeff);
  return solve_neumann_system(K, rhs, space, 0.0, opts);
}

ScalarField solve_sensitivity(const Mesh& mesh, const PhaseField& u, const CoefficientValues& a,
                              const PhaseField& w, const ScalarField& y, const ObservationSpace& space,
                              const StateSolveOptions& opts) {
  if (w.num_nodes() != u.num_nodes() || w.phases() != u.phases())
    throw std::invalid_argument("solve_sensitivity: direction shape mismatch");
  for (int j = 0; j < w.num_nodes(); ++j) {
    double s = 0.0;
    for (int i = 0; i < w.phases(); ++i) s += w.at(j, i);
    if (std::abs(s) > 1e-10)
      throw std::invalid_argument("solve_sensitivity: direction is not tangent (nodal sums must vanish)");
  }
  const auto aw = diffusion_coefficient(w, a);  // a(w), sign-indefinite
  auto rhs = weighted_gradient_load(mesh, aw, y);
  for (double& v : rhs) v = -v;
  const auto coeff = diffusion_coefficient(u, a);
  const auto K = assemble_stiffness(mesh, coeff);
  return solve_neumann_system(K, rhs, space, 0.0, opts);
}

double estimate_poincare_constant(const Mesh& mesh, const ObservationSpace& space, double tol, int maxit) {
  const auto K = assemble_unit_stiffness(mesh);
  const int n = mesh.num_vertices();

  // deterministic nonconstant start with zero observation mean
  ScalarField eta(n);
  for (int j = 0; j < n; ++j) {
    const auto& v = mesh.vertices[j];
    eta[j] = std::sin(1.0 + 2.7 * v[0] + 1.3 * v[1]);
  }
  auto project = [&](ScalarField& f) {
    const double m = space.mean(f);
    for (double& x : f) x -= m;
  };
  project(eta);
  double nrm = space.norm(eta);
  if (!(nrm > 0.0)) throw std::runtime_error("estimate_poincare_constant: degenerate start");
  for (double& x : eta) x /= nrm;

  StateSolveOptions opts;
  opts.tol = 1e-12;
  double lambda = 0.0, lambda_prev = -1.0;
  ScalarField z = eta;
  for (int it = 0; it < maxit; ++it) {
    const auto rhs = space.mass.multiply(eta);
    opts.warm_start = &z;
    z = solve_neumann_system(K, rhs, space, 0.0, opts);
    project(z);
    nrm = space.norm(z);
    if (!(nrm > 0.0)) throw std::runtime_error("estimate_poincare_constant: iteration collapsed");
    for (double& x : z) x /= nrm;
    lambda = K.quadratic_form(z) / space.mass.quadratic_form(z);
    if (lambda_prev > 0.0 && std::abs(lambda - lambda_prev) <= tol * lambda) {
      eta = z;
      return lambda;
    }
    lambda_prev = lambda;
    eta = z;
  }
  throw std::runtime_error("estimate_poincare_constant: no convergence");
}

}  // namespace phaserec
