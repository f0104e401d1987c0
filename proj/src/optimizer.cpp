#include "phaserec/optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "phaserec/rng.hpp"
#include "phaserec/vi_step.hpp"

namespace phaserec {

void RecoveryConfig::validate(const Mesh& mesh) const {
  if (!(eps > 0.0)) throw std::invalid_argument("recovery config: model.epsilon must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("recovery config: model.sigma must be positive");
  if (!(stop_residual > 0.0))
    throw std::invalid_argument("recovery config: iteration.stop_residual must be positive");
  if (max_iterations < 0) throw std::invalid_argument("recovery config: iteration.max_iter must be >= 0");
  if (noise_amplitude < 0.0) throw std::invalid_argument("recovery config: model.lambda must be >= 0");
  CoefficientValues check(coefficients);  // positivity
  const double layer = eps * std::numbers::pi;
  if (mesh.h > 0.5 * layer) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "recovery config: mesh cannot resolve the diffuse interface (h = %.4g > eps*pi/2 = %.4g)",
                  mesh.h, 0.5 * layer);
    throw std::invalid_argument(msg);
  }
}

void IterationTrace::write_csv(std::ostream& out) const {
  out << "n,tau,j_fid,j_reg,j_total,residual,backtracks\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.n, r.tau, r.j_fid, r.j_reg,
                  r.j_total, r.residual, r.backtracks);
    out << buf;
  }
}

void IterationTrace::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("IterationTrace::write_csv: cannot open " + path);
  write_csv(out);
  if (!out) throw std::runtime_error("IterationTrace::write_csv: write failed for " + path);
}

double compute_timestep_bound(const Mesh& mesh, const ScalarField& y, const ScalarField& p,
                              const CoefficientValues& a, double poincare_constant) {
  if (!(poincare_constant > 0.0))
    throw std::invalid_argument("compute_timestep_bound: poincare constant must be positive");
  const double gy = max_gradient(mesh, y);
  const double gp = max_gradient(mesh, p);
  const double ah2 = a.a_hat * a.a_hat;
  const double denom =
      1.0 + (ah2 / a.a_min) * gy * gp + (ah2 / (a.a_min * a.a_min)) * gy * gy / (2.0 * poincare_constant);
  return 1.0 / denom;
}

PhaseField make_initial_condition(const InitialCondition& init, const Mesh& mesh, int phases) {
  if (phases < 2) throw std::invalid_argument("make_initial_condition: need at least two phases");
  const int n = mesh.num_vertices();
  PhaseField u(n, phases);
  switch (init.kind) {
    case InitialCondition::Kind::Barycenter: {
      const double v = 1.0 / phases;
      for (int i = 0; i < phases; ++i)
        for (int j = 0; j < n; ++j) u.at(j, i) = v;
      break;
    }
    case InitialCondition::Kind::Circle: {
      if (!(init.radius > 0.0)) throw std::invalid_argument("make_initial_condition: circle radius must be positive");
      for (int j = 0; j < n; ++j) {
        const auto& v = mesh.vertices[j];
        const double dx = v[0] - init.cx;
        const double dy = v[1] - init.cy;
        const bool inside = dx * dx + dy * dy <= init.radius * init.radius;
        u.at(j, 0) = inside ? 1.0 : 0.0;
        u.at(j, 1) = inside ? 0.0 : 1.0;
      }
      break;
    }
    case InitialCondition::Kind::Random: {
      // i.i.d. uniform on the simplex (normalized exponentials)
      Rng rng(init.seed);
      std::vector<double> e(phases);
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < phases; ++i) {
          e[i] = rng.exponential();
          s += e[i];
        }
        for (int i = 0; i < phases; ++i) u.at(j, i) = e[i] / s;
      }
      break;
    }
  }
  return u;
}

RecoveryResult run_recovery(const Mesh& mesh, const DiscreteOperators& ops, const ObservationSpace& space,
                            const RecoveryConfig& config, const ScalarField& y_obs,
                            const std::vector<double>& boundary_load, const PhaseField& u0,
                            const IterationObserver& observer) {
  config.validate(mesh);
  CoefficientValues a(config.coefficients);
  if (u0.phases() != a.phases()) throw std::invalid_argument("run_recovery: u0 phase count mismatch");
  if (u0.max_simplex_violation() > 1e-10)
    throw std::invalid_argument("run_recovery: u0 violates the simplex constraints");

  const double mean_target = space.mean(y_obs);
  StateSolveOptions solve_opts;
  solve_opts.tol = config.solver_tol;

  RecoveryResult out;
  out.u = u0;
  out.trace.converged = false;

  auto solve_for = [&](const PhaseField& u, const ScalarField* warm) {
    solve_opts.warm_start = warm;
    return solve_state(mesh, u, a, boundary_load, mean_target, space, solve_opts);
  };

  ScalarField y = solve_for(out.u, nullptr);
  ObjectiveBreakdown current = evaluate_objective(mesh, out.u, y, y_obs, config.sigma, config.eps, space);

  double poincare = 0.0;
  if (config.tau_rule == TauRule::TheoreticalBound)
    poincare = estimate_poincare_constant(mesh, space);

  ScalarField p;
  const double tau_start = config.tau_initial();
  for (int n = 1; n <= config.max_iterations; ++n) {
    solve_opts.warm_start = p.empty() ? nullptr : &p;
    {
      const auto coeff = diffusion_coefficient(out.u, a);
      const auto K = assemble_stiffness(mesh, coeff);
      ScalarField misfit(y.size());
      for (size_t i = 0; i < y.size(); ++i) misfit[i] = y[i] - y_obs[i];
      const auto rhs = space.mass.multiply(misfit);
      p = solve_neumann_system(K, rhs, space, 0.0, solve_opts);
    }

    double tau = tau_start;
    if (config.tau_rule == TauRule::TheoreticalBound)
      tau = std::min(tau_start, compute_timestep_bound(mesh, y, p, a, poincare));

    StepProblem prob;
    prob.u_prev = &out.u;
    prob.y = &y;
    prob.p = &p;
    prob.sigma = config.sigma;
    prob.eps = config.eps;
    prob.a = &a;
    prob.tol = config.subproblem_tol;

    int backtracks = 0;
    StepResult step;
    ScalarField y_cand;
    ObjectiveBreakdown cand;
    while (true) {
      prob.tau = tau;
      step = solve_step_subproblem(mesh, ops, prob);
      y_cand = solve_for(step.u_next, &y);
      cand = evaluate_objective(mesh, step.u_next, y_cand, y_obs, config.sigma, config.eps, space);
      if (cand.total <= current.total + 1e-12) break;
      tau *= 0.5;
      if (++backtracks > 30) throw std::runtime_error("run_recovery: backtracking exhausted (30 halvings)");
    }

    double diff_sq = 0.0;
    for (int i = 0; i < u0.phases(); ++i) {
      const auto ni = step.u_next.component(i);
      const auto oi = out.u.component(i);
      for (int j = 0; j < out.u.num_nodes(); ++j) {
        const double d = ni[j] - oi[j];
        diff_sq += ops.lumped_mass[j] * d * d;
      }
    }
    const double residual = std::sqrt(diff_sq) / tau;

    out.u = std::move(step.u_next);
    y = std::move(y_cand);
    current = cand;
    out.trace.records.push_back(
        {n, tau, cand.fidelity, cand.regularization, cand.total, residual, backtracks, step.inner_iterations});
    if (observer) observer(out.trace.records.back(), out.u, y);
    if (residual <= config.stop_residual) {
      out.trace.converged = true;
      break;
    }
  }
  out.y = std::move(y);
  return out;
}

}  // namespace phaserec
