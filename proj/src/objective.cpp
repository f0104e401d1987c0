#include "phaserec/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "phaserec/vi_step.hpp"

namespace phaserec {

double phase_field_energy(const Mesh& mesh, const PhaseField& u, double eps) {
  if (u.num_nodes() != mesh.num_vertices()) throw std::invalid_argument("phase_field_energy: size mismatch");
  if (!(eps > 0.0)) throw std::invalid_argument("phase_field_energy: eps must be positive");
  double grad = 0.0;
  double int_u_sq = 0.0;
  for (int i = 0; i < u.phases(); ++i) {
    const auto ui = u.component_copy(i);
    grad += gradient_energy(mesh, ui);
    int_u_sq += l2_norm_squared(mesh, ui);
  }
  return 0.5 * eps * grad + (mesh.total_area() - int_u_sq) / (2.0 * eps);
}

ObjectiveBreakdown evaluate_objective(const Mesh& mesh, const PhaseField& u, const ScalarField& y,
                                      const ScalarField& y_obs, double sigma, double eps,
                                      const ObservationSpace& space) {
  if (y.size() != y_obs.size()) throw std::invalid_argument("evaluate_objective: field size mismatch");
  ScalarField diff(y.size());
  for (size_t i = 0; i < y.size(); ++i) diff[i] = y[i] - y_obs[i];
  ObjectiveBreakdown out;
  out.fidelity = 0.5 * space.mass.quadratic_form(diff);
  out.regularization = sigma * phase_field_energy(mesh, u, eps);
  out.total = out.fidelity + out.regularization;
  return out;
}

DiscreteOperators assemble_operators(const Mesh& mesh) {
  DiscreteOperators ops;
  ops.stiffness_unit = assemble_unit_stiffness(mesh);
  ops.mass = assemble_mass(mesh);
  ops.lumped_mass = assemble_lumped_mass(mesh);
  ops.domain_area = mesh.total_area();

  // 20 fixed power iterations for lambda_max(M_L^{-1} K_1) in the lumped
  // metric, plus a safety margin applied by the consumers
  const int n = mesh.num_vertices();
  std::vector<double> z(n);
  for (int j = 0; j < n; ++j) z[j] = ((j % 7) - 3.0) / 3.0 + 0.01 * (j % 13);
  double lambda = 0.0;
  std::vector<double> kz(n);
  for (int it = 0; it < 20; ++it) {
    ops.stiffness_unit.multiply(z, kz);
    for (int j = 0; j < n; ++j) kz[j] /= ops.lumped_mass[j];
    double nrm = 0.0;
    for (int j = 0; j < n; ++j) nrm += ops.lumped_mass[j] * kz[j] * kz[j];
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0)) throw std::runtime_error("assemble_operators: power iteration collapsed");
    lambda = nrm;
    for (int j = 0; j < n; ++j) z[j] = kz[j] / nrm;
  }
  ops.lumped_max_eigenvalue = lambda;
  return ops;
}

double lumped_norm(const DiscreteOperators& ops, const PhaseField& v) {
  double s = 0.0;
  for (int i = 0; i < v.phases(); ++i) {
    const auto vi = v.component(i);
    for (int j = 0; j < v.num_nodes(); ++j) s += ops.lumped_mass[j] * vi[j] * vi[j];
  }
  return std::sqrt(s);
}

PhaseField reduced_gradient(const Mesh& mesh, const DiscreteOperators& ops, const PhaseField& u,
                            const ScalarField& y, const ScalarField& p, double sigma, double eps,
                            const CoefficientValues& a) {
  if (u.phases() != a.phases()) throw std::invalid_argument("reduced_gradient: phase count mismatch");
  const auto d = gradient_pair_load(mesh, y, p);
  PhaseField G(u.num_nodes(), u.phases());
  std::vector<double> k_ui, m_ui;
  for (int i = 0; i < u.phases(); ++i) {
    const auto ui = u.component_copy(i);
    ops.stiffness_unit.multiply(ui, k_ui);
    ops.mass.multiply(ui, m_ui);
    auto gi = G.component(i);
    for (int j = 0; j < u.num_nodes(); ++j)
      gi[j] = -a.a[i] * d[j] + sigma * (eps * k_ui[j] - m_ui[j] / eps);
  }
  return G;
}

double criticality_residual(const DiscreteOperators& ops, const PhaseField& u, const PhaseField& G,
                            double step) {
  if (!(step > 0.0)) throw std::invalid_argument("criticality_residual: step must be positive");
  const int r = u.phases();
  const int n = u.num_nodes();
  std::vector<double> node(r);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < r; ++i) node[i] = u.at(j, i) - step * G.at(j, i) / ops.lumped_mass[j];
    project_simplex(node);
    double d2 = 0.0;
    for (int i = 0; i < r; ++i) {
      const double d = u.at(j, i) - node[i];
      d2 += d * d;
    }
    s += ops.lumped_mass[j] * d2;
  }
  return std::sqrt(s) / step;
}

}  // namespace phaserec
