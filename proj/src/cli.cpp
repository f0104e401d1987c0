#include "phaserec/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "phaserec/gamma.hpp"
#include "phaserec/objective.hpp"
#include "phaserec/state.hpp"

namespace phaserec {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> tokens;
  std::istringstream in(s);
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

ShapePrimitive parse_shape_line(const std::string& line) {
  const std::vector<std::string> t = split_tokens(line);
  const std::string where = "objective.shape";
  if (t.empty()) throw std::runtime_error("empty shape entry for " + where);
  ShapePrimitive p;
  auto num = [&](size_t i) { return parse_double_value(t[i], where); };
  auto label_at = [&](size_t i) {
    const double v = num(i);
    const int label = static_cast<int>(v);
    if (static_cast<double>(label) != v)
      throw std::runtime_error("shape label must be an integer in " + where);
    return label;
  };
  if (t[0] == "ellipse") {
    if (t.size() != 6)
      throw std::runtime_error(where + ": expected 'ellipse cx cy rx ry label'");
    p.kind = ShapePrimitive::Kind::Ellipse;
    p.cx = num(1);
    p.cy = num(2);
    p.rx = num(3);
    p.ry = num(4);
    p.label = label_at(5);
  } else if (t[0] == "circle") {
    if (t.size() != 5) throw std::runtime_error(where + ": expected 'circle cx cy radius label'");
    p.kind = ShapePrimitive::Kind::Circle;
    p.cx = num(1);
    p.cy = num(2);
    p.rx = num(3);
    p.ry = num(3);
    p.label = label_at(4);
  } else if (t[0] == "polygon") {
    if (t.size() < 8 || (t.size() - 2) % 2 != 0)
      throw std::runtime_error(where + ": expected 'polygon label x1 y1 x2 y2 x3 y3 ...'");
    p.kind = ShapePrimitive::Kind::Polygon;
    p.label = label_at(1);
    for (size_t i = 2; i + 1 < t.size(); i += 2) p.polygon.push_back({num(i), num(i + 1)});
  } else {
    throw std::runtime_error(where + ": unknown shape kind '" + t[0] +
                             "' (ellipse, circle or polygon)");
  }
  return p;
}

}  // namespace

ShapeSpec parse_shape_spec(const RunFile& rf) {
  ShapeSpec spec;
  spec.background_label = rf.get_int_or("objective", "background", 2);
  for (const std::string& line : rf.get_all("objective", "shape"))
    spec.primitives.push_back(parse_shape_line(line));
  return spec;
}

FluxCase parse_flux_case(const std::string& name) {
  if (name == "opposing-corners") return FluxCase::OpposingCorners;
  if (name == "top-bottom") return FluxCase::TopBottom;
  throw std::runtime_error("model.flux must be opposing-corners, top-bottom or zero, got '" +
                           name + "'");
}

RecoveryConfig parse_recovery_config(const RunFile& rf) {
  RecoveryConfig cfg;
  cfg.mesh_n = rf.get_int("mesh", "n");
  cfg.eps = rf.get_double("model", "epsilon");
  cfg.sigma = rf.get_double_or("model", "sigma", 1e-4);
  cfg.coefficients = rf.has("model", "coefficients") ? rf.get_double_list("model", "coefficients")
                                                     : std::vector<double>{3.0, 0.5};
  cfg.noise_amplitude = rf.get_double_or("model", "noise", 0.05);

  const std::string obs = rf.get_string_or("model", "observation", "bulk");
  if (obs == "bulk")
    cfg.observation = ObservationKind::Bulk;
  else if (obs == "boundary")
    cfg.observation = ObservationKind::Boundary;
  else
    throw std::runtime_error("model.observation must be bulk or boundary, got '" + obs + "'");

  const std::string rule = rf.get_string_or("iteration", "tau_rule", "fixed");
  if (rule == "fixed")
    cfg.tau_rule = TauRule::Fixed;
  else if (rule == "bound")
    cfg.tau_rule = TauRule::TheoreticalBound;
  else
    throw std::runtime_error("iteration.tau_rule must be fixed or bound, got '" + rule + "'");

  cfg.tau0 = rf.get_double_or("iteration", "tau0", 0.0);
  cfg.stop_residual = rf.get_double_or("iteration", "stop_residual", 1e-3);
  cfg.max_iterations = rf.get_int_or("iteration", "max_iter", 10000);
  cfg.seed = rf.get_uint64_or("iteration", "seed", 1);
  cfg.solver_tol = rf.get_double_or("iteration", "solver_tol", 1e-10);
  cfg.subproblem_tol = rf.get_double_or("iteration", "subproblem_tol", 0.0);

  const std::string kind = rf.get_string_or("initial", "kind", "barycenter");
  if (kind == "circle") {
    cfg.initial.kind = InitialCondition::Kind::Circle;
    cfg.initial.cx = rf.get_double_or("initial", "cx", 0.0);
    cfg.initial.cy = rf.get_double_or("initial", "cy", 0.0);
    cfg.initial.radius = rf.get_double("initial", "radius");
  } else if (kind == "barycenter") {
    cfg.initial.kind = InitialCondition::Kind::Barycenter;
  } else if (kind == "random") {
    cfg.initial.kind = InitialCondition::Kind::Random;
  } else {
    throw std::runtime_error("initial.kind must be circle, barycenter or random, got '" + kind +
                             "'");
  }
  cfg.initial.seed = rf.get_uint64_or("initial", "seed", cfg.seed);
  return cfg;
}

// ---------------------------------------------------------------------------
// Manufactured-solution study: y*(x, y) = x^2 - y^2 (harmonic), coefficient
// a = 3, flux a * dy*/dnu = +2a on the vertical sides, -2a on the horizontal
// sides of (-1,1)^2.
// ---------------------------------------------------------------------------

namespace {

constexpr double kStudyCoefficient = 3.0;

double exact_saddle(double x, double y) { return x * x - y * y; }

// Degree-4 triangle quadrature (6 points, two symmetric orbits).
struct TriQuadPoint {
  double l0, l1, l2, w;
};

constexpr double kQA = 0.108103018168070;
constexpr double kQB = 0.445948490915965;
constexpr double kWA = 0.223381589678011;
constexpr double kQC = 0.816847572980459;
constexpr double kQD = 0.091576213509771;
constexpr double kWC = 0.109951743655322;

constexpr TriQuadPoint kQuadDeg4[6] = {
    {kQA, kQB, kQB, kWA}, {kQB, kQA, kQB, kWA}, {kQB, kQB, kQA, kWA},
    {kQC, kQD, kQD, kWC}, {kQD, kQC, kQD, kWC}, {kQD, kQD, kQC, kWC},
};

struct TriView {
  double x[3], y[3], v[3];
  double area;
  double gx, gy;  // constant gradient of the P1 interpolant
};

TriView triangle_view(const Mesh& mesh, int t, const ScalarField& f) {
  TriView tv{};
  for (int k = 0; k < 3; ++k) {
    const int j = mesh.triangles[t][k];
    tv.x[k] = mesh.vertices[j][0];
    tv.y[k] = mesh.vertices[j][1];
    tv.v[k] = f[j];
  }
  const double det =
      (tv.x[1] - tv.x[0]) * (tv.y[2] - tv.y[0]) - (tv.x[2] - tv.x[0]) * (tv.y[1] - tv.y[0]);
  tv.area = 0.5 * det;
  const double inv = 1.0 / det;
  tv.gx = (tv.v[0] * (tv.y[1] - tv.y[2]) + tv.v[1] * (tv.y[2] - tv.y[0]) +
           tv.v[2] * (tv.y[0] - tv.y[1])) *
          inv;
  tv.gy = (tv.v[0] * (tv.x[2] - tv.x[1]) + tv.v[1] * (tv.x[0] - tv.x[2]) +
           tv.v[2] * (tv.x[1] - tv.x[0])) *
          inv;
  return tv;
}

// ||y_h - y*||_L2 with quadrature exact for the quartic integrand.
double l2_error_saddle(const Mesh& mesh, const ScalarField& yh) {
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriView tv = triangle_view(mesh, t, yh);
    for (const TriQuadPoint& q : kQuadDeg4) {
      const double px = q.l0 * tv.x[0] + q.l1 * tv.x[1] + q.l2 * tv.x[2];
      const double py = q.l0 * tv.y[0] + q.l1 * tv.y[1] + q.l2 * tv.y[2];
      const double uh = q.l0 * tv.v[0] + q.l1 * tv.v[1] + q.l2 * tv.v[2];
      const double d = uh - exact_saddle(px, py);
      acc += q.w * tv.area * d * d;
    }
  }
  return std::sqrt(acc);
}

// |y_h - y*|_H1 with edge-midpoint quadrature (exact: quadratic integrand).
double h1_error_saddle(const Mesh& mesh, const ScalarField& yh) {
  double acc = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TriView tv = triangle_view(mesh, t, yh);
    for (int k = 0; k < 3; ++k) {
      const double mx = 0.5 * (tv.x[k] + tv.x[(k + 1) % 3]);
      const double my = 0.5 * (tv.y[k] + tv.y[(k + 1) % 3]);
      const double dx = tv.gx - 2.0 * mx;  // grad y* = (2x, -2y)
      const double dy = tv.gy + 2.0 * my;
      acc += (tv.area / 3.0) * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(acc);
}

}  // namespace

std::vector<ConvergenceRow> run_convergence_study(const std::vector<int>& levels) {
  if (levels.empty()) throw std::invalid_argument("convergence study needs at least one level");
  std::vector<ConvergenceRow> rows;
  for (int n : levels) {
    const Mesh mesh = build_structured_mesh(-1.0, 1.0, -1.0, 1.0, n);
    std::vector<std::array<double, 2>> edge_values(mesh.boundary_edges.size());
    for (size_t k = 0; k < mesh.boundary_edges.size(); ++k) {
      const BoundarySide side = mesh.boundary_edges[k].side;
      const double g = (side == BoundarySide::Left || side == BoundarySide::Right)
                           ? 2.0 * kStudyCoefficient
                           : -2.0 * kStudyCoefficient;
      edge_values[k] = {g, g};
    }
    const std::vector<double> load = assemble_boundary_load_edges(mesh, edge_values);
    const SparseMatrix K =
        assemble_stiffness(mesh, ScalarField(mesh.num_vertices(), kStudyCoefficient));
    const ObservationSpace space = make_observation_space(mesh, ObservationKind::Bulk);
    StateSolveOptions opts;
    opts.tol = 1e-12;
    const ScalarField y = solve_neumann_system(K, load, space, 0.0, opts);

    ConvergenceRow row;
    row.n = n;
    row.h = mesh.h;
    row.l2_error = l2_error_saddle(mesh, y);
    row.h1_error = h1_error_saddle(mesh, y);
    row.l2_eoc = row.h1_eoc = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  for (size_t i = 1; i < rows.size(); ++i) {
    const double dh = std::log(rows[i - 1].h / rows[i].h);
    rows[i].l2_eoc = std::log(rows[i - 1].l2_error / rows[i].l2_error) / dh;
    rows[i].h1_eoc = std::log(rows[i - 1].h1_error / rows[i].h1_error) / dh;
  }
  return rows;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
  out << "n,h,l2_error,l2_eoc,h1_error,h1_eoc\n";
  for (const ConvergenceRow& r : rows) {
    out << r.n << ',' << fmt(r.h) << ',' << fmt(r.l2_error) << ','
        << (std::isnan(r.l2_eoc) ? std::string() : fmt(r.l2_eoc)) << ',' << fmt(r.h1_error) << ','
        << (std::isnan(r.h1_eoc) ? std::string() : fmt(r.h1_eoc)) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

namespace {

struct CommonArgs {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

Mesh build_mesh_from(const RunFile& rf) {
  const int n = rf.get_int("mesh", "n");
  const double xmin = rf.get_double_or("mesh", "xmin", -1.0);
  const double xmax = rf.get_double_or("mesh", "xmax", 1.0);
  const double ymin = rf.get_double_or("mesh", "ymin", -1.0);
  const double ymax = rf.get_double_or("mesh", "ymax", 1.0);
  return build_structured_mesh(xmin, xmax, ymin, ymax, n);
}

CoefficientValues coefficients_from(const RunFile& rf) {
  return CoefficientValues(rf.has("model", "coefficients")
                               ? rf.get_double_list("model", "coefficients")
                               : std::vector<double>{3.0, 0.5});
}

ObservationKind observation_from(const RunFile& rf) {
  const std::string obs = rf.get_string_or("model", "observation", "bulk");
  if (obs == "bulk") return ObservationKind::Bulk;
  if (obs == "boundary") return ObservationKind::Boundary;
  throw std::runtime_error("model.observation must be bulk or boundary, got '" + obs + "'");
}

std::vector<double> flux_load_from(const RunFile& rf, const Mesh& mesh) {
  const std::string flux = rf.get_string_or("model", "flux", "opposing-corners");
  if (flux == "zero") return std::vector<double>(mesh.num_vertices(), 0.0);
  return assemble_boundary_load(mesh, boundary_flux_field(parse_flux_case(flux), mesh));
}

void write_boundary_trace_csv(const Mesh& mesh, const ScalarField& y, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "s,x,y,state\n";
  const std::vector<int> walk = boundary_trace_indices(mesh);
  double s = 0.0;
  for (size_t i = 0; i < walk.size(); ++i) {
    if (i > 0) {
      const auto& prev = mesh.vertices[walk[i - 1]];
      const auto& cur = mesh.vertices[walk[i]];
      s += std::hypot(cur[0] - prev[0], cur[1] - prev[1]);
    }
    const int j = walk[i];
    out << fmt(s) << ',' << fmt(mesh.vertices[j][0]) << ',' << fmt(mesh.vertices[j][1]) << ','
        << fmt(y[j]) << '\n';
  }
}

std::vector<std::pair<std::string, std::vector<double>>> field_bundle(const PhaseField& u,
                                                                      const CoefficientValues& a,
                                                                      const ScalarField* state) {
  std::vector<std::pair<std::string, std::vector<double>>> fields;
  for (int i = 0; i < u.phases(); ++i)
    fields.emplace_back("phase_" + std::to_string(i + 1), u.component_copy(i));
  fields.emplace_back("coefficient", diffusion_coefficient(u, a));
  if (state != nullptr) fields.emplace_back("state", *state);
  return fields;
}

int cmd_forward(const RunFile& rf, const CommonArgs& c) {
  const Mesh mesh = build_mesh_from(rf);
  const CoefficientValues a = coefficients_from(rf);
  const ShapeSpec spec = parse_shape_spec(rf);
  const PhaseField u_obj = rasterize_objective(spec, mesh, a.phases());
  const ObservationSpace space = make_observation_space(mesh, observation_from(rf));
  const std::vector<double> load = flux_load_from(rf, mesh);

  StateSolveOptions opts;
  opts.tol = rf.get_double_or("iteration", "solver_tol", 1e-10);
  const ScalarField y = solve_state(mesh, u_obj, a, load, 0.0, space, opts);

  const std::string vtk_path = c.out + "/state.vtk";
  const std::string trace_path = c.out + "/boundary_trace.csv";
  write_vtk(mesh, field_bundle(u_obj, a, &y), vtk_path);
  write_boundary_trace_csv(mesh, y, trace_path);

  std::cout << "forward: " << mesh.num_vertices() << " vertices, observation mean "
            << fmt(space.mean(y)) << "\n";
  std::cout << "wrote " << vtk_path << "\n";
  std::cout << "wrote " << trace_path << "\n";
  return 0;
}

int cmd_recover(const RunFile& rf, const CommonArgs& c) {
  RecoveryConfig cfg = parse_recovery_config(rf);
  if (c.seed_set) {
    cfg.seed = c.seed;
    cfg.initial.seed = c.seed;
  }
  const Mesh mesh = build_mesh_from(rf);
  const CoefficientValues a(cfg.coefficients);
  const ShapeSpec spec = parse_shape_spec(rf);
  const PhaseField u_obj = rasterize_objective(spec, mesh, a.phases());
  const ObservationSpace space = make_observation_space(mesh, cfg.observation);
  const std::vector<double> load = flux_load_from(rf, mesh);
  const ScalarField y_obs =
      synthesize_observation(mesh, u_obj, a, load, cfg.noise_amplitude, cfg.seed, space);
  const PhaseField u0 = make_initial_condition(cfg.initial, mesh, a.phases());
  const DiscreteOperators ops = assemble_operators(mesh);

  const RecoveryResult res = run_recovery(mesh, ops, space, cfg, y_obs, load, u0);

  const std::string vtk_path = c.out + "/recovered.vtk";
  const std::string trace_path = c.out + "/trace.csv";
  const std::string summary_path = c.out + "/summary.txt";
  write_vtk(mesh, field_bundle(res.u, a, &res.y), vtk_path);
  res.trace.write_csv(trace_path);

  const ObjectiveBreakdown jb =
      evaluate_objective(mesh, res.u, res.y, y_obs, cfg.sigma, cfg.eps, space);
  const double mismatch = l1_mismatch(mesh, res.u, u_obj);

  std::ofstream summary(summary_path);
  if (!summary) throw std::runtime_error("cannot open " + summary_path + " for writing");
  summary << "command = recover\n";
  summary << "mesh.n = " << cfg.mesh_n << "\n";
  summary << "mesh.vertices = " << mesh.num_vertices() << "\n";
  summary << "mesh.h = " << fmt(mesh.h) << "\n";
  summary << "model.epsilon = " << fmt(cfg.eps) << "\n";
  summary << "model.sigma = " << fmt(cfg.sigma) << "\n";
  summary << "model.coefficients =";
  for (double v : cfg.coefficients) summary << ' ' << fmt(v);
  summary << "\n";
  summary << "model.noise = " << fmt(cfg.noise_amplitude) << "\n";
  summary << "model.observation = "
          << (cfg.observation == ObservationKind::Bulk ? "bulk" : "boundary") << "\n";
  summary << "model.flux = " << rf.get_string_or("model", "flux", "opposing-corners") << "\n";
  summary << "iteration.tau_rule = " << (cfg.tau_rule == TauRule::Fixed ? "fixed" : "bound")
          << "\n";
  summary << "iteration.tau_initial = " << fmt(cfg.tau_initial()) << "\n";
  summary << "iteration.stop_residual = " << fmt(cfg.stop_residual) << "\n";
  summary << "iteration.max_iter = " << cfg.max_iterations << "\n";
  summary << "iteration.seed = " << cfg.seed << "\n";
  summary << "iteration.solver_tol = " << fmt(cfg.solver_tol) << "\n";
  summary << "initial.kind = "
          << (cfg.initial.kind == InitialCondition::Kind::Circle       ? "circle"
              : cfg.initial.kind == InitialCondition::Kind::Barycenter ? "barycenter"
                                                                       : "random")
          << "\n";
  if (cfg.initial.kind == InitialCondition::Kind::Circle) {
    summary << "initial.cx = " << fmt(cfg.initial.cx) << "\n";
    summary << "initial.cy = " << fmt(cfg.initial.cy) << "\n";
    summary << "initial.radius = " << fmt(cfg.initial.radius) << "\n";
  }
  if (cfg.initial.kind == InitialCondition::Kind::Random)
    summary << "initial.seed = " << cfg.initial.seed << "\n";
  summary << "result.iterations = " << res.trace.records.size() << "\n";
  summary << "result.converged = " << (res.trace.converged ? "true" : "false") << "\n";
  summary << "result.final_residual = "
          << (res.trace.records.empty() ? std::string("nan")
                                        : fmt(res.trace.records.back().residual))
          << "\n";
  summary << "result.j_fidelity = " << fmt(jb.fidelity) << "\n";
  summary << "result.j_regularization = " << fmt(jb.regularization) << "\n";
  summary << "result.j_total = " << fmt(jb.total) << "\n";
  summary << "result.l1_mismatch = " << fmt(mismatch) << "\n";
  for (int i = 0; i < res.u.phases(); ++i)
    summary << "result.components.phase" << (i + 1) << " = "
            << connected_components(mesh, res.u, i).count << "\n";
  summary.close();

  std::cout << "recover: " << res.trace.records.size() << " iterations, converged "
            << (res.trace.converged ? "true" : "false") << ", J " << fmt(jb.total) << "\n";
  std::cout << "wrote " << vtk_path << "\n";
  std::cout << "wrote " << trace_path << "\n";
  std::cout << "wrote " << summary_path << "\n";
  return 0;
}

int cmd_gamma(const RunFile& rf, const CommonArgs& c) {
  const std::string which = rf.get_string_or("gamma", "case", "flat");
  const std::vector<double> eps_values = rf.get_double_list("gamma", "eps_list");
  const double factor = rf.get_double_or("gamma", "factor", 8.0);

  PartitionSpec spec;
  double sharp = 0.0;
  if (which == "flat") {
    spec = vertical_interface(rf.get_double_or("gamma", "x0", 0.0));
    sharp = sharp_limit_vertical_interface();
  } else if (which == "circle") {
    const double radius = rf.get_double_or("gamma", "radius", 0.5);
    spec = circle_partition(rf.get_double_or("gamma", "cx", 0.0),
                            rf.get_double_or("gamma", "cy", 0.0), radius);
    sharp = sharp_limit_circle(radius);
  } else if (which == "triple") {
    spec = triple_junction();
    sharp = sharp_limit_triple_junction();
  } else {
    throw std::runtime_error("gamma.case must be flat, circle or triple, got '" + which + "'");
  }

  const std::vector<GammaRow> rows = gamma_sweep(spec, eps_values, sharp, factor);
  const std::string csv_path = c.out + "/gamma.csv";
  write_gamma_csv(rows, csv_path);
  for (const GammaRow& r : rows)
    std::cout << "eps " << fmt(r.eps) << "  n " << r.mesh_n << "  F_eps " << fmt(r.f_eps)
              << "  F_sharp " << fmt(r.f_sharp) << "  gap " << fmt(100.0 * r.gap) << "%\n";
  std::cout << "wrote " << csv_path << "\n";
  return 0;
}

int cmd_convergence(const RunFile& rf, const CommonArgs& c) {
  std::vector<int> levels;
  if (rf.has("study", "levels")) {
    for (double v : rf.get_double_list("study", "levels")) {
      const int n = static_cast<int>(v);
      if (static_cast<double>(n) != v || n < 1)
        throw std::runtime_error("study.levels must be positive integers");
      levels.push_back(n);
    }
  } else {
    levels = {16, 32, 64};
  }
  const std::vector<ConvergenceRow> rows = run_convergence_study(levels);
  const std::string csv_path = c.out + "/convergence.csv";
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot open " + csv_path + " for writing");
  write_convergence_csv(rows, out);
  out.close();
  for (const ConvergenceRow& r : rows)
    std::cout << "n " << r.n << "  h " << fmt(r.h) << "  l2 " << fmt(r.l2_error) << " (eoc "
              << (std::isnan(r.l2_eoc) ? std::string("-") : fmt(r.l2_eoc)) << ")  h1 "
              << fmt(r.h1_error) << " (eoc "
              << (std::isnan(r.h1_eoc) ? std::string("-") : fmt(r.h1_eoc)) << ")\n";
  std::cout << "wrote " << csv_path << "\n";
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{
      "Recover piecewise-constant diffusion coefficients from state observations "
      "via phase-field relaxation"};
  app.require_subcommand(1);

  CommonArgs common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--config", common.config, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory (created if absent)");
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&common](std::uint64_t v) {
          common.seed = v;
          common.seed_set = true;
        },
        "override every random seed in the configuration");
    sub->add_option("--threads", common.threads,
                    "worker thread request (execution is serial for reproducibility)");
  };

  CLI::App* fwd = app.add_subcommand(
      "forward", "solve the forward problem for the configured objective and write the state");
  CLI::App* rec = app.add_subcommand(
      "recover", "run the inverse iteration and write the recovered phase field");
  CLI::App* gam =
      app.add_subcommand("gamma-check", "interface-energy calibration sweep over layer widths");
  CLI::App* conv =
      app.add_subcommand("convergence-study", "manufactured-solution accuracy study");
  for (CLI::App* sub : {fwd, rec, gam, conv}) add_common(sub);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("phaserec");
  for (const std::string& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (common.threads > 1)
      std::cerr << "note: --threads " << common.threads
                << " requested; running serially for reproducibility\n";
    std::filesystem::create_directories(common.out);
    const RunFile rf = RunFile::load(common.config);
    if (fwd->parsed()) return cmd_forward(rf, common);
    if (rec->parsed()) return cmd_recover(rf, common);
    if (gam->parsed()) return cmd_gamma(rf, common);
    if (conv->parsed()) return cmd_convergence(rf, common);
    throw std::runtime_error("no subcommand selected");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace phaserec
