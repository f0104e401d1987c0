#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "phaserec/experiments.hpp"
#include "phaserec/optimizer.hpp"
#include "phaserec/rng.hpp"

using namespace phaserec;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct MicroProblem {
  Mesh mesh;
  DiscreteOperators ops;
  ObservationSpace space;
  RecoveryConfig config;
  ScalarField y_obs;
  std::vector<double> load;
  PhaseField u0;
};

// Small two-phase recovery: ellipse target, circle start, 16 cells per unit.
MicroProblem make_micro(int max_iter) {
  MicroProblem mp{build_structured_mesh(-1.0, 1.0, -1.0, 1.0, 16), {}, {}, {}, {}, {}, {}};
  mp.ops = assemble_operators(mp.mesh);
  mp.space = make_observation_space(mp.mesh, ObservationKind::Bulk);

  mp.config.eps = 1.0 / (4.0 * kPi);
  mp.config.sigma = 1e-4;
  mp.config.coefficients = {3.0, 0.5};
  mp.config.stop_residual = 1e-3;
  mp.config.max_iterations = max_iter;
  mp.config.mesh_n = 16;
  mp.config.solver_tol = 1e-10;

  ShapeSpec spec;
  spec.background_label = 2;
  ShapePrimitive e;
  e.kind = ShapePrimitive::Kind::Ellipse;
  e.cx = 0.0;
  e.cy = 0.0;
  e.rx = 0.5;
  e.ry = 0.4;
  e.label = 1;
  spec.primitives.push_back(e);
  const PhaseField u_obj = rasterize_objective(spec, mp.mesh, 2);

  const ScalarField g = boundary_flux_field(FluxCase::OpposingCorners, mp.mesh);
  mp.load = assemble_boundary_load(mp.mesh, g);
  mp.y_obs = synthesize_observation(mp.mesh, u_obj, CoefficientValues(mp.config.coefficients), mp.load,
                                    0.0, 1, mp.space);

  InitialCondition init;
  init.kind = InitialCondition::Kind::Circle;
  init.radius = 0.6;
  mp.u0 = make_initial_condition(init, mp.mesh, 2);
  return mp;
}

}  // namespace

TEST_CASE("initial conditions: barycenter, circle, random") {
  const Mesh mesh = build_structured_mesh(-1.0, 1.0, -1.0, 1.0, 4);

  SUBCASE("barycenter puts 1/r everywhere") {
    InitialCondition init;
    init.kind = InitialCondition::Kind::Barycenter;
    const PhaseField u = make_initial_condition(init, mesh, 3);
    for (int j = 0; j < u.num_nodes(); ++j)
      for (int i = 0; i < 3; ++i) CHECK(u.at(j, i) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  SUBCASE("circle assigns phase 1 inside, phase 2 outside") {
    InitialCondition init;
    init.kind = InitialCondition::Kind::Circle;
    init.radius = 0.5;
    const PhaseField u = make_initial_condition(init, mesh, 2);
    for (int j = 0; j < mesh.num_vertices(); ++j) {
      const auto& v = mesh.vertices[j];
      const bool inside = v[0] * v[0] + v[1] * v[1] <= 0.25;
      CHECK(u.at(j, 0) == (inside ? 1.0 : 0.0));
      CHECK(u.at(j, 1) == (inside ? 0.0 : 1.0));
    }
    init.radius = 0.0;
    CHECK_THROWS(make_initial_condition(init, mesh, 2));
  }

  SUBCASE("random start is feasible and seed-reproducible") {
    InitialCondition init;
    init.kind = InitialCondition::Kind::Random;
    init.seed = 42;
    const PhaseField a = make_initial_condition(init, mesh, 3);
    const PhaseField b = make_initial_condition(init, mesh, 3);
    CHECK(a.max_simplex_violation() <= 1e-12);
    CHECK(a.raw() == b.raw());
    init.seed = 43;
    const PhaseField c = make_initial_condition(init, mesh, 3);
    CHECK(a.raw() != c.raw());
  }

  SUBCASE("fewer than two phases is rejected") {
    InitialCondition init;
    CHECK_THROWS(make_initial_condition(init, mesh, 1));
  }
}

TEST_CASE("timestep bound reproduces the closed-form denominator") {
  const Mesh mesh = build_structured_mesh(-1.0, 1.0, -1.0, 1.0, 4);
  ScalarField y(mesh.num_vertices());
  for (int j = 0; j < mesh.num_vertices(); ++j) y[j] = mesh.vertices[j][0];  // |grad| = 1
  const CoefficientValues a({3.0, 0.5});
  // 1 / (1 + (9.25/0.5)*1*1 + (9.25/0.25)*(1/(2*2))*1) = 1/28.75.
  const double bound = compute_timestep_bound(mesh, y, y, a, 2.0);
  CHECK(bound == doctest::Approx(1.0 / 28.75).epsilon(1e-15));
  CHECK(bound == doctest::Approx(0.034782608695652174).epsilon(1e-15));
  CHECK_THROWS(compute_timestep_bound(mesh, y, y, a, 0.0));
}

TEST_CASE("recovery config validation and default step size") {
  const Mesh mesh = build_structured_mesh(-1.0, 1.0, -1.0, 1.0, 16);
  RecoveryConfig cfg;
  cfg.eps = 1.0 / (4.0 * kPi);
  cfg.sigma = 1e-4;
  cfg.coefficients = {3.0, 0.5};
  CHECK_NOTHROW(cfg.validate(mesh));
  CHECK(cfg.tau_initial() == doctest::Approx(0.01 / cfg.eps).epsilon(1e-15));
  cfg.tau0 = 0.25;
  CHECK(cfg.tau_initial() == doctest::Approx(0.25));

  RecoveryConfig bad = cfg;
  bad.eps = 0.05;  // eps*pi/2 = 0.0785 < h = 0.0884: unresolved interface
  CHECK_THROWS(bad.validate(mesh));
  bad = cfg;
  bad.sigma = 0.0;
  CHECK_THROWS(bad.validate(mesh));
  bad = cfg;
  bad.stop_residual = 0.0;
  CHECK_THROWS(bad.validate(mesh));
  bad = cfg;
  bad.coefficients = {3.0, -0.5};
  CHECK_THROWS(bad.validate(mesh));
  bad = cfg;
  bad.noise_amplitude = -0.1;
  CHECK_THROWS(bad.validate(mesh));
}

TEST_CASE("trace csv format: header, full precision, row per record") {
  // Dyadic values so the full-precision format prints them verbatim.
  IterationTrace trace;
  trace.records.push_back({1, 0.125, 0.5, 0.25, 0.75, 0.0625, 0, 12});
  trace.records.push_back({2, 0.125, 0.25, 0.1875, 0.4375, 0.03125, 1, 9});
  std::ostringstream out;
  trace.write_csv(out);
  const std::string text = out.str();
  CHECK(text.find("n,tau,j_fid,j_reg,j_total,residual,backtracks\n") == 0);
  CHECK(text.find("\n1,0.125,0.5,0.25,0.75,0.0625,0\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("micro recovery run: descent, feasibility, bookkeeping") {
  MicroProblem mp = make_micro(25);

  std::vector<double> violations;
  const RecoveryResult res = run_recovery(mp.mesh, mp.ops, mp.space, mp.config, mp.y_obs, mp.load, mp.u0,
                                          [&](const IterationRecord&, const PhaseField& u, const ScalarField&) {
                                            violations.push_back(u.max_simplex_violation());
                                          });

  REQUIRE(!res.trace.records.empty());
  CHECK(res.trace.records.size() == violations.size());
  for (double v : violations) CHECK(v <= 1e-10);
  CHECK(res.u.max_simplex_violation() <= 1e-10);

  // Accepted energies never increase (up to roundoff slack).
  for (size_t k = 1; k < res.trace.records.size(); ++k) {
    CHECK(res.trace.records[k].j_total <=
          res.trace.records[k - 1].j_total + 1e-12 * (1.0 + std::fabs(res.trace.records[k - 1].j_total)));
  }
  for (const auto& r : res.trace.records) {
    CHECK(std::isfinite(r.residual));
    CHECK(r.j_total == doctest::Approx(r.j_fid + r.j_reg).epsilon(1e-14));
    CHECK(r.tau > 0.0);
  }
  // Iteration numbers are consecutive from 1.
  for (size_t k = 0; k < res.trace.records.size(); ++k)
    CHECK(res.trace.records[k].n == static_cast<int>(k) + 1);
}

TEST_CASE("recovery rejects infeasible or mismatched starts") {
  MicroProblem mp = make_micro(3);
  PhaseField bad = mp.u0;
  bad.at(0, 0) += 0.5;
  CHECK_THROWS(run_recovery(mp.mesh, mp.ops, mp.space, mp.config, mp.y_obs, mp.load, bad));

  PhaseField wrong_r(mp.mesh.num_vertices(), 3, 1.0 / 3.0);
  CHECK_THROWS(run_recovery(mp.mesh, mp.ops, mp.space, mp.config, mp.y_obs, mp.load, wrong_r));
}

TEST_CASE("identical configuration gives byte-identical traces") {
  MicroProblem mp = make_micro(10);
  const RecoveryResult r1 = run_recovery(mp.mesh, mp.ops, mp.space, mp.config, mp.y_obs, mp.load, mp.u0);
  const RecoveryResult r2 = run_recovery(mp.mesh, mp.ops, mp.space, mp.config, mp.y_obs, mp.load, mp.u0);
  std::ostringstream a, b;
  r1.trace.write_csv(a);
  r2.trace.write_csv(b);
  CHECK(a.str() == b.str());
  CHECK(r1.u.raw() == r2.u.raw());
}

TEST_CASE("theoretical step-size rule runs without backtracking") {
  MicroProblem mp = make_micro(8);
  mp.config.tau_rule = TauRule::TheoreticalBound;
  const RecoveryResult res = run_recovery(mp.mesh, mp.ops, mp.space, mp.config, mp.y_obs, mp.load, mp.u0);
  REQUIRE(!res.trace.records.empty());
  for (const auto& r : res.trace.records) {
    CHECK(r.backtracks == 0);
    CHECK(r.tau <= mp.config.tau_initial() + 1e-15);
  }
}
