#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "phaserec/cli.hpp"

using namespace phaserec;
namespace fs = std::filesystem;

namespace {

RunFile parse(const std::string& text) {
  std::istringstream in(text);
  return RunFile::parse_stream(in, "<test>");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream out(p);
    out << content;
    return p;
  }
};

}  // namespace

TEST_CASE("runfile parsing: sections, comments, repeated keys, errors") {
  const RunFile rf = parse(
      "# leading comment\n"
      "[mesh]\n"
      "n = 16   ; trailing comment\n"
      "\n"
      "[model]\n"
      "epsilon = 0.05\n"
      "coefficients = 3, 0.5\n"
      "flux = top-bottom\n"
      "[objective]\n"
      "shape = circle 0 0 0.5 1\n"
      "shape = ellipse 0.1 0.2 0.3 0.4 2\n");

  CHECK(rf.has("mesh", "n"));
  CHECK(!rf.has("mesh", "missing"));
  CHECK(rf.get_int("mesh", "n") == 16);
  CHECK(rf.get_double("model", "epsilon") == doctest::Approx(0.05));
  CHECK(rf.get_string("model", "flux") == "top-bottom");
  CHECK(rf.get_string_or("model", "absent", "fallback") == "fallback");
  CHECK(rf.get_double_or("model", "absent", 2.5) == 2.5);
  CHECK(rf.get_int_or("mesh", "absent", 7) == 7);
  CHECK(rf.get_uint64_or("mesh", "absent", 11u) == 11u);
  CHECK(rf.get_double_list("model", "coefficients") == std::vector<double>({3.0, 0.5}));
  CHECK(rf.get_all("objective", "shape").size() == 2);

  CHECK_THROWS_WITH_AS(rf.get_string("mesh", "missing"),
                       doctest::Contains("mesh.missing"), std::runtime_error);
  CHECK_THROWS(parse("[mesh]\nn = not_a_number\n").get_int("mesh", "n"));
  CHECK_THROWS(parse("[mesh]\nn = 2.5\n").get_int("mesh", "n"));  // integrality
}

TEST_CASE("shape grammar: ellipse, circle, polygon") {
  const RunFile rf = parse(
      "[objective]\n"
      "background = 3\n"
      "shape = ellipse 0.0 0.0 0.5 0.4 1\n"
      "shape = circle -0.2 0.3 0.25 2\n"
      "shape = polygon 1 0 0 0.5 0 0 0.5\n");
  const ShapeSpec spec = parse_shape_spec(rf);
  CHECK(spec.background_label == 3);
  REQUIRE(spec.primitives.size() == 3);
  CHECK(spec.primitives[0].kind == ShapePrimitive::Kind::Ellipse);
  CHECK(spec.primitives[0].rx == doctest::Approx(0.5));
  CHECK(spec.primitives[0].label == 1);
  CHECK(spec.primitives[1].kind == ShapePrimitive::Kind::Circle);
  CHECK(spec.primitives[1].cx == doctest::Approx(-0.2));
  CHECK(spec.primitives[2].kind == ShapePrimitive::Kind::Polygon);
  CHECK(spec.primitives[2].polygon.size() == 3);
  CHECK(spec.primitives[2].label == 1);

  CHECK_THROWS(parse_shape_spec(parse("[objective]\nshape = blob 0 0 1 1\n")));
  CHECK_THROWS(parse_shape_spec(parse("[objective]\nshape = ellipse 0 0 0.5\n")));
  CHECK_THROWS(parse_shape_spec(parse("[objective]\nshape = polygon 1 0 0 1 1\n")));
}

TEST_CASE("flux names map to cases") {
  CHECK(parse_flux_case("opposing-corners") == FluxCase::OpposingCorners);
  CHECK(parse_flux_case("top-bottom") == FluxCase::TopBottom);
  CHECK_THROWS(parse_flux_case("sideways"));
}

TEST_CASE("recovery configuration: requirements and defaults") {
  SUBCASE("minimal file picks up documented defaults") {
    const RecoveryConfig cfg = parse_recovery_config(parse(
        "[mesh]\nn = 64\n"
        "[model]\nepsilon = 0.0198943678864869\n"));
    CHECK(cfg.mesh_n == 64);
    CHECK(cfg.sigma == doctest::Approx(1e-4));
    CHECK(cfg.coefficients == std::vector<double>({3.0, 0.5}));
    CHECK(cfg.noise_amplitude == doctest::Approx(0.05));
    CHECK(cfg.observation == ObservationKind::Bulk);
    CHECK(cfg.tau_rule == TauRule::Fixed);
    CHECK(cfg.stop_residual == doctest::Approx(1e-3));
    CHECK(cfg.max_iterations == 10000);
    CHECK(cfg.seed == 1);
    CHECK(cfg.solver_tol == doctest::Approx(1e-10));
    CHECK(cfg.initial.kind == InitialCondition::Kind::Barycenter);
    CHECK(cfg.tau_initial() == doctest::Approx(0.01 / cfg.eps));
  }

  SUBCASE("explicit settings override the defaults") {
    const RecoveryConfig cfg = parse_recovery_config(parse(
        "[mesh]\nn = 32\n"
        "[model]\nepsilon = 0.04\nsigma = 1e-3\ncoefficients = 0.8 0.2 0.3\n"
        "noise = 0\nobservation = boundary\n"
        "[iteration]\ntau_rule = bound\ntau0 = 0.2\nstop_residual = 5e-4\n"
        "max_iter = 123\nseed = 9\n"
        "[initial]\nkind = circle\ncx = 0.1\ncy = -0.1\nradius = 0.7\n"));
    CHECK(cfg.coefficients.size() == 3);
    CHECK(cfg.observation == ObservationKind::Boundary);
    CHECK(cfg.tau_rule == TauRule::TheoreticalBound);
    CHECK(cfg.tau_initial() == doctest::Approx(0.2));
    CHECK(cfg.max_iterations == 123);
    CHECK(cfg.initial.kind == InitialCondition::Kind::Circle);
    CHECK(cfg.initial.radius == doctest::Approx(0.7));
    CHECK(cfg.initial.seed == 9);  // inherits the iteration seed
  }

  SUBCASE("random start takes its own seed when given") {
    const RecoveryConfig cfg = parse_recovery_config(parse(
        "[mesh]\nn = 32\n[model]\nepsilon = 0.04\n"
        "[iteration]\nseed = 4\n[initial]\nkind = random\nseed = 77\n"));
    CHECK(cfg.initial.kind == InitialCondition::Kind::Random);
    CHECK(cfg.initial.seed == 77);
    CHECK(cfg.seed == 4);
  }

  SUBCASE("missing required keys fail loudly") {
    CHECK_THROWS(parse_recovery_config(parse("[model]\nepsilon = 0.05\n")));
    CHECK_THROWS(parse_recovery_config(parse("[mesh]\nn = 64\n")));
    CHECK_THROWS(parse_recovery_config(parse(
        "[mesh]\nn = 64\n[model]\nepsilon = 0.02\n[initial]\nkind = circle\n")));
  }
}

TEST_CASE("manufactured convergence study shows second order in L2, first in H1") {
  const auto rows = run_convergence_study({8, 16, 32});
  REQUIRE(rows.size() == 3);
  CHECK(std::isnan(rows[0].l2_eoc));
  CHECK(std::isnan(rows[0].h1_eoc));
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].h == doctest::Approx(std::sqrt(2.0) / rows[i].n));
    CHECK(rows[i].l2_error > 0.0);
    CHECK(rows[i].h1_error > 0.0);
  }
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].l2_eoc >= 1.8);
    CHECK(rows[i].l2_eoc <= 2.2);
    CHECK(rows[i].h1_eoc >= 0.8);
    CHECK(rows[i].h1_eoc <= 1.2);
  }

  std::ostringstream out;
  write_convergence_csv(rows, out);
  const std::string text = out.str();
  CHECK(text.find("n,h,l2_error,l2_eoc,h1_error,h1_eoc\n") == 0);
  // First data row has empty EOC columns.
  const size_t line1 = text.find('\n') + 1;
  const std::string row0 = text.substr(line1, text.find('\n', line1) - line1);
  CHECK(row0.find(",,") != std::string::npos);

  CHECK_THROWS(run_convergence_study({}));
}

TEST_CASE("cli: argument errors and unknown subcommands fail") {
  CHECK(run_cli({}) != 0);
  CHECK(run_cli({"unknown-subcommand"}) != 0);
  CHECK(run_cli({"recover"}) != 0);                              // --config required
  CHECK(run_cli({"recover", "--config", "/nonexistent.ini"}) != 0);
}

TEST_CASE("cli: convergence study writes the expected csv") {
  TempDir dir("phaserec_cli_conv");
  const fs::path cfg = dir.file("study.ini", "[study]\nlevels = 8 16\n");
  const fs::path out = dir.path / "out";
  fs::create_directories(out);
  CHECK(run_cli({"convergence-study", "--config", cfg.string(), "--out", out.string()}) == 0);
  const std::string csv = slurp(out / "convergence.csv");
  CHECK(csv.find("n,h,l2_error,l2_eoc,h1_error,h1_eoc\n") == 0);
  CHECK(csv.find("\n8,") != std::string::npos);
  CHECK(csv.find("\n16,") != std::string::npos);
}

TEST_CASE("cli: gamma check writes a row per eps value") {
  TempDir dir("phaserec_cli_gamma");
  const fs::path cfg = dir.file("gamma.ini",
                                "[gamma]\ncase = flat\nx0 = 0\n"
                                "eps_list = 0.15915494309189535 0.07957747154594767\n");
  const fs::path out = dir.path / "out";
  fs::create_directories(out);
  CHECK(run_cli({"gamma-check", "--config", cfg.string(), "--out", out.string()}) == 0);
  const std::string csv = slurp(out / "gamma.csv");
  CHECK(csv.find("eps,f_eps,f_sharp,gap\n") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
}

TEST_CASE("cli: forward solve emits a field file and a boundary trace") {
  TempDir dir("phaserec_cli_fwd");
  const fs::path cfg = dir.file("fwd.ini",
                                "[mesh]\nn = 8\n"
                                "[model]\nflux = opposing-corners\n"
                                "[objective]\nbackground = 2\n"
                                "shape = ellipse 0 0 0.5 0.4 1\n");
  const fs::path out = dir.path / "out";
  fs::create_directories(out);
  CHECK(run_cli({"forward", "--config", cfg.string(), "--out", out.string()}) == 0);
  const std::string vtk = slurp(out / "state.vtk");
  CHECK(vtk.find("SCALARS phase_1 double 1") != std::string::npos);
  CHECK(vtk.find("SCALARS coefficient double 1") != std::string::npos);
  CHECK(vtk.find("SCALARS state double 1") != std::string::npos);
  const std::string trace = slurp(out / "boundary_trace.csv");
  CHECK(trace.find("s,x,y,state\n") == 0);
  // n = 8 cells per unit length on the 2x2 box: 16 cells per side, so
  // 4 * 16 = 64 boundary vertices, one row each plus the header.
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 65);
}

TEST_CASE("cli: recovery run produces deterministic outputs and a summary") {
  TempDir dir("phaserec_cli_rec");
  const std::string cfg_text =
      "[mesh]\nn = 8\n"
      "[model]\nepsilon = 0.15915494309189535\nsigma = 1e-4\nnoise = 0.01\n"
      "[iteration]\nmax_iter = 5\nseed = 3\n"
      "[objective]\nbackground = 2\nshape = circle 0 0 0.5 1\n"
      "[initial]\nkind = circle\nradius = 0.6\n";
  const fs::path cfg = dir.file("rec.ini", cfg_text);
  const fs::path out1 = dir.path / "run1";
  const fs::path out2 = dir.path / "run2";
  fs::create_directories(out1);
  fs::create_directories(out2);

  CHECK(run_cli({"recover", "--config", cfg.string(), "--out", out1.string()}) == 0);
  CHECK(run_cli({"recover", "--config", cfg.string(), "--out", out2.string()}) == 0);

  const std::string summary = slurp(out1 / "summary.txt");
  CHECK(summary.find("command = recover\n") == 0);
  CHECK(summary.find("mesh.n = 8") != std::string::npos);
  CHECK(summary.find("result.iterations = 5") != std::string::npos);
  CHECK(summary.find("result.j_total = ") != std::string::npos);
  CHECK(summary.find("result.l1_mismatch = ") != std::string::npos);
  CHECK(summary.find("result.components.phase1 = ") != std::string::npos);

  // Identical runfile + seed -> byte-identical outputs.
  CHECK(slurp(out1 / "trace.csv") == slurp(out2 / "trace.csv"));
  CHECK(slurp(out1 / "summary.txt") == slurp(out2 / "summary.txt"));
  CHECK(slurp(out1 / "recovered.vtk") == slurp(out2 / "recovered.vtk"));

  // A different seed changes the noisy observation and thus the trace.
  const fs::path out3 = dir.path / "run3";
  fs::create_directories(out3);
  CHECK(run_cli({"recover", "--config", cfg.string(), "--out", out3.string(), "--seed", "99"}) == 0);
  CHECK(slurp(out1 / "trace.csv") != slurp(out3 / "trace.csv"));
}
