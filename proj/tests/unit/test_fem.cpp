#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "phaserec/fem.hpp"
#include "phaserec/mesh.hpp"
#include "phaserec/rng.hpp"

using namespace phaserec;

namespace {

double entry(const SparseMatrix& A, int i, int j) {
  for (int k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
    if (A.col_indices[k] == j) return A.values[k];
  return 0.0;
}

ScalarField nodal(const Mesh& mesh, double (*f)(double, double)) {
  ScalarField v(mesh.num_vertices());
  for (int j = 0; j < mesh.num_vertices(); ++j) v[j] = f(mesh.vertices[j][0], mesh.vertices[j][1]);
  return v;
}

PhaseField random_feasible(const Mesh& mesh, int r, std::uint64_t seed) {
  Rng rng(seed);
  PhaseField u(mesh.num_vertices(), r);
  for (int j = 0; j < mesh.num_vertices(); ++j) {
    double sum = 0.0;
    std::vector<double> e(r);
    for (int i = 0; i < r; ++i) {
      e[i] = rng.exponential();
      sum += e[i];
    }
    for (int i = 0; i < r; ++i) u.at(j, i) = e[i] / sum;
  }
  return u;
}

}  // namespace

TEST_CASE("coefficient values record min, max and the quadratic norm") {
  const CoefficientValues a({3.0, 0.5});
  CHECK(a.phases() == 2);
  CHECK(a.a_min == doctest::Approx(0.5));
  CHECK(a.a_max == doctest::Approx(3.0));
  CHECK(a.a_hat == doctest::Approx(std::sqrt(9.25)).epsilon(1e-15));
  CHECK_THROWS(CoefficientValues({}));
  CHECK_THROWS(CoefficientValues({1.0, -0.5}));
  CHECK_THROWS(CoefficientValues({1.0, 0.0}));
}

TEST_CASE("phase field storage, simplex violation, and nodal coefficient") {
  PhaseField u(3, 2);
  u.set_component(0, {1.0, 0.5, 0.25});
  u.set_component(1, {0.0, 0.5, 0.25});
  CHECK(u.at(1, 0) == doctest::Approx(0.5));
  CHECK(u.component_copy(1) == std::vector<double>({0.0, 0.5, 0.25}));
  // Node 2 sums to 0.5 -> violation 0.5.
  CHECK(u.max_simplex_violation() == doctest::Approx(0.5));
  u.at(2, 1) = 0.75;
  CHECK(u.max_simplex_violation() == doctest::Approx(0.0));
  u.at(0, 1) = -0.25;
  CHECK(u.max_simplex_violation() == doctest::Approx(0.25));

  u.at(0, 1) = 0.0;
  const CoefficientValues a({3.0, 0.5});
  const ScalarField coeff = diffusion_coefficient(u, a);
  CHECK(coeff[0] == doctest::Approx(3.0));
  CHECK(coeff[1] == doctest::Approx(1.75));
  // r=3 hand value: a=(0.8,0.2,0.3), u=(0.5,0.25,0.25) -> 0.525.
  PhaseField w(1, 3);
  w.at(0, 0) = 0.5;
  w.at(0, 1) = 0.25;
  w.at(0, 2) = 0.25;
  CHECK(diffusion_coefficient(w, CoefficientValues({0.8, 0.2, 0.3}))[0] == doctest::Approx(0.525));
}

TEST_CASE("unit-square stiffness and mass rows match hand assembly") {
  const Mesh mesh = build_structured_mesh(0.0, 1.0, 0.0, 1.0, 1);
  // Vertices: 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1).
  const SparseMatrix K = assemble_unit_stiffness(mesh);
  CHECK(entry(K, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(entry(K, 0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(entry(K, 0, 2) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(entry(K, 0, 3) == doctest::Approx(0.0));

  const SparseMatrix M = assemble_mass(mesh);
  CHECK(entry(M, 0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(entry(M, 0, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(entry(M, 0, 2) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(entry(M, 0, 3) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("operator identities: kernel, row sums, symmetry, lumping") {
  const Mesh mesh = build_structured_mesh(-1.0, 1.0, -1.0, 1.0, 6);
  const int N = mesh.num_vertices();
  const SparseMatrix K = assemble_unit_stiffness(mesh);
  const SparseMatrix M = assemble_mass(mesh);
  const std::vector<double> ones(N, 1.0);

  // Constants lie in the stiffness kernel.
  const std::vector<double> K1 = K.multiply(ones);
  for (double v : K1) CHECK(std::fabs(v) <= 1e-13);

  // Mass row sums equal the lumped mass; total mass equals the area.
  const std::vector<double> Mrow = M.multiply(ones);
  const std::vector<double> L = assemble_lumped_mass(mesh);
  double total = 0.0;
  for (int j = 0; j < N; ++j) {
    CHECK(Mrow[j] == doctest::Approx(L[j]).epsilon(1e-13));
    total += L[j];
  }
  CHECK(total == doctest::Approx(mesh.total_area()).epsilon(1e-13));

  CHECK(K.max_asymmetry() <= 1e-12);
  CHECK(M.max_asymmetry() <= 1e-15);

  // Boundary mass: row sums are zero at interior vertices, total = perimeter.
  const SparseMatrix B = assemble_boundary_mass(mesh);
  const std::vector<double> Brow = B.multiply(ones);
  double perimeter = 0.0;
  for (double v : Brow) perimeter += v;
  CHECK(perimeter == doctest::Approx(mesh.boundary_length()).epsilon(1e-13));
}

TEST_CASE("assembly does not depend on triangle ordering") {
  Mesh mesh = build_structured_mesh(0.0, 1.0, 0.0, 1.0, 4);
  const SparseMatrix K0 = assemble_unit_stiffness(mesh);
  const SparseMatrix M0 = assemble_mass(mesh);

  // Deterministic shuffle of the element list.
  Rng rng(7);
  for (size_t i = mesh.triangles.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(mesh.triangles[i - 1], mesh.triangles[std::min(j, i - 1)]);
  }
  const SparseMatrix K1 = assemble_unit_stiffness(mesh);
  const SparseMatrix M1 = assemble_mass(mesh);
  REQUIRE(K0.col_indices == K1.col_indices);
  for (int k = 0; k < K0.nnz(); ++k) CHECK(K0.values[k] == doctest::Approx(K1.values[k]).epsilon(1e-14));
  for (int k = 0; k < M0.nnz(); ++k) CHECK(M0.values[k] == doctest::Approx(M1.values[k]).epsilon(1e-14));
}

TEST_CASE("stiffness depends affinely on the phase field") {
  const Mesh mesh = build_structured_mesh(0.0, 1.0, 0.0, 1.0, 3);
  const CoefficientValues a({3.0, 0.5});
  const PhaseField u = random_feasible(mesh, 2, 11);

  // Simplex-tangent direction: components sum to zero per node.
  Rng rng(12);
  PhaseField w(mesh.num_vertices(), 2);
  for (int j = 0; j < mesh.num_vertices(); ++j) {
    const double z = 0.1 * (rng.uniform() - 0.5);
    w.at(j, 0) = z;
    w.at(j, 1) = -z;
  }

  auto shifted = [&](double t) {
    PhaseField v = u;
    for (size_t k = 0; k < v.raw().size(); ++k) v.raw()[k] += t * w.raw()[k];
    return assemble_stiffness(mesh, diffusion_coefficient(v, a));
  };
  const SparseMatrix A0 = shifted(0.0);
  const SparseMatrix A1 = shifted(0.05);
  const SparseMatrix A2 = shifted(0.10);
  REQUIRE(A0.nnz() == A2.nnz());
  for (int k = 0; k < A0.nnz(); ++k) {
    const double second_difference = A0.values[k] - 2.0 * A1.values[k] + A2.values[k];
    CHECK(std::fabs(second_difference) <= 1e-12 * (1.0 + std::fabs(A0.values[k])));
  }
}

TEST_CASE("stiffness assembly rejects non-positive coefficients") {
  const Mesh mesh = build_structured_mesh(0.0, 1.0, 0.0, 1.0, 2);
  ScalarField coeff(mesh.num_vertices(), 1.0);
  coeff[3] = 0.0;
  CHECK_THROWS(assemble_stiffness(mesh, coeff));
}

TEST_CASE("integral functionals reproduce closed forms") {
  const Mesh mesh = build_structured_mesh(0.0, 1.0, 0.0, 1.0, 8);
  const ScalarField f = nodal(mesh, +[](double x, double y) { return x + 2.0 * y; });
  // grad f = (1,2): energy 5*area, max gradient sqrt(5).
  CHECK(gradient_energy(mesh, f) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(max_gradient(mesh, f) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-13));

  const ScalarField g = nodal(mesh, +[](double x, double) { return x; });
  // integral of x^2 over the unit square (P1-exact quadrature).
  CHECK(l2_norm_squared(mesh, g) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("weighted gradient load with unit coefficient equals the stiffness action") {
  const Mesh mesh = build_structured_mesh(-1.0, 1.0, -1.0, 1.0, 5);
  const ScalarField y = nodal(mesh, +[](double x, double yy) { return x * x - yy + 0.3 * x * yy; });
  const ScalarField ones(mesh.num_vertices(), 1.0);
  const std::vector<double> lhs = weighted_gradient_load(mesh, ones, y);
  const std::vector<double> rhs = assemble_unit_stiffness(mesh).multiply(y);
  for (int j = 0; j < mesh.num_vertices(); ++j)
    CHECK(lhs[j] == doctest::Approx(rhs[j]).epsilon(1e-12));

  // Signed coefficients are admitted (difference of two phases).
  ScalarField signed_coeff(mesh.num_vertices());
  for (int j = 0; j < mesh.num_vertices(); ++j) signed_coeff[j] = mesh.vertices[j][0];
  CHECK_NOTHROW(weighted_gradient_load(mesh, signed_coeff, y));
}

TEST_CASE("gradient pair load sums to the pairing by partition of unity") {
  const Mesh mesh = build_structured_mesh(0.0, 1.0, 0.0, 1.0, 6);
  const ScalarField y = nodal(mesh, +[](double x, double) { return x; });
  const std::vector<double> d = gradient_pair_load(mesh, y, y);
  const double sum = std::accumulate(d.begin(), d.end(), 0.0);
  // sum_j d_j = integral(grad y . grad y) = area = 1.
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sum == doctest::Approx(gradient_energy(mesh, y)).epsilon(1e-13));
}

TEST_CASE("boundary load quadrature on a single edge") {
  const Mesh mesh = build_structured_mesh(0.0, 1.0, 0.0, 1.0, 1);
  // Edge data: bottom (1,1), top (-1,-1), sides zero -> compatible.
  std::vector<std::array<double, 2>> edge_values(mesh.boundary_edges.size(), {0.0, 0.0});
  for (size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    if (mesh.boundary_edges[e].side == BoundarySide::Bottom) edge_values[e] = {1.0, 1.0};
    if (mesh.boundary_edges[e].side == BoundarySide::Top) edge_values[e] = {-1.0, -1.0};
  }
  const std::vector<double> load = assemble_boundary_load_edges(mesh, edge_values);
  // Vertices: 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1); edge length 1 with constant
  // data g=1 contributes 1/2 per endpoint.
  CHECK(load[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(load[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(load[2] == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(load[3] == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("nodal boundary load equals boundary mass action and enforces compatibility") {
  const Mesh mesh = build_structured_mesh(-1.0, 1.0, -1.0, 1.0, 4);
  const ScalarField g = nodal(mesh, +[](double x, double) { return x; });  // odd -> compatible
  const std::vector<double> load = assemble_boundary_load(mesh, g);
  const std::vector<double> ref = assemble_boundary_mass(mesh).multiply(g);
  double total = 0.0;
  for (int j = 0; j < mesh.num_vertices(); ++j) {
    CHECK(load[j] == doctest::Approx(ref[j]).epsilon(1e-12));
    total += load[j];
  }
  CHECK(std::fabs(total) <= 1e-13);

  const ScalarField bad(mesh.num_vertices(), 1.0);  // integral = perimeter != 0
  CHECK_THROWS(assemble_boundary_load(mesh, bad));
}
