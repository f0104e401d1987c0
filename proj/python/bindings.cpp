// pybind11 surface for the phaserec core: structured meshes, the simplex
// projection, the interface profile, the perimeter-calibration sweep, the
// forward-solver accuracy study, and the full command-line driver.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaserec/cli.hpp"
#include "phaserec/gamma.hpp"
#include "phaserec/mesh.hpp"
#include "phaserec/vi_step.hpp"

namespace py = pybind11;
using namespace phaserec;

namespace {

PartitionSpec partition_by_name(const std::string& name, double radius) {
  if (name == "flat") return vertical_interface(0.0);
  if (name == "circle") return circle_partition(0.0, 0.0, radius);
  if (name == "triple") return triple_junction();
  throw std::invalid_argument("unknown partition case '" + name + "' (flat|circle|triple)");
}

double sharp_limit_by_name(const std::string& name, double radius) {
  if (name == "flat") return sharp_limit_vertical_interface();
  if (name == "circle") return sharp_limit_circle(radius);
  if (name == "triple") return sharp_limit_triple_junction();
  throw std::invalid_argument("unknown partition case '" + name + "' (flat|circle|triple)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Piecewise-constant diffusion-coefficient recovery via phase fields";

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_triangles", &Mesh::num_triangles)
      .def_property_readonly("num_boundary_edges",
                             [](const Mesh& mesh) { return mesh.boundary_edges.size(); })
      .def_readonly("h", &Mesh::h)
      .def("total_area", &Mesh::total_area)
      .def("boundary_length", &Mesh::boundary_length)
      .def("vertices", [](const Mesh& mesh) { return mesh.vertices; })
      .def("__repr__", [](const Mesh& mesh) {
        return "<Mesh " + std::to_string(mesh.num_vertices()) + " vertices, " +
               std::to_string(mesh.num_triangles()) + " triangles>";
      });

  m.def("build_structured_mesh", &build_structured_mesh, py::arg("xmin"), py::arg("xmax"),
        py::arg("ymin"), py::arg("ymax"), py::arg("n"),
        "Uniform triangulation of an axis-aligned rectangle (n cells per unit length).");

  m.def(
      "project_simplex",
      [](std::vector<double> v) {
        project_simplex(std::span<double>(v));
        return v;
      },
      py::arg("v"), "Euclidean projection onto the probability simplex.");

  m.def("optimal_profile", &optimal_profile, py::arg("tau"), py::arg("eps"),
        "Monotone sine interface profile across a layer of width eps*pi.");

  m.def("mesh_subdivisions_for_eps", &mesh_subdivisions_for_eps, py::arg("eps"),
        py::arg("factor"), "Smallest n with sqrt(2)/n <= eps/factor.");

  m.def(
      "gamma_check",
      [](const std::string& partition, const std::vector<double>& eps_values, double radius,
         double resolution_factor) {
        const auto rows = gamma_sweep(partition_by_name(partition, radius), eps_values,
                                      sharp_limit_by_name(partition, radius), resolution_factor);
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["eps"] = r.eps;
          d["mesh_n"] = r.mesh_n;
          d["f_eps"] = r.f_eps;
          d["f_sharp"] = r.f_sharp;
          d["gap"] = r.gap;
          out.append(d);
        }
        return out;
      },
      py::arg("partition"), py::arg("eps_values"), py::arg("radius") = 0.5,
      py::arg("resolution_factor") = 8.0,
      "Relaxed-perimeter energies of the profile construction vs the sharp limit.");

  m.def(
      "convergence_study",
      [](const std::vector<int>& levels) {
        const auto rows = run_convergence_study(levels);
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["n"] = r.n;
          d["h"] = r.h;
          d["l2_error"] = r.l2_error;
          d["l2_eoc"] = r.l2_eoc;
          d["h1_error"] = r.h1_error;
          d["h1_eoc"] = r.h1_eoc;
          out.append(d);
        }
        return out;
      },
      py::arg("levels"),
      "Manufactured-solution errors and observed orders of the forward solver.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return run_cli(args);
      },
      py::arg("args"),
      "Invoke the command-line driver (forward | recover | gamma-check | "
      "convergence-study); returns the exit code.");
}
