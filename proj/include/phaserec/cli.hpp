#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "phaserec/experiments.hpp"
#include "phaserec/optimizer.hpp"
#include "phaserec/runfile.hpp"

namespace phaserec {

/// [objective] section: "background = <label>" plus repeated
/// "shape = ellipse cx cy rx ry label | circle cx cy radius label |
///  polygon label x1 y1 x2 y2 x3 y3 ...".
ShapeSpec parse_shape_spec(const RunFile& rf);

/// model.flux: opposing-corners | top-bottom.
FluxCase parse_flux_case(const std::string& name);

/// mesh/model/iteration/initial sections -> solver configuration.
RecoveryConfig parse_recovery_config(const RunFile& rf);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double l2_error = 0.0;
  double l2_eoc = 0.0;  // NaN on the first row
  double h1_error = 0.0;
  double h1_eoc = 0.0;  // NaN on the first row
};

/// Manufactured-solution accuracy study: harmonic saddle x^2 - y^2 with
/// constant coefficient 3 on (-1,1)^2 and the matching side fluxes; reports
/// exact-quadrature errors and observed convergence orders.
std::vector<ConvergenceRow> run_convergence_study(const std::vector<int>& levels);

/// Columns: n,h,l2_error,l2_eoc,h1_error,h1_eoc (EOC blank on first row).
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);

/// Command-line driver. args excludes the program name. Returns the process
/// exit code. Subcommands: forward, recover, gamma-check, convergence-study.
int run_cli(std::vector<std::string> args);

}  // namespace phaserec
