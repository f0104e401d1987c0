"""Phase-field recovery of piecewise-constant diffusion coefficients.

Thin Python surface over the C++ core: structured meshes, the simplex
projection, the diffuse-interface profile, perimeter-calibration sweeps,
the forward-solver accuracy study, and the command-line driver.
"""

from ._core import (
    Mesh,
    build_structured_mesh,
    convergence_study,
    gamma_check,
    mesh_subdivisions_for_eps,
    optimal_profile,
    project_simplex,
    run_cli,
)

__all__ = [
    "Mesh",
    "build_structured_mesh",
    "convergence_study",
    "gamma_check",
    "mesh_subdivisions_for_eps",
    "optimal_profile",
    "project_simplex",
    "run_cli",
]

__version__ = "0.1.0"
