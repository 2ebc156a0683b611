# Copyright (c) 2026 the nhdfem developers.
# SPDX-License-Identifier: Apache-2.0

from ._core import (
    ConfigError,
    Mesh,
    OutputError,
    SolverError,
    __version__,
    ball,
    mesh_info,
    permittivity,
    read_msh,
    refine,
    run_convergence,
    run_dispersion,
    run_scattering,
    solve_manufactured,
    unit_cube,
    write_msh,
)

__all__ = [
    "ConfigError",
    "Mesh",
    "OutputError",
    "SolverError",
    "__version__",
    "ball",
    "mesh_info",
    "permittivity",
    "read_msh",
    "refine",
    "run_convergence",
    "run_dispersion",
    "run_scattering",
    "solve_manufactured",
    "unit_cube",
    "write_msh",
]
