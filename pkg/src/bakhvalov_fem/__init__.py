"""Linear finite elements on Bakhvalov meshes for two-parameter
singularly perturbed problems

    -eps1 u'' + eps2 b u' + c u = f  on (0, 1),  u(0) = u(1) = 0.
"""
from .exceptions import BakhvalovError, ConfigError, EvaluationError, SolverError, UndefinedRateError
from .fem import PiecewiseLinear, TridiagonalSystem, assemble, galerkin_residual, solve, thomas
from .interpolation import hat_energy_norm, lagrange_interpolate, pi_interpolate
from .mesh import (BakhvalovMesh, MeshParams, build_mesh, format_mesh, mesh_diagnostics,
                   parse_mesh_dump, transition_points, uniform_mesh)
from .metrics import (ErrorReport, convergence_rate, energy_error_continuous,
                      energy_norm_discrete_diff, layer_interpolation_errors)
from .problem import (ManufacturedSolution, ScalarField, TwoParamBVP, characteristic_roots,
                      closed_form_roots, manufactured_solution, test_problem, validate_problem)
from .quadrature import DEFAULT_ASSEMBLY, DEFAULT_ERROR, MIDPOINT, QuadratureRule
from .reference import load_reference
from .study import (ConvergenceTable, StudyConfig, check_against_reference, run_study,
                    solve_cell, table_config)

__version__ = "0.1.0"
