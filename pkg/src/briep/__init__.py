"""Barycentric interpolation at equilibrium-potential point sets.

The package solves a first-kind boundary integral equation for the
equilibrium (or condenser) density of a compact region, turns the density
into interpolation nodes and pole locations by inverse-CDF sampling, and
evaluates the resulting polynomial or rational interpolant in barycentric
form.  A small CLI drives full runs from JSON configs and writes CSV
artifacts plus diagnostic figures.
"""

__version__ = "0.1.0"

from .barycentric import (
    Interpolant,
    evaluate,
    evaluate_many,
    weights_polynomial,
    weights_rational,
)
from .config import RunConfig, load_config, parse_config
from .density import PointFamily, StepDensity, allocate_counts, den2pts
from .errors import (
    BriepError,
    ConfigError,
    GeometryError,
    InvalidGeometryError,
    SolverError,
)
from .functions import BUILTINS, TableFunction, TargetFunction, build_function
from .geometry import (
    BoundaryComponent,
    CircularArc,
    LineSegment,
    Panel,
    PanelizedBoundary,
    ParametricPiece,
    panelize,
)
from .potential import (
    DiscreteMeasure,
    discrete_potential,
    observed_rate,
    potential_grid,
)
from .runner import (
    RunReport,
    build_error_samples,
    density_ratio_diagnostic,
    emit_artifacts,
    measure_error,
    run,
    run_bpiep,
    run_briep,
)
from .symm import (
    CondenserSystem,
    EquilibriumProblem,
    EquilibriumSolution,
    kernel_diag,
    kernel_offdiag,
    potential_of_density,
    predicted_rate,
    solve_condenser,
    solve_polynomial,
)

__all__ = [
    "__version__",
    "Interpolant",
    "evaluate",
    "evaluate_many",
    "weights_polynomial",
    "weights_rational",
    "RunConfig",
    "load_config",
    "parse_config",
    "PointFamily",
    "StepDensity",
    "allocate_counts",
    "den2pts",
    "BriepError",
    "ConfigError",
    "GeometryError",
    "InvalidGeometryError",
    "SolverError",
    "BUILTINS",
    "TableFunction",
    "TargetFunction",
    "build_function",
    "BoundaryComponent",
    "CircularArc",
    "LineSegment",
    "Panel",
    "PanelizedBoundary",
    "ParametricPiece",
    "panelize",
    "DiscreteMeasure",
    "discrete_potential",
    "observed_rate",
    "potential_grid",
    "RunReport",
    "build_error_samples",
    "density_ratio_diagnostic",
    "emit_artifacts",
    "measure_error",
    "run",
    "run_bpiep",
    "run_briep",
    "CondenserSystem",
    "EquilibriumProblem",
    "EquilibriumSolution",
    "kernel_diag",
    "kernel_offdiag",
    "potential_of_density",
    "predicted_rate",
    "solve_condenser",
    "solve_polynomial",
]
