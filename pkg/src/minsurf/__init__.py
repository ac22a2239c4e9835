"""Mesh-free minimal-surface solver.

Harmonic coordinates come from fundamental-solution collocation on the unit
disk; the boundary reparametrization is tuned by accelerated gradient
descent on a discrete conformality energy; search tooling enumerates
distinct spanning surfaces of one boundary curve.
"""

from . import curves
from .mfs import MfsBasis, build_basis
from .optimizer import (
    NumericalError,
    OptimizerSettings,
    SolveReport,
    energy,
    gradient,
    nesterov_run,
)
from .search import (
    SolutionCluster,
    SweepSpec,
    classify,
    fourier_initial,
    random_initial,
    random_search,
    sweep,
)
from .surface import (
    ApproximateSurface,
    Configuration,
    FundamentalForms,
    Mesh,
    build_surface,
    dilatation_disk_sup,
    mean_curvature_disk_sup,
)

__all__ = [
    "ApproximateSurface",
    "Configuration",
    "FundamentalForms",
    "Mesh",
    "MfsBasis",
    "NumericalError",
    "OptimizerSettings",
    "SolutionCluster",
    "SolveReport",
    "SweepSpec",
    "build_basis",
    "build_surface",
    "classify",
    "curves",
    "dilatation_disk_sup",
    "energy",
    "fourier_initial",
    "gradient",
    "mean_curvature_disk_sup",
    "nesterov_run",
    "random_initial",
    "random_search",
    "sweep",
]

__version__ = "0.1.0"
