"""Alpha-Bowen entropy, alpha-BS dimension and pressure on symbolic systems."""

from __future__ import annotations

from .symbolic import (
    ConvergenceError,
    EmptySubshiftError,
    IncidenceMatrix,
    SymbolicPoint,
    count_words,
    spectral_radius,
)
from .geometry import BallSpec, alpha_distance, alpha_entropy_sft, cylinder_length, hausdorff_dimension_sft
from .potential import Potential
from .caratheodory import (
    CoverProblem,
    CoverValue,
    bs_dimension,
    critical_exponent,
    outer_measure,
    pressure_value,
    weighted_cover_min,
)

__version__ = "0.1.0"

__all__ = [
    "BallSpec", "ConvergenceError", "CoverProblem", "CoverValue", "EmptySubshiftError",
    "IncidenceMatrix", "Potential", "SymbolicPoint", "alpha_distance", "alpha_entropy_sft",
    "bs_dimension", "count_words", "critical_exponent", "cylinder_length",
    "hausdorff_dimension_sft", "outer_measure", "pressure_value", "spectral_radius",
    "weighted_cover_min",
]
