"""Optimisation kernels shared by the classical and quantum analyses."""
from .ascent import AscentResult, VectorStrategy, alternating_ascent, vector_value
from .circle import (
    CirclePoint,
    MinimaxResult,
    circle_modulus,
    golden_section_max,
    local_maxima_on_circle,
    max_modulus_on_circle,
    minimax_circle,
)
from .zerosum import EmptyMatrix, ZeroSumSolution, solve_zero_sum

__all__ = [
    "AscentResult",
    "CirclePoint",
    "EmptyMatrix",
    "MinimaxResult",
    "VectorStrategy",
    "ZeroSumSolution",
    "alternating_ascent",
    "circle_modulus",
    "golden_section_max",
    "local_maxima_on_circle",
    "max_modulus_on_circle",
    "minimax_circle",
    "solve_zero_sum",
    "vector_value",
]
