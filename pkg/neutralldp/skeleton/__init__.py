"""
Controlled skeleton equations F^n(h), F(h) and the truncated skeleton F^R(h).
"""

from .controls import ControlPath
from .solve import (
    apriori_bound_sweep,
    convergence_slope,
    skeleton_convergence_sweep,
    solve_skeleton,
    solve_skeleton_batch,
    solve_skeleton_n,
)
from .truncation import solve_skeleton_truncated, truncate_coeffs

__all__ = [
    "ControlPath",
    "solve_skeleton",
    "solve_skeleton_n",
    "solve_skeleton_batch",
    "skeleton_convergence_sweep",
    "convergence_slope",
    "apriori_bound_sweep",
    "truncate_coeffs",
    "solve_skeleton_truncated",
]
