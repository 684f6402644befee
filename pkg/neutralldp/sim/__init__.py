"""
Simulation of the neutral stochastic equation and its frozen-argument scheme.
"""

from .neutral import DEFAULT_MAX_ITER, DEFAULT_TOL, iteration_bound, neutral_fixed_point_step
from .noise import (
    BrownianIncrements,
    NoiseSeed,
    brownian_increments,
    brownian_increments_batch,
)
from .scheme import (
    frozen_segment,
    neutral_difference_bound,
    simulate_batch,
    simulate_frozen_scheme,
    simulate_nsfde,
)

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITER",
    "NoiseSeed",
    "BrownianIncrements",
    "brownian_increments",
    "brownian_increments_batch",
    "neutral_fixed_point_step",
    "iteration_bound",
    "simulate_nsfde",
    "simulate_frozen_scheme",
    "simulate_batch",
    "frozen_segment",
    "neutral_difference_bound",
]
