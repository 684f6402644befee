"""
Monte Carlo experiments checking exponential approximation, tightness and the rate bounds.
"""

from .bounds import (
    EpsLogRow,
    StroockReport,
    eps_log_max,
    stroock_bound,
    stroock_bound_check,
    two_sided_crossing_probability,
)
from .compare import ComparisonReport, ComparisonRow, compare_rate_vs_mc
from .experiments import (
    CLOSENESS,
    TIGHTNESS,
    TRUNCATION,
    verify_exponential_closeness,
    verify_tightness,
    verify_truncation_closeness,
)
from .montecarlo import CHUNK, DecayCurve, DecayRow, MCResult, mc_probability

__all__ = [
    "CHUNK",
    "MCResult",
    "DecayRow",
    "DecayCurve",
    "mc_probability",
    "CLOSENESS",
    "TIGHTNESS",
    "TRUNCATION",
    "verify_exponential_closeness",
    "verify_tightness",
    "verify_truncation_closeness",
    "StroockReport",
    "stroock_bound",
    "stroock_bound_check",
    "two_sided_crossing_probability",
    "EpsLogRow",
    "eps_log_max",
    "ComparisonRow",
    "ComparisonReport",
    "compare_rate_vs_mc",
]
