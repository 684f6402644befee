"""
The action functional, path events, the rate optimiser and the least-norm oracle.
"""

from .action import action
from .events import ENDPOINT_BALL, ENDPOINT_HALFSPACE, KINDS, SUP_TUBE, EventSpec
from .optimizer import (
    RateOptions,
    RateProblem,
    RateResult,
    fd_gradient_check,
    minimize_action,
    rate_for_event,
    rate_for_event_truncated,
)
from .oracle import endpoint_sensitivity, qp_oracle_linear

__all__ = [
    "action",
    "EventSpec",
    "KINDS",
    "ENDPOINT_BALL",
    "SUP_TUBE",
    "ENDPOINT_HALFSPACE",
    "RateOptions",
    "RateProblem",
    "RateResult",
    "minimize_action",
    "rate_for_event",
    "rate_for_event_truncated",
    "fd_gradient_check",
    "qp_oracle_linear",
    "endpoint_sensitivity",
]
