"""
Domain types: meshes, paths, segments, coefficient functionals and assumption checks.
"""

from .assumptions import AssumptionReport, SegmentPairSampler, check_assumption, estimate_m_R
from .coefficients import AffineSpec, AffineTerm, CoefficientSet, hs_norm
from .mesh import (
    PathTrajectory,
    Segment,
    TimeMesh,
    make_mesh,
    segment_at,
    steps_per_piece,
    sup_norm_batch,
    uniform_norm,
)

__all__ = [
    "TimeMesh",
    "PathTrajectory",
    "Segment",
    "make_mesh",
    "segment_at",
    "uniform_norm",
    "sup_norm_batch",
    "steps_per_piece",
    "CoefficientSet",
    "AffineSpec",
    "AffineTerm",
    "hs_norm",
    "AssumptionReport",
    "SegmentPairSampler",
    "check_assumption",
    "estimate_m_R",
]
