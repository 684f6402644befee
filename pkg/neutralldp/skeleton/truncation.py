"""
Truncated coefficients G_R, b_R, sigma_R: componentwise clamps to +-(m_R + 1).

On the R-ball the clamps are inactive when m_R bounds the coefficients there, so the
truncated equation agrees with the original one for paths that stay inside the ball.
"""

import attr
import numpy as np

from .._errors import NonPositiveR
from ..sim.neutral import DEFAULT_MAX_ITER, DEFAULT_TOL
from .solve import solve_skeleton


@attr.s(frozen=True, slots=True, eq=False)
class _Clamped:
    functional = attr.ib()
    limit = attr.ib()

    def __call__(self, window):
        return np.clip(self.functional(window), -self.limit, self.limit)


def truncate_coeffs(coeffs, R, m_R):
    """
    Clamp every scalar component of G, b and sigma to [-(m_R + 1), m_R + 1].

    The result inherits kappa and lip_L and declares bound_M = d (m_R + 1), which bounds
    both the clamped drift and the Hilbert-Schmidt norm of the clamped diffusion.

    :raises NonPositiveR: if R <= 0
    """
    if not R > 0:
        raise NonPositiveR(f"R must be positive, got {R}", R=R)
    limit = float(m_R) + 1.0
    return attr.evolve(
        coeffs,
        G=_Clamped(coeffs.G, limit),
        b=_Clamped(coeffs.b, limit),
        sigma=_Clamped(coeffs.sigma, limit),
        bound_M=coeffs.dim * limit,
        name=f"{coeffs.name}[R={R:g}]",
    )


def solve_skeleton_truncated(
    coeffs, R, m_R, xi, h, mesh, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER
):
    """F^R(h): the skeleton of the truncated coefficients."""
    return solve_skeleton(truncate_coeffs(coeffs, R, m_R), xi, h, mesh, tol=tol, max_iter=max_iter)
