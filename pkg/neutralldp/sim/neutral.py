"""
The implicit neutral step: recover X(t+dt) from M(t+dt) = X(t+dt) - G(X_{t+dt}).

G depends on the head slot of its own window, so the head solves x = G(window(x)) + rhs.
Under (H2) the map is a kappa-contraction and plain fixed-point iteration converges
geometrically.
"""

import logging

import numpy as np

from .._errors import NoConvergence

LOGGER = logging.getLogger(__name__)

#: Absolute residual tolerance of the neutral step
DEFAULT_TOL = 1e-12

#: Iteration cap; exceeding it signals a G that is not a contraction
DEFAULT_MAX_ITER = 200


def iterate_head(G, window, rhs, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """
    Solve for the head slot of ``window`` in place.

    ``window`` has shape ``(..., n_slots, d)``; its head slot holds the warm start on entry
    and the solution on exit. The residual is the largest Euclidean norm over the batch.

    :returns: (number of updates applied, residual of the warm start)
    :raises NoConvergence: if the residual still exceeds ``tol`` after ``max_iter`` updates
    """
    iterations = 0
    initial = None
    while True:
        candidate = G(window) + rhs
        residual = float(np.max(np.linalg.norm(candidate - window[..., -1, :], axis=-1)))
        if initial is None:
            initial = residual
        if residual <= tol:
            return iterations, initial
        if iterations >= max_iter or not np.isfinite(residual):
            raise NoConvergence(
                f"neutral step residual {residual:.3e} > {tol:.1e} after {iterations} updates",
                residual=residual,
                iterations=iterations,
            )
        window[..., -1, :] = candidate
        iterations += 1


def neutral_fixed_point_step(G, prev_window, rhs, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """
    Return x with |x - G(window(x)) - rhs| <= tol.

    :param G: functional on window arrays
    :param prev_window: window whose non-head slots are fixed; its head is the warm start
    :type prev_window: Segment
    :param rhs: the d-vector M(t+dt)
    :raises NoConvergence: see :func:`iterate_head`
    """
    window = np.array(prev_window.window, dtype=float)
    iterate_head(G, window, np.asarray(rhs, dtype=float), tol, max_iter)
    return window[-1].copy()


def iteration_bound(kappa, initial_residual, tol):
    """Updates needed by a kappa-contraction to bring ``initial_residual`` below ``tol``."""
    if initial_residual <= tol:
        return 0
    if kappa == 0:
        return 1
    return int(np.ceil(np.log(tol / initial_residual) / np.log(kappa))) + 1
