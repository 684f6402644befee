"""
The controlled skeleton equations: sqrt(eps) dW replaced by hdot dt.

F^n(h) freezes the diffusion argument at t_n = [nt]/n as the frozen stochastic scheme does;
F(h) keeps it live. Both run through the simulation kernel, so the skeleton with h = 0 is
bit-identical to a noiseless simulation on the same mesh.
"""

import logging

import numpy as np

from ..model.mesh import PathTrajectory
from ..sim.neutral import DEFAULT_MAX_ITER, DEFAULT_TOL
from ..sim.scheme import march

LOGGER = logging.getLogger(__name__)


def solve_skeleton_batch(
    coeffs, xi, hdot_batch, mesh, freeze_n=None, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER
):
    """
    Skeleton values for a batch of controls.

    :param hdot_batch: array ``(B, n_forward, d)`` of control derivatives
    :returns: values ``(B, n_points, d)``
    """
    forcing = np.asarray(hdot_batch, dtype=float) * mesh.step
    values, _, _ = march(coeffs, xi, mesh, forcing, freeze_n=freeze_n, tol=tol, max_iter=max_iter)
    return values


def _solve(coeffs, xi, h, mesh, freeze_n, tol, max_iter):
    forcing = (h.hdot * mesh.step)[None]
    values, iterations, residuals = march(
        coeffs, xi, mesh, forcing, freeze_n=freeze_n, tol=tol, max_iter=max_iter
    )
    return PathTrajectory(mesh, values[0], iterations, residuals)


def solve_skeleton_n(coeffs, xi, h, mesh, n, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """
    F^n(h): Euler recursion on M = F - G(F_t) with diffusion argument frozen at t_n.

    :type h: ControlPath
    :raises NonAlignedFreeze: if 1/n is not on the mesh lattice
    :raises NoConvergence: if a neutral step fails to converge
    """
    return _solve(coeffs, xi, h, mesh, n, tol, max_iter)


def solve_skeleton(coeffs, xi, h, mesh, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """F(h): the skeleton with a live diffusion argument."""
    return _solve(coeffs, xi, h, mesh, None, tol, max_iter)


def skeleton_convergence_sweep(coeffs, xi, h, mesh, n_list, tol=DEFAULT_TOL):
    """
    Sup distance over [-tau, T] between F^n(h) and F(h) for every n in ``n_list``.

    :returns: list of (n, sup_distance) rows in the order of ``n_list``
    """
    reference = solve_skeleton(coeffs, xi, h, mesh, tol=tol).values
    rows = []
    for n in n_list:
        approx = solve_skeleton_n(coeffs, xi, h, mesh, n, tol=tol).values
        distance = float(np.max(np.linalg.norm(approx - reference, axis=-1)))
        LOGGER.debug(f"n={n}: sup |F^n(h) - F(h)| = {distance!r}")
        rows.append((n, distance))
    return rows


def convergence_slope(rows):
    """Least-squares slope of log(distance) against log(n); rows with zero distance are skipped."""
    data = np.array([(n, d) for n, d in rows if d > 0], dtype=float)
    if len(data) < 2:
        raise ValueError("need at least two rows with a positive distance")
    slope, _ = np.polyfit(np.log(data[:, 0]), np.log(data[:, 1]), 1)
    return float(slope)


def apriori_bound_sweep(coeffs, xi, mesh, alpha_list, n_list, directions=4, seed=0):
    """
    Sup of |F^n(h)(t)|^2 over a sampled family of controls with action <= alpha.

    The family is {c u_j : 0 <= c <= 1} for ``directions`` Gaussian directions u_j scaled to
    action alpha, sampled at a few c, so families for larger alpha contain smaller ones.

    :returns: list of (alpha, sup |F^n(h)(t)|^2) rows in the order of ``alpha_list``
    """
    rng = np.random.default_rng(seed)
    units = rng.standard_normal((directions, mesh.n_forward, coeffs.dim))
    # unit action: 0.5 * sum |u|^2 * step = 1
    units /= np.sqrt(0.5 * np.sum(units**2, axis=(1, 2)) * mesh.step)[:, None, None]
    units = np.concatenate([units, np.zeros((1,) + units.shape[1:])])

    rows = []
    best = 0.0
    for alpha in sorted(alpha_list):
        controls = np.concatenate(
            [np.sqrt(alpha * c) * units for c in np.linspace(0.0, 1.0, 5)[1:]]
        )
        for n in n_list:
            values = solve_skeleton_batch(coeffs, xi, controls, mesh, freeze_n=n)
            best = max(best, float(np.max(np.sum(values**2, axis=-1))))
        rows.append((alpha, best))
    order = {alpha: i for i, alpha in enumerate(alpha_list)}
    return sorted(rows, key=lambda row: order[row[0]])
