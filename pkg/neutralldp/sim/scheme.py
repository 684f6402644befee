"""
Euler-Maruyama simulation of the neutral equation and of its frozen-argument scheme.

The recursion runs on the transformed variable M(t) = X(t) - G(X_t):

    M(t + dt) = M(t) + b(X_t) dt + sigma(X*_t) forcing_k

with forcing_k = sqrt(eps) dW_k for the stochastic equation and hdot_k dt for the
controlled skeleton. X* is the live segment, or the segment frozen at t_n = [nt]/n.
X(t + dt) is then recovered by the neutral fixed-point step.
"""

import logging

import numpy as np

from .._errors import DimensionMismatch, NonAlignedFreeze, NonPositiveInput
from ..model.mesh import PathTrajectory, Segment, segment_at, steps_per_piece
from .neutral import DEFAULT_MAX_ITER, DEFAULT_TOL, iterate_head
from .noise import brownian_increments

LOGGER = logging.getLogger(__name__)


def _piece_length(mesh, n):
    if n is None:
        return None
    piece = steps_per_piece(mesh, n)
    if piece is None:
        raise NonAlignedFreeze(f"1/{n} is not a multiple of the step {mesh.step}", n=n)
    return piece


def _freeze(values, t_index, n_history, n_slots, piece):
    """
    The window at ``t_index`` with every slot after t_n replaced by the value at t_n.

    ``values`` is the whole path ``(..., n_points, d)``. When 1/n exceeds tau, t_n lies
    before the window and every slot takes the value at t_n.
    """
    live = values[..., t_index : t_index + n_slots, :]
    start = (t_index // piece) * piece
    if start == t_index:
        return live
    frozen = live.copy()
    first = max(start - t_index + n_history, -1) + 1
    frozen[..., first:, :] = values[..., start + n_history, None, :]
    return frozen


def _check_inputs(coeffs, xi, mesh):
    if xi.dim != coeffs.dim:
        raise DimensionMismatch(
            f"initial segment has dimension {xi.dim}, coefficients {coeffs.dim}",
            expected=coeffs.dim,
            actual=xi.dim,
        )
    if xi.window.shape[0] != mesh.n_slots:
        raise DimensionMismatch(
            f"initial segment has {xi.window.shape[0]} slots, mesh needs {mesh.n_slots}",
            expected=mesh.n_slots,
            actual=xi.window.shape[0],
        )


def march(coeffs, xi, mesh, forcing, freeze_n=None, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """
    Run the transformed-variable recursion for a batch of forcings.

    :param forcing: array ``(B, n_forward, d)`` multiplying sigma on each step
    :param freeze_n: freeze the diffusion argument at t_n = [nt]/n, or None for live
    :returns: (values ``(B, n_points, d)``, iterations per step, warm-start residuals per step)
    """
    _check_inputs(coeffs, xi, mesh)
    forcing = np.asarray(forcing, dtype=float)
    if forcing.shape[1:] != (mesh.n_forward, coeffs.dim):
        raise DimensionMismatch(
            f"forcing has shape {forcing.shape}, expected (B, {mesh.n_forward}, {coeffs.dim})"
        )
    piece = _piece_length(mesh, freeze_n)

    batch, n_slots, step = forcing.shape[0], mesh.n_slots, mesh.step
    values = np.empty((batch, mesh.n_points, coeffs.dim))
    values[:, :n_slots] = xi.window
    iterations = np.zeros(mesh.n_forward, dtype=int)
    initial_residuals = np.zeros(mesh.n_forward)

    transformed = values[:, mesh.n_history] - coeffs.neutral(values[:, :n_slots])
    for k in range(mesh.n_forward):
        live = values[:, k : k + n_slots]
        argument = live if piece is None else _freeze(values, k, mesh.n_history, n_slots, piece)
        noise = np.einsum("...ij,...j->...i", coeffs.diffusion(argument), forcing[:, k])
        transformed = transformed + coeffs.drift(live) * step + noise

        upcoming = values[:, k + 1 : k + n_slots + 1]
        upcoming[:, -1] = upcoming[:, -2]
        iterations[k], initial_residuals[k] = iterate_head(
            coeffs.neutral, upcoming, transformed, tol, max_iter
        )

    return values, iterations, initial_residuals


def _forcing(mesh, dim, eps, seed):
    if eps < 0:
        raise NonPositiveInput(f"eps must be non-negative, got {eps}", eps=eps)
    if eps == 0:
        return np.zeros((1, mesh.n_forward, dim))
    increments = brownian_increments(mesh, dim, seed).increments
    return (np.sqrt(eps) * increments)[None]


def simulate_nsfde(coeffs, xi, eps, mesh, seed, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """
    One trajectory of d{X - G(X_t)} = b(X_t)dt + sqrt(eps) sigma(X_t)dW on ``mesh``.

    :param xi: initial segment on the mesh lattice
    :param seed: NoiseSeed; equal seeds give bit-identical trajectories
    :raises NoConvergence: if a neutral step fails to converge
    :raises DimensionMismatch: if xi, coefficients and mesh disagree
    """
    forcing = _forcing(mesh, coeffs.dim, eps, seed)
    values, iterations, residuals = march(coeffs, xi, mesh, forcing, tol=tol, max_iter=max_iter)
    return PathTrajectory(mesh, values[0], iterations, residuals)


def simulate_frozen_scheme(
    coeffs, xi, eps, mesh, n, seed, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER
):
    """
    One trajectory of the scheme whose diffusion argument is frozen at t_n = [nt]/n.

    The drift keeps the live segment. With the same seed the Brownian increments are the
    ones :func:`simulate_nsfde` uses.

    :raises NonAlignedFreeze: if 1/n is not on the mesh lattice
    """
    _piece_length(mesh, n)
    forcing = _forcing(mesh, coeffs.dim, eps, seed)
    values, iterations, residuals = march(
        coeffs, xi, mesh, forcing, freeze_n=n, tol=tol, max_iter=max_iter
    )
    return PathTrajectory(mesh, values[0], iterations, residuals)


def simulate_batch(
    coeffs, xi, eps, mesh, increments, freeze_n=None, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER
):
    """Trajectories for a batch of Brownian increments ``(B, n_forward, d)``; values only."""
    if eps < 0:
        raise NonPositiveInput(f"eps must be non-negative, got {eps}", eps=eps)
    forcing = np.sqrt(eps) * increments if eps > 0 else np.zeros_like(increments)
    values, _, _ = march(coeffs, xi, mesh, forcing, freeze_n=freeze_n, tol=tol, max_iter=max_iter)
    return values


def frozen_segment(path, t_index, n):
    """
    The window X^_t(theta) = X((t + theta) ^ t_n) with t_n = [nt]/n.

    :raises NonAlignedFreeze: if 1/n is not on the mesh lattice
    :raises IndexOutOfRange: unless 0 <= t_index <= n_forward
    """
    piece = _piece_length(path.mesh, n)
    segment_at(path, t_index)
    mesh = path.mesh
    return Segment(_freeze(path.values, t_index, mesh.n_history, mesh.n_slots, piece))


def windows_of(values, mesh):
    """All forward windows of a value array ``(N, d)`` as ``(n_forward + 1, n_slots, d)``."""
    windows = np.lib.stride_tricks.sliding_window_view(values, mesh.n_slots, axis=0)
    return np.swapaxes(windows, -1, -2)


def neutral_difference_bound(coeffs, path_a, path_b):
    """
    Both sides of sup|Z| <= sup|Y| / (1 - kappa) for two paths sharing their initial segment.

    Z = X_a - X_b and Y(t) = Z(t) - (G(X_a,t) - G(X_b,t)), taken over the forward mesh.

    :returns: (sup |Z|, sup |Y|)
    """
    mesh = path_a.mesh
    forward = slice(mesh.n_history, None)
    gap = path_a.values[forward] - path_b.values[forward]
    neutral_gap = coeffs.neutral(windows_of(path_a.values, mesh)) - coeffs.neutral(
        windows_of(path_b.values, mesh)
    )
    sup_z = float(np.max(np.linalg.norm(gap, axis=-1)))
    sup_y = float(np.max(np.linalg.norm(gap - neutral_gap, axis=-1)))
    return sup_z, sup_y
