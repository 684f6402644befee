"""
Exact discrete rate for affine dynamics with constant sigma and an endpoint target.

Every mesh value of the skeleton is affine in the flat control: X_i = a_i + B_i hdot. The
endpoint constraint a_N + B_N hdot = target has the least-norm solution
hdot = B^T (B B^T)^-1 (target - a_N), whose action is the exact discrete infimum.
"""

import logging

import numpy as np

from .._errors import DimensionMismatch, NoConvergence, SingularSigma
from ..skeleton import ControlPath, solve_skeleton
from .action import action
from .optimizer import RateResult

LOGGER = logging.getLogger(__name__)


def _is_singular(matrix):
    return np.linalg.matrix_rank(matrix) < matrix.shape[0]


def endpoint_sensitivity(linear_spec, xi, mesh):
    """
    Affine map hdot -> X(T) of the skeleton of ``linear_spec``.

    :type linear_spec: AffineSpec
    :returns: (offset ``(d,)``, matrix ``(d, n_forward * d)``)
    """
    dim, n_hist, step = linear_spec.dim, mesh.n_history, mesh.step
    size = mesh.n_forward * dim
    G, b, sigma = linear_spec.G, linear_spec.b, linear_spec.sigma

    head_solve = np.eye(dim) - G.head
    if _is_singular(head_solve):
        raise NoConvergence("I - G.head is singular, the neutral step has no unique solution")

    offsets = np.zeros((mesh.n_points, dim))
    gains = np.zeros((mesh.n_points, dim, size))
    offsets[: mesh.n_slots] = xi.window

    transformed_offset = offsets[n_hist] - G(xi.window)
    transformed_gain = np.zeros((dim, size))
    for k in range(mesh.n_forward):
        head, delayed = k + n_hist, k
        transformed_offset = transformed_offset + step * (
            b.head @ offsets[head] + b.delayed @ offsets[delayed] + b.constant
        )
        transformed_gain = transformed_gain + step * (
            b.head @ gains[head] + b.delayed @ gains[delayed]
        )
        transformed_gain[:, k * dim : (k + 1) * dim] += step * sigma

        new, lagged = k + 1 + n_hist, k + 1
        offsets[new] = np.linalg.solve(
            head_solve, transformed_offset + G.delayed @ offsets[lagged] + G.constant
        )
        gains[new] = np.linalg.solve(head_solve, transformed_gain + G.delayed @ gains[lagged])
    return offsets[-1], gains[-1]


def qp_oracle_linear(linear_spec, xi, endpoint_target, mesh):
    """
    Least-norm control steering the skeleton of ``linear_spec`` to ``endpoint_target``.

    :raises SingularSigma: if sigma or the normal matrix B B^T is singular
    :raises DimensionMismatch: if the target has the wrong dimension
    """
    target = np.atleast_1d(np.asarray(endpoint_target, dtype=float))
    if target.shape != (linear_spec.dim,):
        raise DimensionMismatch(
            f"target has shape {target.shape}, expected ({linear_spec.dim},)",
            expected=linear_spec.dim,
            actual=target.shape[-1],
        )
    if _is_singular(linear_spec.sigma):
        raise SingularSigma(f"sigma of {linear_spec.name} is singular")

    offset, gain = endpoint_sensitivity(linear_spec, xi, mesh)
    normal = gain @ gain.T
    if _is_singular(normal):
        raise SingularSigma("the normal matrix B B^T is singular")
    flat = gain.T @ np.linalg.solve(normal, target - offset)

    minimizer = ControlPath.from_flat(mesh, linear_spec.dim, flat)
    coeffs = linear_spec.to_coefficients()
    path = solve_skeleton(coeffs, xi, minimizer, mesh)
    residual = float(np.linalg.norm(path.endpoint - target))
    result = RateResult(
        value=action(minimizer),
        minimizer=minimizer,
        constraint_residual=residual,
        iterations=0,
        converged=True,
        path=path,
    )
    LOGGER.debug(f"{linear_spec.name}: oracle value {result.value!r}, residual {residual:.2e}")
    return result
