"""
Desk-scale signatures of the exponential approximation lemmas.

Each sweep drives the process and its approximation with the same increments per
replicate, counts sup-distance exceedances per (control parameter, eps) cell and reports
eps log P as a :class:`DecayCurve`. Limits in eps, n and R become finite grids whose
trend is checked with :meth:`DecayCurve.is_decreasing`.
"""

import collections.abc
import logging

import numpy as np

from ..model.assumptions import estimate_m_R
from ..model.mesh import sup_norm_batch
from ..sim.neutral import DEFAULT_TOL
from ..sim.noise import brownian_increments_batch
from ..sim.scheme import simulate_batch
from ..skeleton.truncation import truncate_coeffs
from .montecarlo import DecayCurve, DecayRow, MCResult, as_seed, count_chunks

LOGGER = logging.getLogger(__name__)

CLOSENESS = "closeness"
TIGHTNESS = "tightness"
TRUNCATION = "truncation"


def _sweep(label, parameters, eps_list, samples, seed, count_for_eps, threads):
    """Run ``count_for_eps(eps)(stream_ids) -> counts per parameter`` for every eps."""
    rows = []
    for eps in eps_list:
        counts = count_chunks(count_for_eps(eps), samples, threads)
        for parameter, successes in zip(parameters, np.atleast_1d(counts)):
            result = MCResult.from_counts(successes, samples, eps, seed)
            rows.append(DecayRow.from_result(parameter, result))
        LOGGER.info(f"{label}: eps={eps} done")
    return DecayCurve(label=label, rows=rows)


def _sup_gap(a, b):
    return np.max(np.linalg.norm(a - b, axis=-1), axis=-1)


def verify_exponential_closeness(
    coeffs, xi, delta, n_list, eps_list, samples, seed, *, mesh, threads=None, tol=DEFAULT_TOL
):
    """
    eps log P(sup |X^eps - X^{eps,n}| > delta) for every n and eps.

    X^{eps,n} is the frozen-argument scheme on the same increments.
    """
    seed = as_seed(seed)

    def count_for_eps(eps):
        def count(stream_ids):
            increments = brownian_increments_batch(mesh, coeffs.dim, seed, stream_ids)
            live = simulate_batch(coeffs, xi, eps, mesh, increments, tol=tol)
            return np.array(
                [
                    np.count_nonzero(
                        _sup_gap(
                            live,
                            simulate_batch(coeffs, xi, eps, mesh, increments, freeze_n=n, tol=tol),
                        )
                        > delta
                    )
                    for n in n_list
                ]
            )

        return count

    return _sweep(CLOSENESS, list(n_list), eps_list, samples, seed, count_for_eps, threads)


def verify_tightness(
    coeffs, xi, R_list, eps_list, samples, seed, *, mesh, threads=None, tol=DEFAULT_TOL
):
    """eps log P(sup over [-tau, T] of |X^eps| > R) for every R and eps."""
    seed = as_seed(seed)
    radii = np.asarray(R_list, dtype=float)

    def count_for_eps(eps):
        def count(stream_ids):
            increments = brownian_increments_batch(mesh, coeffs.dim, seed, stream_ids)
            sup = sup_norm_batch(simulate_batch(coeffs, xi, eps, mesh, increments, tol=tol))
            return np.count_nonzero(sup[:, None] > radii[None, :], axis=0)

        return count

    return _sweep(TIGHTNESS, list(R_list), eps_list, samples, seed, count_for_eps, threads)


def _m_R_for(coeffs, R, m_R, mesh):
    if m_R is None:
        return estimate_m_R(coeffs, R, n_slots=mesh.n_slots)
    if isinstance(m_R, collections.abc.Mapping):
        return m_R[R]
    if callable(m_R):
        return m_R(R)
    return float(m_R)


def verify_truncation_closeness(
    coeffs,
    xi,
    delta,
    R_list,
    eps_list,
    samples,
    seed,
    *,
    mesh,
    m_R=None,
    threads=None,
    tol=DEFAULT_TOL,
):
    """
    eps log P(sup |X^eps - X^{eps,R}| > delta) for every R and eps.

    :param m_R: mapping R -> m_R, callable, a single number for every R, or None to
        estimate it by sampling the R-ball
    """
    seed = as_seed(seed)
    truncated = [truncate_coeffs(coeffs, R, _m_R_for(coeffs, R, m_R, mesh)) for R in R_list]

    def count_for_eps(eps):
        def count(stream_ids):
            increments = brownian_increments_batch(mesh, coeffs.dim, seed, stream_ids)
            live = simulate_batch(coeffs, xi, eps, mesh, increments, tol=tol)
            return np.array(
                [
                    np.count_nonzero(
                        _sup_gap(live, simulate_batch(cut, xi, eps, mesh, increments, tol=tol))
                        > delta
                    )
                    for cut in truncated
                ]
            )

        return count

    return _sweep(TRUNCATION, list(R_list), eps_list, samples, seed, count_for_eps, threads)
