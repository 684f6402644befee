"""
Analytic bounds and oracles: the exponential inequality for stochastic integrals, the
reflection principle for two-sided Brownian crossings and the max-of-eps-logs identity.
"""

import logging
import math

import attr
import numpy as np
from scipy.special import logsumexp
from scipy.stats import norm

from .._errors import NonPositiveTerm, PreconditionViolated
from ..model.mesh import make_mesh
from ..sim.noise import brownian_increments_batch
from .montecarlo import MCResult, as_seed, count_chunks

LOGGER = logging.getLogger(__name__)

#: Barrier shift coefficient for discretely monitored Brownian crossings
DISCRETE_MONITORING_SHIFT = 0.5826

#: Replicates per work unit; each carries a full fine-mesh path
STROOCK_CHUNK = 2048

#: Terms of the alternating reflection series
SERIES_TERMS = 50


def two_sided_crossing_probability(level, T, scale=1.0, steps=None):
    """
    P(sup over [0, T] of |scale W(t)| >= level) for one-dimensional W.

    With ``steps`` the barrier is raised by 0.5826 scale sqrt(T / steps) so the value is
    comparable with a maximum taken on ``steps`` equally spaced points.
    """
    if steps:
        level = level + DISCRETE_MONITORING_SHIFT * scale * math.sqrt(T / steps)
    a = level / (scale * math.sqrt(T))
    k = np.arange(SERIES_TERMS)
    return float(min(1.0, 4 * np.sum((-1.0) ** k * norm.sf((2 * k + 1) * a))))


def stroock_bound(A, B, R, T, dim):
    """
    2 d exp(-(R - sqrt(d) B T)^2 / (2 A^2 d T)).

    :raises PreconditionViolated: unless sqrt(d) B T < R
    """
    drift = math.sqrt(dim) * B * T
    if not drift < R:
        raise PreconditionViolated(
            f"sqrt(d) B T = {drift:g} must be below R = {R:g}", drift=drift, R=R
        )
    return 2 * dim * math.exp(-((R - drift) ** 2) / (2 * A**2 * dim * T))


@attr.s(frozen=True, slots=True)
class StroockReport:
    empirical = attr.ib()
    bound = attr.ib()
    holds = attr.ib()
    oracle = attr.ib(default=None)


def stroock_bound_check(A, B, R, T, dim, samples, seed, steps=1000, threads=None):
    """
    Compare P(sup over [0, T] of |xi(t)| >= R) with the exponential bound, for
    xi(t) = int alpha dW + int beta ds with alpha = (A / sqrt(d)) I and beta = (B / sqrt(d)) 1,
    so that ||alpha||_HS = A and |beta| = B.

    ``holds`` allows the empirical probability one CI half-width of slack. ``oracle`` is the
    reflection-principle value when d = 1 and B = 0.

    :raises PreconditionViolated: unless sqrt(d) B T < R
    """
    bound = stroock_bound(A, B, R, T, dim)
    seed = as_seed(seed)
    mesh = make_mesh(T, T, steps)
    alpha = A / math.sqrt(dim)
    beta = np.full(dim, B / math.sqrt(dim))

    def count(stream_ids):
        increments = brownian_increments_batch(mesh, dim, seed, stream_ids)
        paths = np.cumsum(alpha * increments + beta * mesh.step, axis=1)
        sup = np.max(np.linalg.norm(paths, axis=-1), axis=-1)
        return int(np.count_nonzero(sup >= R))

    successes = count_chunks(count, samples, threads, size=STROOCK_CHUNK)
    empirical = MCResult.from_counts(successes, samples, 1.0, seed)
    oracle = None
    if dim == 1 and B == 0:
        oracle = two_sided_crossing_probability(R, T, A, steps)
    report = StroockReport(
        empirical=empirical,
        bound=bound,
        holds=empirical.probability <= bound + empirical.ci_halfwidth_95,
        oracle=oracle,
    )
    LOGGER.info(f"stroock: empirical {empirical.probability!r}, bound {bound!r}")
    return report


@attr.s(frozen=True, slots=True)
class EpsLogRow:
    eps = attr.ib()
    eps_log_sum = attr.ib()
    eps_log_max = attr.ib()

    @property
    def gap(self):
        return self.eps_log_sum - self.eps_log_max


def eps_log_max(terms, eps_list, log_space=False):
    """
    eps ln(sum_i a_i(eps)) next to max_i eps ln a_i(eps), one row per eps.

    :param terms: one sequence of positive terms per eps (row ``j`` belongs to
        ``eps_list[j]``); with ``log_space`` the sequences hold ln a_i instead
    :raises NonPositiveTerm: if a term is not strictly positive (or its log is -inf or nan)
    """
    rows = []
    for eps, row in zip(eps_list, terms):
        row = np.asarray(row, dtype=float)
        if row.size == 0:
            raise NonPositiveTerm(f"no terms at eps={eps}", eps=eps)
        if log_space:
            if not np.all(np.isfinite(row)):
                raise NonPositiveTerm(f"non-finite log term at eps={eps}", eps=eps)
            logs = row
        else:
            if not np.all(row > 0):
                raise NonPositiveTerm(f"non-positive term at eps={eps}", eps=eps)
            logs = np.log(row)
        rows.append(
            EpsLogRow(
                eps=eps,
                eps_log_sum=eps * float(logsumexp(logs)),
                eps_log_max=eps * float(np.max(logs)),
            )
        )
    return rows
