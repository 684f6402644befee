"""
Monte Carlo estimation of path-event probabilities.

Replicate ``i`` is driven by the Philox stream (seed, i). Replicates are grouped in fixed
chunks of :data:`CHUNK` stream ids; chunks run on a thread pool and their integer success
counts are summed, so an estimate never depends on the number of workers.
"""

import logging
import math

import attr
import numpy as np

from .._concurrency import ordered_map
from .._errors import NonPositiveInput
from ..sim.neutral import DEFAULT_TOL
from ..sim.noise import NoiseSeed, brownian_increments_batch
from ..sim.scheme import simulate_batch

LOGGER = logging.getLogger(__name__)

#: Stream ids per work unit
CHUNK = 8192

#: Two-sided 95% normal quantile
Z95 = 1.96


def chunks(samples, size=CHUNK):
    """Consecutive ``range`` objects of stream ids covering ``0 .. samples - 1``."""
    return [range(start, min(start + size, samples)) for start in range(0, samples, size)]


def as_seed(seed):
    return seed if isinstance(seed, NoiseSeed) else NoiseSeed(seed)


def count_chunks(count, samples, threads=None, size=CHUNK):
    """
    Sum ``count(stream_ids)`` over all chunks. ``count`` may return an int or an integer
    array (one count per cell of a sweep).
    """
    if samples < 1:
        raise NonPositiveInput(f"samples must be at least 1, got {samples}", field="samples")
    totals = ordered_map(count, chunks(samples, size), threads=threads)
    return sum(totals[1:], start=totals[0])


@attr.s(frozen=True, slots=True)
class MCResult:
    """A Monte Carlo probability with its 95% normal-approximation half-width."""

    probability = attr.ib()
    samples = attr.ib()
    successes = attr.ib()
    ci_halfwidth_95 = attr.ib()
    eps = attr.ib()
    seed = attr.ib()

    @classmethod
    def from_counts(cls, successes, samples, eps, seed):
        successes = int(successes)
        p = successes / samples
        return cls(
            probability=p,
            samples=samples,
            successes=successes,
            ci_halfwidth_95=Z95 * math.sqrt(p * (1 - p) / samples),
            eps=eps,
            seed=seed,
        )

    @property
    def censored(self):
        return self.successes == 0

    @property
    def eps_log_p(self):
        """eps ln(p), or the upper bound eps ln(1 / samples) for a zero count."""
        if self.censored:
            return self.eps * math.log(1.0 / self.samples)
        return self.eps * math.log(self.probability)


@attr.s(frozen=True, slots=True)
class DecayRow:
    control_parameter = attr.ib()
    eps = attr.ib()
    probability = attr.ib()
    ci_halfwidth_95 = attr.ib()
    eps_log_p = attr.ib()
    censored = attr.ib()
    successes = attr.ib(default=None)
    samples = attr.ib(default=None)

    @classmethod
    def from_result(cls, control_parameter, result):
        return cls(
            control_parameter=control_parameter,
            eps=result.eps,
            probability=result.probability,
            ci_halfwidth_95=result.ci_halfwidth_95,
            eps_log_p=result.eps_log_p,
            censored=result.censored,
            successes=result.successes,
            samples=result.samples,
        )

    def slack(self):
        """3 CI half-widths carried through eps ln(.)."""
        if self.censored:
            return 0.0
        return self.eps * math.log1p(3 * self.ci_halfwidth_95 / self.probability)


@attr.s(frozen=True, slots=True)
class DecayCurve:
    """eps log P over a grid of (control parameter, eps)."""

    label = attr.ib()
    rows = attr.ib(converter=tuple)

    @property
    def eps_values(self):
        return sorted({row.eps for row in self.rows})

    def at_eps(self, eps):
        """Rows at ``eps`` ordered by control parameter."""
        return sorted(
            (row for row in self.rows if row.eps == eps), key=lambda row: row.control_parameter
        )

    def is_decreasing(self, eps=None):
        """
        Whether eps log P is non-increasing in the control parameter at ``eps`` (default:
        the smallest eps), allowing each step the CI slack of both rows.
        """
        eps = min(self.eps_values) if eps is None else eps
        rows = self.at_eps(eps)
        return all(
            later.eps_log_p <= earlier.eps_log_p + earlier.slack() + later.slack()
            for earlier, later in zip(rows, rows[1:])
        )


def _event_mask(event, values):
    if hasattr(event, "contains"):
        return event.contains(values)
    return np.asarray(event(values), dtype=bool)


def mc_probability(
    event, coeffs, xi, eps, mesh, samples, seed, threads=None, freeze_n=None, tol=DEFAULT_TOL
):
    """
    P(X^eps in event) from ``samples`` replicates with stream ids 0 .. samples - 1.

    :param event: an EventSpec or a callable mapping values ``(B, N, d)`` to booleans
    :param seed: NoiseSeed or integer seed; its stream id is ignored
    """
    seed = as_seed(seed)

    def count(stream_ids):
        increments = brownian_increments_batch(mesh, coeffs.dim, seed, stream_ids)
        values = simulate_batch(coeffs, xi, eps, mesh, increments, freeze_n=freeze_n, tol=tol)
        return int(np.count_nonzero(_event_mask(event, values)))

    successes = count_chunks(count, samples, threads)
    result = MCResult.from_counts(successes, samples, eps, seed)
    LOGGER.debug(f"eps={eps}: {successes}/{samples} successes")
    return result
