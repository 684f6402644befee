"""
Sampling-based falsification of the coefficient assumptions (H1)-(H3).

A pass means no counterexample was found among ``trials`` sampled segment pairs, up to a
relative slack of :data:`SLACK`.
"""

import logging
import math

import attr
import numpy as np

from .._errors import MissingConstant
from .coefficients import hs_norm
from .mesh import Segment, uniform_norm

LOGGER = logging.getLogger(__name__)

#: Relative slack applied to the declared constant
SLACK = 1e-9

#: Which declared constant each assumption is tested against
CONSTANTS = {"H1": "lip_L", "H2": "kappa", "H3": "bound_M"}

DEFAULT_SLOTS = 9


@attr.s(frozen=True, slots=True, eq=False)
class AssumptionReport:
    """Outcome of one assumption check."""

    assumption_id = attr.ib()
    passed = attr.ib()
    worst_ratio = attr.ib()
    witness_pair = attr.ib()
    trials = attr.ib()
    declared = attr.ib(default=None)


@attr.s(frozen=True, slots=True)
class SegmentPairSampler:
    """
    Draws pairs of piecewise-linear windows.

    Knots of the first window are uniform in [low, high]; the second window adds a
    piecewise-linear perturbation whose knots are uniform in [-scale, scale], with the
    scale cycling through ``scales`` from one trial to the next.
    """

    n_slots = attr.ib(default=DEFAULT_SLOTS)
    knots = attr.ib(default=5)
    low = attr.ib(default=-2.0)
    high = attr.ib(default=2.0)
    scales = attr.ib(default=(1e-3, 1e-1, 1.0))

    def _piecewise_linear(self, rng, dim, low, high):
        count = max(2, min(self.knots, self.n_slots))
        positions = np.linspace(0, self.n_slots - 1, count)
        values = rng.uniform(low, high, size=(count, dim))
        slots = np.arange(self.n_slots)
        return np.column_stack([np.interp(slots, positions, values[:, j]) for j in range(dim)])

    def __call__(self, rng, dim, trial):
        xi = self._piecewise_linear(rng, dim, self.low, self.high)
        scale = self.scales[trial % len(self.scales)]
        eta = xi + self._piecewise_linear(rng, dim, -scale, scale)
        return Segment(xi), Segment(eta)


def _ratio_h1(coeffs, xi, eta):
    gap = uniform_norm(Segment(xi.window - eta.window)) ** 2
    if gap == 0:
        return 0.0
    lead = xi.head - eta.head + coeffs.neutral(eta) - coeffs.neutral(xi)
    drift_term = 2 * float(np.dot(lead, coeffs.drift(xi) - coeffs.drift(eta)))
    diffusion_term = float(hs_norm(coeffs.diffusion(xi) - coeffs.diffusion(eta))) ** 2
    return max(drift_term, diffusion_term) / gap


def _ratio_h2(coeffs, xi, eta):
    gap = uniform_norm(Segment(xi.window - eta.window))
    if gap == 0:
        return 0.0
    return float(np.linalg.norm(coeffs.neutral(xi) - coeffs.neutral(eta))) / gap


def _ratio_h3(coeffs, xi, eta):
    return max(
        max(float(np.linalg.norm(coeffs.drift(s))), float(hs_norm(coeffs.diffusion(s))))
        for s in (xi, eta)
    )


_RATIOS = {"H1": _ratio_h1, "H2": _ratio_h2, "H3": _ratio_h3}


def passes(worst_ratio, declared):
    return worst_ratio <= declared + SLACK * max(1.0, abs(declared))


def check_assumption(coeffs, which, sampler=None, trials=1000, seed=0):
    """
    Look for a counterexample to assumption ``which`` (one of H1, H2, H3).

    :param coeffs: the coefficient set under test
    :type coeffs: CoefficientSet
    :param sampler: callable ``(rng, dim, trial) -> (Segment, Segment)``;
        defaults to :class:`SegmentPairSampler`
    :param trials: number of sampled pairs
    :param seed: seed of the sampling generator; equal seeds give equal reports
    :raises MissingConstant: if ``coeffs`` does not declare the constant under test
    """
    if which not in CONSTANTS:
        raise ValueError(f"unknown assumption {which!r}, expected one of {sorted(CONSTANTS)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    declared = getattr(coeffs, CONSTANTS[which])
    if declared is None:
        raise MissingConstant(
            f"{coeffs.name} declares no {CONSTANTS[which]} needed by {which}",
            assumption=which,
            constant=CONSTANTS[which],
        )

    sampler = sampler or SegmentPairSampler()
    rng = np.random.default_rng(seed)
    ratio = _RATIOS[which]

    worst, witness = -math.inf, None
    if which == "H2":
        n_slots = getattr(sampler, "n_slots", DEFAULT_SLOTS)
        zero = Segment(np.zeros((n_slots, coeffs.dim)))
        if np.linalg.norm(coeffs.neutral(zero)) > 0:
            LOGGER.info(f"{coeffs.name}: G(0) != 0, H2 fails outright")
            worst, witness = math.inf, (zero, zero)

    if worst < math.inf:
        for trial in range(trials):
            xi, eta = sampler(rng, coeffs.dim, trial)
            value = ratio(coeffs, xi, eta)
            if value > worst:
                worst, witness = value, (xi, eta)

    report = AssumptionReport(
        assumption_id=which,
        passed=passes(worst, declared),
        worst_ratio=worst,
        witness_pair=witness,
        trials=trials,
        declared=declared,
    )
    LOGGER.debug(f"{coeffs.name} {which}: worst ratio {worst!r} vs declared {declared!r}")
    return report


def estimate_m_R(coeffs, R, n_slots=DEFAULT_SLOTS, samples=2000, seed=0, margin=0.1):
    """
    Estimate m_R = sup over ||x|| <= R of |G(x)|, |b(x)| and ||sigma(x)||_HS by sampling
    the R-ball, inflated by ``margin``.
    """
    rng = np.random.default_rng(seed)
    sampler = SegmentPairSampler(n_slots=n_slots, low=-1.0, high=1.0)
    windows = []
    for trial in range(samples):
        xi, _ = sampler(rng, coeffs.dim, trial)
        norm = uniform_norm(xi)
        # scale every sample onto a random radius in [0, R], half of them onto the sphere
        radius = R if trial % 2 == 0 else R * rng.uniform()
        windows.append(xi.window * (radius / norm if norm > 0 else 0.0))
    batch = np.stack(windows)
    sup = max(
        float(np.max(np.linalg.norm(coeffs.neutral(batch), axis=-1))),
        float(np.max(np.linalg.norm(coeffs.drift(batch), axis=-1))),
        float(np.max(hs_norm(coeffs.diffusion(batch)))),
    )
    return sup * (1 + margin)
