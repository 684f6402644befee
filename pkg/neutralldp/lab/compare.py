"""
Monte Carlo eps log P next to the negated rate of the same event.
"""

import logging

import attr

from ..rate.optimizer import rate_for_event
from .montecarlo import mc_probability

LOGGER = logging.getLogger(__name__)


@attr.s(frozen=True, slots=True)
class ComparisonRow:
    eps = attr.ib()
    eps_log_p = attr.ib()
    neg_rate = attr.ib()
    censored = attr.ib()
    probability = attr.ib(default=None)
    ci_halfwidth_95 = attr.ib(default=None)


@attr.s(frozen=True, slots=True, eq=False)
class ComparisonReport:
    """
    ``terminal_gap`` is |eps log P + rate| at the smallest eps. ``rate_result`` is None when
    the rate side was supplied by the caller.
    """

    rows = attr.ib(converter=tuple)
    rate = attr.ib()
    terminal_gap = attr.ib()
    rate_result = attr.ib(default=None)


def compare_rate_vs_mc(
    coeffs, xi, event, mesh, eps_list, samples, seed, opts=None, rate_value=None, threads=None
):
    """
    Run :func:`mc_probability` per eps and the rate optimiser once for ``event``.

    :param rate_value: use this rate (e.g. an oracle value) instead of optimising
    """
    rate_result = None
    if rate_value is None:
        rate_result = rate_for_event(coeffs, xi, event, mesh, opts)
        rate_value = rate_result.value

    rows = []
    for eps in eps_list:
        estimate = mc_probability(event, coeffs, xi, eps, mesh, samples, seed, threads=threads)
        rows.append(
            ComparisonRow(
                eps=eps,
                eps_log_p=estimate.eps_log_p,
                neg_rate=-rate_value,
                censored=estimate.censored,
                probability=estimate.probability,
                ci_halfwidth_95=estimate.ci_halfwidth_95,
            )
        )

    smallest = min(rows, key=lambda row: row.eps)
    gap = abs(smallest.eps_log_p + rate_value)
    LOGGER.info(f"{coeffs.name}: rate {rate_value!r}, terminal gap {gap!r}")
    return ComparisonReport(rows=rows, rate=rate_value, terminal_gap=gap, rate_result=rate_result)
