"""
Unit tests for Monte Carlo probabilities and decay curves.
"""

import math
import unittest
from unittest.mock import patch

import numpy as np
from scipy.stats import norm

from neutralldp._concurrency import WORKERS_ENV, max_workers, ordered_map
from neutralldp._errors import NonPositiveInput
from neutralldp.lab import DecayCurve, DecayRow, MCResult, mc_probability
from neutralldp.lab.montecarlo import chunks
from neutralldp.model import Segment, make_mesh
from neutralldp.rate import ENDPOINT_HALFSPACE, EventSpec
from neutralldp.runner.presets import bounded_trig, pure_brownian


def always(values):
    return np.ones(len(values), dtype=bool)


def never(values):
    return np.zeros(len(values), dtype=bool)


class TestConcurrency(unittest.TestCase):
    """Test the ordered thread-pool map."""

    def test_order_kept(self):
        """Results come back in input order."""
        self.assertEqual(
            ordered_map(lambda x: x * x, range(10), threads=4), [x * x for x in range(10)]
        )

    def test_workers_from_environment(self):
        """The environment variable is the fallback worker count."""
        with patch.dict("os.environ", {WORKERS_ENV: "3"}):
            self.assertEqual(max_workers(), 3)
            self.assertEqual(max_workers(2), 2)
        with patch.dict("os.environ", {WORKERS_ENV: "many"}):
            self.assertIsNone(max_workers())


class TestMCResult(unittest.TestCase):
    """Test estimates and their confidence intervals."""

    def test_from_counts(self):
        """p and the 95% half-width."""
        result = MCResult.from_counts(25, 100, 0.5, 1)
        self.assertEqual(result.probability, 0.25)
        self.assertAlmostEqual(result.ci_halfwidth_95, 1.96 * math.sqrt(0.25 * 0.75 / 100))
        self.assertAlmostEqual(result.eps_log_p, 0.5 * math.log(0.25))
        self.assertFalse(result.censored)

    def test_censored(self):
        """A zero count reports eps ln(1 / samples)."""
        result = MCResult.from_counts(0, 1000, 0.1, 1)
        self.assertTrue(result.censored)
        self.assertAlmostEqual(result.eps_log_p, 0.1 * math.log(1e-3))

    def test_chunks(self):
        """Stream ids are split in fixed chunks."""
        parts = chunks(20000)
        self.assertEqual([len(part) for part in parts], [8192, 8192, 3616])
        self.assertEqual(parts[1].start, 8192)


class TestMCProbability(unittest.TestCase):
    """Test event probabilities."""

    def setUp(self):
        self.mesh = make_mesh(1.0, 1.0, 20)
        self.xi = Segment.constant(self.mesh, 0.0)

    def test_sure_event(self):
        """An event that always holds has probability 1."""
        result = mc_probability(always, pure_brownian().coeffs, self.xi, 0.5, self.mesh, 100, 0)
        self.assertEqual(result.probability, 1.0)
        self.assertEqual(result.ci_halfwidth_95, 0.0)

    def test_impossible_event(self):
        """An event that never holds has probability 0 and is censored."""
        result = mc_probability(never, pure_brownian().coeffs, self.xi, 0.5, self.mesh, 100, 0)
        self.assertEqual(result.probability, 0.0)
        self.assertTrue(result.censored)

    def test_normal_tail(self):
        """P(sqrt(0.25) W(1) >= 1) is the normal tail at 2."""
        event = EventSpec(ENDPOINT_HALFSPACE, [1.0])
        result = mc_probability(
            event, pure_brownian().coeffs, self.xi, 0.25, self.mesh, 100_000, 17
        )
        self.assertAlmostEqual(result.probability, norm.sf(2.0), delta=3 * result.ci_halfwidth_95)

    def test_thread_count_irrelevant(self):
        """Estimates do not depend on the number of workers."""
        event = EventSpec(ENDPOINT_HALFSPACE, [0.5])
        coeffs = bounded_trig().coeffs
        one = mc_probability(event, coeffs, self.xi, 0.3, self.mesh, 20000, 4, threads=1)
        four = mc_probability(event, coeffs, self.xi, 0.3, self.mesh, 20000, 4, threads=4)
        self.assertEqual(one, four)

    def test_samples_positive(self):
        """At least one replicate is needed."""
        with self.assertRaises(NonPositiveInput):
            mc_probability(always, pure_brownian().coeffs, self.xi, 0.5, self.mesh, 0, 0)


class TestDecayCurve(unittest.TestCase):
    """Test the monotone-trend check."""

    def _row(self, parameter, successes, samples=1000, eps=0.1):
        return DecayRow.from_result(parameter, MCResult.from_counts(successes, samples, eps, 0))

    def test_decreasing(self):
        """Falling probabilities pass."""
        curve = DecayCurve("x", [self._row(8, 400), self._row(16, 100), self._row(32, 0)])
        self.assertTrue(curve.is_decreasing())

    def test_increasing(self):
        """A clear rise fails."""
        curve = DecayCurve("x", [self._row(8, 10), self._row(16, 400)])
        self.assertFalse(curve.is_decreasing())

    def test_smallest_eps_by_default(self):
        """The check looks at the smallest eps unless told otherwise."""
        rows = [
            self._row(8, 10, eps=0.5),
            self._row(16, 400, eps=0.5),
            self._row(8, 400, eps=0.1),
            self._row(16, 10, eps=0.1),
        ]
        curve = DecayCurve("x", rows)
        self.assertEqual(curve.eps_values, [0.1, 0.5])
        self.assertTrue(curve.is_decreasing())
        self.assertFalse(curve.is_decreasing(0.5))
