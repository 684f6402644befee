"""
Unit tests for the analytic bounds, crossing oracle and rate comparison.
"""

import math
import unittest

import numpy as np

from neutralldp._errors import NonPositiveTerm, PreconditionViolated
from neutralldp.lab import (
    compare_rate_vs_mc,
    eps_log_max,
    stroock_bound,
    stroock_bound_check,
    two_sided_crossing_probability,
)
from neutralldp.model import Segment, make_mesh
from neutralldp.rate import ENDPOINT_BALL, ENDPOINT_HALFSPACE, EventSpec, qp_oracle_linear
from neutralldp.runner.presets import linear_delay, pure_brownian


class TestStroockBound(unittest.TestCase):
    """Test the exponential inequality for stochastic integrals."""

    def test_closed_form(self):
        """A=1, B=0, R=3, T=1, d=1 gives 2 exp(-4.5)."""
        self.assertAlmostEqual(stroock_bound(1.0, 0.0, 3.0, 1.0, 1), 2 * math.exp(-4.5))
        self.assertAlmostEqual(stroock_bound(1.0, 0.0, 3.0, 1.0, 1), 0.0222, places=4)

    def test_precondition(self):
        """sqrt(d) B T must stay below R."""
        with self.assertRaises(PreconditionViolated):
            stroock_bound(1.0, 3.0, 3.0, 1.0, 1)
        with self.assertRaises(PreconditionViolated):
            stroock_bound(1.0, 2.0, 3.0, 1.0, 4)

    def test_empirical_below_bound(self):
        """Brownian crossings of 3 respect the bound and match the reflection oracle."""
        report = stroock_bound_check(1.0, 0.0, 3.0, 1.0, 1, 20000, 6)
        empirical = report.empirical
        self.assertTrue(report.holds)
        self.assertLessEqual(empirical.probability, report.bound)
        self.assertAlmostEqual(
            empirical.probability, report.oracle, delta=3 * empirical.ci_halfwidth_95
        )

    def test_no_oracle_with_drift(self):
        """The reflection oracle only covers driftless one-dimensional motion."""
        report = stroock_bound_check(1.0, 0.5, 3.0, 1.0, 2, 500, 6, steps=50)
        self.assertIsNone(report.oracle)
        self.assertTrue(report.holds)


class TestCrossingOracle(unittest.TestCase):
    """Test the two-sided reflection series."""

    def test_continuous_value(self):
        """P(sup |W| >= 3) on [0, 1] is about four normal tails."""
        value = two_sided_crossing_probability(3.0, 1.0)
        self.assertAlmostEqual(value, 0.0054, delta=1e-4)

    def test_discrete_monitoring_lowers_value(self):
        """Fewer monitoring points see fewer crossings."""
        continuous = two_sided_crossing_probability(1.0, 1.0)
        monitored = two_sided_crossing_probability(1.0, 1.0, steps=10)
        self.assertLess(monitored, continuous)

    def test_capped_at_one(self):
        """Tiny levels are crossed almost surely."""
        self.assertLessEqual(two_sided_crossing_probability(1e-6, 1.0), 1.0)


class TestEpsLogMax(unittest.TestCase):
    """Test eps ln(sum) against max eps ln."""

    def test_dominant_term(self):
        """eps ln(e^(-1/eps) + e^(-2/eps)) is -1 at eps = 0.01."""
        eps = 0.01
        rows = eps_log_max([[math.exp(-1 / eps), math.exp(-2 / eps)]], [eps])
        self.assertAlmostEqual(rows[0].eps_log_sum, -1.0, delta=0.05)

    def test_single_term(self):
        """One term gives no gap."""
        rows = eps_log_max([[0.3]], [0.5])
        self.assertEqual(rows[0].gap, 0.0)

    def test_equal_terms(self):
        """N equal terms give a gap of eps ln N."""
        rows = eps_log_max([[0.2] * 4, [0.2] * 4], [0.5, 0.01])
        for row in rows:
            with self.subTest(eps=row.eps):
                self.assertAlmostEqual(row.gap, row.eps * math.log(4))

    def test_log_space(self):
        """Logs far below the float range still combine."""
        rows = eps_log_max([[-1e5, -2e5]], [1e-5], log_space=True)
        self.assertAlmostEqual(rows[0].eps_log_sum, -1.0, places=6)

    def test_non_positive_term(self):
        """Zero cannot enter a logarithm."""
        with self.assertRaises(NonPositiveTerm):
            eps_log_max([[0.0, 1.0]], [0.1])
        with self.assertRaises(NonPositiveTerm):
            eps_log_max([[-np.inf]], [0.1], log_space=True)


class TestCompareRateVsMC(unittest.TestCase):
    """Test eps log P next to the negated rate."""

    def setUp(self):
        self.mesh = make_mesh(1.0, 1.0, 20)
        self.xi = Segment.constant(self.mesh, 0.0)

    def test_schilder_trend(self):
        """eps log P of {X(1) >= 1} moves toward -1/2 as eps shrinks."""
        event = EventSpec(ENDPOINT_HALFSPACE, [1.0])
        report = compare_rate_vs_mc(
            pure_brownian().coeffs,
            self.xi,
            event,
            self.mesh,
            [0.5, 0.2, 0.1],
            20000,
            1,
            rate_value=0.5,
        )
        values = [row.eps_log_p for row in report.rows]
        self.assertTrue(all(row.neg_rate == -0.5 for row in report.rows))
        self.assertLess(values[0], values[1])
        self.assertLess(values[1], values[2])
        self.assertLess(report.terminal_gap, 0.3)
        self.assertIsNone(report.rate_result)

    def test_event_containing_uncontrolled_path(self):
        """Both sides are near zero when F(0) lies in the event."""
        event = EventSpec(ENDPOINT_BALL, [0.0], radius_delta=0.5)
        report = compare_rate_vs_mc(
            pure_brownian().coeffs, self.xi, event, self.mesh, [0.01], 2000, 1
        )
        self.assertEqual(report.rate, 0.0)
        self.assertAlmostEqual(report.rows[0].eps_log_p, 0.0, delta=1e-3)
        self.assertIsNotNone(report.rate_result)

    def test_oracle_rate_side(self):
        """The affine oracle can stand in for the optimiser."""
        model = linear_delay()
        event = EventSpec(ENDPOINT_BALL, [1.0], radius_delta=0.05)
        oracle = qp_oracle_linear(model.affine, self.xi, [1.0], self.mesh)
        report = compare_rate_vs_mc(
            model.coeffs,
            self.xi,
            event,
            self.mesh,
            [0.5, 0.25],
            5000,
            3,
            rate_value=oracle.value,
        )
        self.assertEqual(report.rate, oracle.value)
        self.assertEqual([row.eps for row in report.rows], [0.5, 0.25])
