"""
Unit tests for meshes, segments and path trajectories.
"""

import unittest

import numpy as np

from neutralldp._errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonAlignedHorizon,
    NonIntegerInput,
    NonPositiveInput,
)
from neutralldp.model import (
    PathTrajectory,
    Segment,
    make_mesh,
    segment_at,
    steps_per_piece,
    sup_norm_batch,
    uniform_norm,
)


class TestMakeMesh(unittest.TestCase):
    """Test mesh construction."""

    def test_step_and_counts(self):
        """tau=1, T=2, four steps per tau."""
        mesh = make_mesh(1.0, 2.0, 4)
        self.assertEqual(mesh.step, 0.25)
        self.assertEqual(mesh.n_history, 4)
        self.assertEqual(mesh.n_forward, 8)
        self.assertEqual(mesh.n_points, 13)
        self.assertEqual(mesh.n_slots, 5)

    def test_single_step(self):
        """One step per tau on a unit horizon."""
        mesh = make_mesh(1.0, 1.0, 1)
        self.assertEqual((mesh.step, mesh.n_history, mesh.n_forward), (1.0, 1, 1))

    def test_horizon_not_aligned(self):
        """0.3 is not a multiple of 0.5."""
        with self.assertRaises(NonAlignedHorizon):
            make_mesh(1.0, 0.3, 2)

    def test_non_positive_inputs(self):
        """Every non-positive parameter is named."""
        with self.assertRaises(NonPositiveInput) as cm:
            make_mesh(0.0, -1.0, 4)
        self.assertEqual(cm.exception.payload["fields"], ["tau", "horizon_T"])

    def test_fractional_steps_per_tau(self):
        """A fractional step count is named as such."""
        with self.assertRaises(NonIntegerInput) as cm:
            make_mesh(1.0, 1.0, 2.5)
        self.assertEqual(cm.exception.payload["fields"], ["steps_per_tau"])
        self.assertIn("integer", str(cm.exception))

    def test_times_start_at_minus_tau(self):
        """Mesh times run from -tau to T."""
        times = make_mesh(1.0, 1.0, 2).times
        np.testing.assert_allclose(times, [-1.0, -0.5, 0.0, 0.5, 1.0])

    def test_steps_per_piece(self):
        """1/n must be a whole number of steps."""
        mesh = make_mesh(1.0, 1.0, 8)
        self.assertEqual(steps_per_piece(mesh, 2), 4)
        self.assertEqual(steps_per_piece(mesh, 8), 1)
        self.assertIsNone(steps_per_piece(mesh, 3))
        self.assertIsNone(steps_per_piece(mesh, 16))


class TestSegmentAt(unittest.TestCase):
    """Test window extraction."""

    def test_constant_path(self):
        """A constant path has constant windows."""
        mesh = make_mesh(1.0, 1.0, 4)
        path = PathTrajectory(mesh, np.full((mesh.n_points, 2), 3.0))
        for t_index in range(mesh.n_forward + 1):
            with self.subTest(t_index=t_index):
                np.testing.assert_array_equal(segment_at(path, t_index).window, 3.0)

    def test_identity_path(self):
        """path(t) = t with step 0.5: the window at t=1 is (0, 0.5, 1)."""
        mesh = make_mesh(1.0, 1.0, 2)
        path = PathTrajectory(mesh, mesh.times[:, None])
        window = segment_at(path, 2).window
        np.testing.assert_allclose(window[:, 0], [0.0, 0.5, 1.0])

    def test_index_out_of_range(self):
        """Negative and past-the-end indices are rejected."""
        mesh = make_mesh(1.0, 1.0, 2)
        path = PathTrajectory(mesh, np.zeros((mesh.n_points, 1)))
        for t_index in (-1, mesh.n_forward + 1):
            with self.subTest(t_index=t_index):
                with self.assertRaises(IndexOutOfRange):
                    segment_at(path, t_index)

    def test_segment_is_a_copy(self):
        """Windows are read-only copies."""
        mesh = make_mesh(1.0, 1.0, 2)
        path = PathTrajectory(mesh, np.zeros((mesh.n_points, 1)))
        segment = segment_at(path, 0)
        with self.assertRaises(ValueError):
            segment.window[0, 0] = 1.0


class TestNorms(unittest.TestCase):
    """Test uniform norms."""

    def test_uniform_norm(self):
        """Sup over slots of the Euclidean norm."""
        self.assertEqual(uniform_norm(Segment([[1.0, 0.0], [0.0, -2.0]])), 2.0)
        self.assertEqual(uniform_norm(Segment(np.zeros((3, 2)))), 0.0)
        self.assertEqual(uniform_norm(Segment([[3.0, 4.0]])), 5.0)

    def test_sup_norm_batch(self):
        """One sup per path of a batch."""
        values = np.array([[[1.0], [-3.0]], [[0.5], [0.25]]])
        np.testing.assert_array_equal(sup_norm_batch(values), [3.0, 0.5])


class TestPathTrajectory(unittest.TestCase):
    """Test trajectory records."""

    def test_shape_checked(self):
        """Values must cover every mesh point."""
        mesh = make_mesh(1.0, 1.0, 2)
        with self.assertRaises(DimensionMismatch):
            PathTrajectory(mesh, np.zeros((3, 1)))

    def test_at_and_endpoint(self):
        """Lookup by time."""
        mesh = make_mesh(1.0, 1.0, 2)
        path = PathTrajectory(mesh, mesh.times[:, None])
        self.assertEqual(path.at(0.5)[0], 0.5)
        self.assertEqual(path.endpoint[0], 1.0)
        with self.assertRaises(IndexOutOfRange):
            path.at(2.0)

    def test_segment_from_function(self):
        """Sampling a function on [-tau, 0]."""
        mesh = make_mesh(1.0, 1.0, 2)
        segment = Segment.from_function(mesh, lambda theta: theta * 2)
        np.testing.assert_allclose(segment.window[:, 0], [-2.0, -1.0, 0.0])
        self.assertEqual(segment.head[0], 0.0)
        self.assertEqual(segment.delayed[0], -2.0)
