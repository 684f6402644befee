"""
Time meshes, path trajectories and segment (window) views.

A mesh covers [-tau, T] with a uniform step chosen so that tau is an integer number of
steps. Values are stored on every mesh point; index ``i`` of a value array is the time
``(i - n_history) * step``. Forward indices (``t_index``) count from t = 0.
"""

import math

import attr
import numpy as np

from .._errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonAlignedHorizon,
    NonIntegerInput,
    NonPositiveInput,
)

#: Relative tolerance when deciding whether horizon_T / step is an integer
ALIGN_RTOL = 1e-9


def _readonly(array):
    array = np.array(array, dtype=float)
    array.flags.writeable = False
    return array


@attr.s(frozen=True, slots=True)
class TimeMesh:
    """Uniform grid on [-tau, T] with tau = n_history * step and T = n_forward * step."""

    tau = attr.ib()
    horizon_T = attr.ib()
    step = attr.ib()
    n_history = attr.ib()
    n_forward = attr.ib()

    @property
    def n_points(self):
        """Number of mesh points on [-tau, T]."""
        return self.n_history + self.n_forward + 1

    @property
    def n_slots(self):
        """Number of lattice points inside one window [-tau, 0]."""
        return self.n_history + 1

    @property
    def times(self):
        return (np.arange(self.n_points) - self.n_history) * self.step

    def value_index(self, t_index):
        """Position in a value array of forward index ``t_index``."""
        return t_index + self.n_history


def make_mesh(tau, horizon_T, steps_per_tau):
    """
    Build the mesh with step tau / steps_per_tau.

    :raises NonPositiveInput: if tau, horizon_T or steps_per_tau is not positive
    :raises NonIntegerInput: if steps_per_tau is not a whole number
    :raises NonAlignedHorizon: if horizon_T is not an integer multiple of the step
    """
    inputs = {"tau": tau, "horizon_T": horizon_T, "steps_per_tau": steps_per_tau}
    violations = [name for name, value in inputs.items() if not value > 0]
    if violations:
        raise NonPositiveInput(f"must be positive: {', '.join(violations)}", fields=violations)
    if int(steps_per_tau) != steps_per_tau:
        raise NonIntegerInput(
            f"steps_per_tau must be an integer, got {steps_per_tau}", fields=["steps_per_tau"]
        )

    steps_per_tau = int(steps_per_tau)
    step = tau / steps_per_tau
    ratio = horizon_T / step
    n_forward = int(round(ratio))
    if n_forward < 1 or abs(ratio - n_forward) > ALIGN_RTOL * max(1.0, ratio):
        raise NonAlignedHorizon(
            f"horizon {horizon_T} is not a multiple of the step {step}",
            horizon_T=horizon_T,
            step=step,
        )

    return TimeMesh(
        tau=float(tau),
        horizon_T=n_forward * step,
        step=step,
        n_history=steps_per_tau,
        n_forward=n_forward,
    )


@attr.s(frozen=True, slots=True, eq=False)
class Segment:
    """
    A window f_t on the mesh lattice of [-tau, 0].

    ``window[0]`` is theta = -tau and ``window[-1]`` is theta = 0 (the head).
    """

    window = attr.ib(converter=_readonly)

    def __attrs_post_init__(self):
        if self.window.ndim != 2:
            raise DimensionMismatch(
                f"window must have shape (n_slots, d), got {self.window.shape}"
            )

    @property
    def dim(self):
        return self.window.shape[1]

    @property
    def head(self):
        """Value at theta = 0."""
        return self.window[-1]

    @property
    def delayed(self):
        """Value at theta = -tau."""
        return self.window[0]

    @classmethod
    def constant(cls, mesh, value):
        """The window that equals ``value`` (scalar or d-vector) on every slot."""
        value = np.atleast_1d(np.asarray(value, dtype=float))
        return cls(np.tile(value, (mesh.n_slots, 1)))

    @classmethod
    def from_function(cls, mesh, func, dim=1):
        """Sample ``func(theta)`` on the lattice of [-tau, 0]."""
        thetas = (np.arange(mesh.n_slots) - mesh.n_history) * mesh.step
        return cls(np.array([np.broadcast_to(func(theta), (dim,)) for theta in thetas]))


@attr.s(frozen=True, slots=True, eq=False)
class PathTrajectory:
    """
    d-dimensional values on every point of a mesh.

    ``iterations`` and ``initial_residuals`` hold the neutral fixed-point diagnostics of
    each forward step when the path came out of a solver.
    """

    mesh = attr.ib()
    values = attr.ib(converter=_readonly)
    iterations = attr.ib(default=None)
    initial_residuals = attr.ib(default=None)

    def __attrs_post_init__(self):
        if self.values.ndim != 2 or self.values.shape[0] != self.mesh.n_points:
            raise DimensionMismatch(
                f"expected {self.mesh.n_points} values, got shape {self.values.shape}"
            )

    @property
    def dim(self):
        return self.values.shape[1]

    @property
    def initial_segment(self):
        return Segment(self.values[: self.mesh.n_slots])

    @property
    def endpoint(self):
        """Value at t = T."""
        return self.values[-1]

    def at(self, t):
        """Value at mesh time ``t``."""
        index = int(round(t / self.mesh.step)) + self.mesh.n_history
        if not 0 <= index < self.mesh.n_points:
            raise IndexOutOfRange(f"time {t} lies outside the mesh", t=t)
        return self.values[index]


def segment_at(path, t_index):
    """
    The window X_t for t = t_index * step, copied out of ``path``.

    :raises IndexOutOfRange: unless 0 <= t_index <= n_forward
    """
    mesh = path.mesh
    if not isinstance(t_index, (int, np.integer)) or not 0 <= t_index <= mesh.n_forward:
        raise IndexOutOfRange(
            f"t_index {t_index} outside [0, {mesh.n_forward}]", t_index=t_index
        )
    return Segment(path.values[t_index : t_index + mesh.n_slots].copy())


def uniform_norm(segment):
    """Sup over the window of the Euclidean norm of each entry."""
    window = segment.window if isinstance(segment, Segment) else np.asarray(segment)
    if window.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(window, axis=-1)))


def sup_norm_batch(values):
    """Sup-in-time Euclidean norm of a batch of value arrays ``(..., N, d)``."""
    return np.max(np.linalg.norm(values, axis=-1), axis=-1)


def steps_per_piece(mesh, n):
    """Number of mesh steps in one freezing piece of length 1/n, or None if not aligned."""
    if n < 1:
        return None
    ratio = 1.0 / (n * mesh.step)
    count = int(round(ratio))
    if count < 1 or not math.isclose(ratio, count, rel_tol=ALIGN_RTOL):
        return None
    return count
