"""
Path events for the rate optimiser and the Monte Carlo estimators.

Every event is a set of paths described by inequality constraints c(f) <= 0. Constraints
are in distance form, so a constraint value is how far a path sits outside the event.
"""

import attr
import numpy as np

from .._errors import DimensionMismatch, NonPositiveInput
from ..model.mesh import PathTrajectory

ENDPOINT_BALL = "endpoint_ball"
SUP_TUBE = "sup_tube"
ENDPOINT_HALFSPACE = "endpoint_halfspace"

KINDS = (ENDPOINT_BALL, SUP_TUBE, ENDPOINT_HALFSPACE)


def _center(value):
    if isinstance(value, PathTrajectory):
        return value
    center = np.atleast_1d(np.asarray(value, dtype=float))
    center.flags.writeable = False
    return center


@attr.s(frozen=True, slots=True, eq=False)
class EventSpec:
    """
    ``endpoint_ball``: |f(T) - center| <= radius_delta.
    ``sup_tube``: |f(t) - center(t)| <= radius_delta at every mesh point of [-tau, T].
    ``endpoint_halfspace``: <normal, f(T) - center> >= 0, normal defaulting to
    center / |center|.
    """

    kind = attr.ib(validator=attr.validators.in_(KINDS))
    center = attr.ib(converter=_center)
    radius_delta = attr.ib(default=1e-3)
    normal = attr.ib(default=None)

    @radius_delta.validator
    def _check_radius(self, attribute, value):
        if not value > 0:
            raise NonPositiveInput(
                f"radius_delta must be positive, got {value}", field="radius_delta"
            )

    @property
    def dim(self):
        if isinstance(self.center, PathTrajectory):
            return self.center.dim
        return self.center.shape[-1]

    def _unit_normal(self):
        normal = self.normal
        if normal is None:
            normal = self._endpoint_center()
        normal = np.atleast_1d(np.asarray(normal, dtype=float))
        length = np.linalg.norm(normal)
        if length == 0:
            raise NonPositiveInput("endpoint_halfspace needs a non-zero normal", field="normal")
        return normal / length

    def _endpoint_center(self):
        if isinstance(self.center, PathTrajectory):
            return self.center.endpoint
        return self.center

    def constraint_values(self, values):
        """
        Constraint values of a batch ``(B, N, d)`` of path values, shape ``(B, m)``.

        A path lies in the event iff all its constraint values are <= 0.
        """
        values = np.asarray(values, dtype=float)
        if values.shape[-1] != self.dim:
            raise DimensionMismatch(
                f"paths have dimension {values.shape[-1]}, event {self.dim}",
                expected=self.dim,
                actual=values.shape[-1],
            )
        if self.kind == ENDPOINT_BALL:
            gap = values[..., -1, :] - self._endpoint_center()
            return (np.linalg.norm(gap, axis=-1) - self.radius_delta)[..., None]
        if self.kind == ENDPOINT_HALFSPACE:
            gap = values[..., -1, :] - self._endpoint_center()
            return -(gap @ self._unit_normal())[..., None]
        center = self.center.values if isinstance(self.center, PathTrajectory) else self.center
        return np.linalg.norm(values - center, axis=-1) - self.radius_delta

    def contains(self, values):
        """Boolean per path of the batch."""
        return np.all(self.constraint_values(values) <= 0, axis=-1)

    def residual(self, values):
        """Largest constraint violation per path; 0 inside the event."""
        return np.max(np.maximum(self.constraint_values(values), 0.0), axis=-1)
