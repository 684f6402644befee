"""
Discrete Cameron-Martin controls: h(0) = 0 with piecewise-constant derivative on the mesh.
"""

import attr
import numpy as np

from .._errors import DimensionMismatch


def _readonly(array):
    array = np.array(array, dtype=float)
    array.flags.writeable = False
    return array


@attr.s(frozen=True, slots=True, eq=False)
class ControlPath:
    """``hdot[k]`` is the derivative of h on the k-th forward step, shape (n_forward, d)."""

    mesh = attr.ib()
    dim = attr.ib()
    hdot = attr.ib(converter=_readonly)

    def __attrs_post_init__(self):
        if self.hdot.shape != (self.mesh.n_forward, self.dim):
            raise DimensionMismatch(
                f"hdot has shape {self.hdot.shape}, expected ({self.mesh.n_forward}, {self.dim})"
            )

    @property
    def h(self):
        """h on the forward mesh points, h[0] = 0, shape (n_forward + 1, d)."""
        h = np.zeros((self.mesh.n_forward + 1, self.dim))
        np.cumsum(self.hdot * self.mesh.step, axis=0, out=h[1:])
        return h

    @property
    def flat(self):
        return self.hdot.ravel().copy()

    def scaled(self, factor):
        return ControlPath(self.mesh, self.dim, factor * self.hdot)

    def __add__(self, other):
        return ControlPath(self.mesh, self.dim, self.hdot + other.hdot)

    @classmethod
    def zeros(cls, mesh, dim=1):
        return cls(mesh, dim, np.zeros((mesh.n_forward, dim)))

    @classmethod
    def constant(cls, mesh, value, dim=1):
        value = np.broadcast_to(np.asarray(value, dtype=float), (dim,))
        return cls(mesh, dim, np.tile(value, (mesh.n_forward, 1)))

    @classmethod
    def from_increments(cls, mesh, increments):
        """The rough control with hdot = dW / step, so that h follows the Brownian path."""
        increments = np.asarray(increments, dtype=float)
        return cls(mesh, increments.shape[1], increments / mesh.step)

    @classmethod
    def from_flat(cls, mesh, dim, flat):
        return cls(mesh, dim, np.asarray(flat, dtype=float).reshape(mesh.n_forward, dim))
