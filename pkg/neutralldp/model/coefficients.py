"""
Coefficient functionals G, b and sigma acting on segments.

Functionals are vectorised: they receive window arrays of shape ``(..., n_slots, d)``
(slot 0 is theta = -tau, the last slot theta = 0) and return ``(..., d)`` for G and b and
``(..., d, d)`` for sigma. A single :class:`~neutralldp.model.mesh.Segment` is accepted
wherever a window array is.
"""

from typing import Callable, Optional

import attr
import numpy as np

from .._errors import DimensionMismatch
from .mesh import Segment

SegmentFunctional = Callable[[np.ndarray], np.ndarray]


def _window(segment):
    return segment.window if isinstance(segment, Segment) else np.asarray(segment, dtype=float)


def hs_norm(matrix):
    """Hilbert-Schmidt (Frobenius) norm over the trailing two axes."""
    return np.sqrt(np.sum(np.square(matrix), axis=(-2, -1)))


@attr.s(frozen=True, slots=True)
class CoefficientSet:
    """
    The neutral term G, drift b and diffusion sigma with their declared constants.

    Undeclared constants are None. ``kappa`` is the contraction constant of (H2),
    ``lip_L`` the constant of (H1), ``bound_M`` of (H3) and ``growth_L2`` the linear-growth
    constant |b|^2 v ||sigma||_HS^2 <= L2 (1 + ||xi||^2).
    """

    G = attr.ib()
    b = attr.ib()
    sigma = attr.ib()
    dim = attr.ib(default=1)
    kappa: Optional[float] = attr.ib(default=None)
    lip_L: Optional[float] = attr.ib(default=None)
    bound_M: Optional[float] = attr.ib(default=None)
    growth_L2: Optional[float] = attr.ib(default=None)
    name = attr.ib(default="custom")

    @kappa.validator
    def _check_kappa(self, attribute, value):
        if value is not None and not 0 <= value < 1:
            raise ValueError(f"kappa must lie in [0, 1), got {value}")

    def neutral(self, segment):
        """G evaluated on a window (or a batch of windows)."""
        window = _window(segment)
        return self._shaped(self.G(window), window.shape[:-2] + (self.dim,), "G")

    def drift(self, segment):
        window = _window(segment)
        return self._shaped(self.b(window), window.shape[:-2] + (self.dim,), "b")

    def diffusion(self, segment):
        window = _window(segment)
        return self._shaped(
            self.sigma(window), window.shape[:-2] + (self.dim, self.dim), "sigma"
        )

    @staticmethod
    def _shaped(value, shape, which):
        value = np.asarray(value, dtype=float)
        try:
            return np.broadcast_to(value, shape)
        except ValueError:
            raise DimensionMismatch(
                f"{which} returned shape {value.shape}, expected {shape}", which=which
            )


def _as_matrix(value, dim):
    if value is None:
        return np.zeros((dim, dim))
    matrix = np.asarray(value, dtype=float)
    if matrix.ndim == 0:
        return matrix * np.eye(dim)
    if matrix.ndim == 1:
        return np.diag(matrix)
    return matrix


def _as_vector(value, dim):
    if value is None:
        return np.zeros(dim)
    return np.broadcast_to(np.asarray(value, dtype=float), (dim,)).copy()


@attr.s(frozen=True, slots=True, eq=False)
class AffineTerm:
    """``head @ xi(0) + delayed @ xi(-tau) + constant``."""

    head = attr.ib()
    delayed = attr.ib()
    constant = attr.ib()

    @classmethod
    def build(cls, dim, head=None, delayed=None, constant=None):
        return cls(_as_matrix(head, dim), _as_matrix(delayed, dim), _as_vector(constant, dim))

    def __call__(self, window):
        return (
            np.einsum("ij,...j->...i", self.head, window[..., -1, :])
            + np.einsum("ij,...j->...i", self.delayed, window[..., 0, :])
            + self.constant
        )


@attr.s(frozen=True, slots=True, eq=False)
class AffineSpec:
    """
    Coefficients affine in the segment: G and b act on xi(0) and xi(-tau) through
    matrices plus a constant, sigma is a constant matrix.
    """

    dim = attr.ib()
    G = attr.ib()
    b = attr.ib()
    sigma = attr.ib()
    name = attr.ib(default="affine")

    @classmethod
    def build(cls, dim=1, G=None, b=None, sigma=None, name="affine"):
        """Assemble from dicts with optional ``head``/``delayed``/``constant`` entries."""
        G, b = G or {}, b or {}
        return cls(
            dim=dim,
            G=AffineTerm.build(dim, **G),
            b=AffineTerm.build(dim, **b),
            sigma=_as_matrix(1.0 if sigma is None else sigma, dim),
            name=name,
        )

    def to_coefficients(self):
        dim = self.dim
        sigma = self.sigma.copy()

        def diffusion(window):
            return np.broadcast_to(sigma, window.shape[:-2] + (dim, dim))

        # G is a contraction when its matrix norms sum below one and G(0) = 0
        g_norm = float(np.linalg.norm(self.G.head, 2) + np.linalg.norm(self.G.delayed, 2))
        kappa = g_norm if g_norm < 1 and not self.G.constant.any() else None

        b_norm = np.linalg.norm(self.b.head, 2) + np.linalg.norm(self.b.delayed, 2)
        b_bounded = b_norm == 0
        sigma_hs = float(hs_norm(sigma))
        bound_M = max(float(np.linalg.norm(self.b.constant)), sigma_hs) if b_bounded else None
        lip_L = 2 * (1 + g_norm) * float(b_norm)
        growth_L2 = 2 * max(
            float(b_norm) ** 2 + float(np.linalg.norm(self.b.constant)) ** 2, sigma_hs**2
        )

        return CoefficientSet(
            G=self.G,
            b=self.b,
            sigma=diffusion,
            dim=dim,
            kappa=kappa,
            lip_L=lip_L,
            bound_M=bound_M,
            growth_L2=growth_L2,
            name=self.name,
        )
