"""
Factory for the shipped coefficient presets and the inline affine mini-language.

A coefficient entry of an experiment config is one of

* a preset name, e.g. ``"ou"``
* ``{"preset": name, "params": {...}}`` to override preset parameters
* ``{"inline": {"dim": d, "G": {...}, "b": {...}, "sigma": {"constant": S}}}`` where G and b
  take ``head`` (matrix on xi(0)), ``delayed`` (matrix on xi(-tau)) and ``constant`` keys
"""

import math

import attr
import jellyfish
import numpy as np

from .._errors import ConfigError
from ..model.coefficients import AffineSpec, CoefficientSet


@attr.s(frozen=True, slots=True, eq=False)
class CoefficientModel:
    """A coefficient set plus its affine description when the dynamics are affine."""

    coeffs = attr.ib()
    affine = attr.ib(default=None)


def _affine(spec):
    return CoefficientModel(spec.to_coefficients(), spec)


def pure_brownian(dim=1):
    """G = 0, b = 0, sigma = I: X = xi(0) + sqrt(eps) W."""
    return _affine(AffineSpec.build(dim, name="pure-brownian"))


def linear_delay(a=-0.5, dim=1):
    """b(xi) = a xi(-tau), sigma = I."""
    return _affine(AffineSpec.build(dim, b={"delayed": a}, name="linear-delay"))


def neutral_linear(kappa=0.5, dim=1):
    """G(xi) = kappa xi(-tau), b = 0, sigma = I."""
    return _affine(AffineSpec.build(dim, G={"delayed": kappa}, name="neutral-linear"))


def ou(theta=1.0, s=1.0, dim=1):
    """b(xi) = -theta xi(0), sigma = s I."""
    return _affine(AffineSpec.build(dim, b={"head": -theta}, sigma=s, name="ou"))


def bounded_trig(dim=1):
    """
    G(xi) = 0.25 sin(xi(-tau)), b(xi) = -sin(xi(0)) + 0.5 cos(xi(-tau)),
    sigma(xi) = diag(1 + 0.5 sin(xi(0))), all componentwise. Satisfies (H1)-(H3).
    """

    def G(window):
        return 0.25 * np.sin(window[..., 0, :])

    def b(window):
        return -np.sin(window[..., -1, :]) + 0.5 * np.cos(window[..., 0, :])

    def sigma(window):
        diagonal = 1 + 0.5 * np.sin(window[..., -1, :])
        return diagonal[..., :, None] * np.eye(dim)

    return CoefficientModel(
        CoefficientSet(
            G=G,
            b=b,
            sigma=sigma,
            dim=dim,
            kappa=0.25,
            lip_L=3.75,
            bound_M=1.5 * math.sqrt(dim),
            growth_L2=2.25 * dim,
            name="bounded-trig",
        )
    )


def superlinear(a=-1.0, dim=1):
    """b(xi) = a xi(-tau)^3 componentwise, sigma = I. Violates (H3)."""

    def b(window):
        return a * window[..., 0, :] ** 3

    def G(window):
        return np.zeros(window.shape[:-2] + (dim,))

    def sigma(window):
        return np.broadcast_to(np.eye(dim), window.shape[:-2] + (dim, dim))

    return CoefficientModel(
        CoefficientSet(G=G, b=b, sigma=sigma, dim=dim, kappa=0.0, name="superlinear")
    )


PRESETS = {
    "pure-brownian": pure_brownian,
    "linear-delay": linear_delay,
    "neutral-linear": neutral_linear,
    "ou": ou,
    "bounded-trig": bounded_trig,
    "superlinear": superlinear,
}


def list_presets():
    """(name, first docstring line) for every shipped preset."""
    return [(name, factory.__doc__.strip().splitlines()[0]) for name, factory in PRESETS.items()]


def suggest_preset(name):
    """The shipped preset closest to ``name`` by edit distance."""
    return min(PRESETS, key=lambda preset: jellyfish.levenshtein_distance(name, preset))


def coefficient_violations(entry, field="coefficients"):
    """Schema violations of a coefficient entry as ``{"field", "message"}`` dicts."""
    if isinstance(entry, str):
        entry = {"preset": entry}
    if not isinstance(entry, dict):
        return [{"field": field, "message": "must be a preset name or an object"}]

    if "preset" in entry:
        name = entry["preset"]
        if name not in PRESETS:
            suggestion = suggest_preset(str(name))
            return [
                {
                    "field": f"{field}.preset",
                    "message": f"unknown preset {name!r}, did you mean {suggestion!r}?",
                }
            ]
        params = entry.get("params", {})
        if not isinstance(params, dict):
            return [{"field": f"{field}.params", "message": "must be an object"}]
        return []

    if "inline" in entry:
        inline = entry["inline"]
        if not isinstance(inline, dict):
            return [{"field": f"{field}.inline", "message": "must be an object"}]
        violations = []
        unknown = set(inline) - {"dim", "G", "b", "sigma"}
        if unknown:
            violations.append(
                {"field": f"{field}.inline", "message": f"unknown keys {sorted(unknown)}"}
            )
        for term in ("G", "b"):
            extra = set(inline.get(term, {})) - {"head", "delayed", "constant"}
            if extra:
                violations.append(
                    {"field": f"{field}.inline.{term}", "message": f"unknown keys {sorted(extra)}"}
                )
        return violations

    return [{"field": field, "message": "needs a 'preset' or an 'inline' key"}]


def create_model(entry):
    """
    Build the :class:`CoefficientModel` for a validated coefficient entry.

    :raises ConfigError: if preset parameters or inline matrices are unusable
    """
    if isinstance(entry, str):
        entry = {"preset": entry}
    try:
        if "preset" in entry:
            return PRESETS[entry["preset"]](**entry.get("params", {}))
        inline = entry["inline"]
        sigma = inline.get("sigma")
        if isinstance(sigma, dict):
            sigma = sigma.get("constant")
        spec = AffineSpec.build(
            dim=inline.get("dim", 1),
            G=inline.get("G"),
            b=inline.get("b"),
            sigma=sigma,
            name="inline",
        )
        return _affine(spec)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"cannot build coefficients: {e}", entry=entry)
