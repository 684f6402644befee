"""
Reproducible Brownian increments from a counter-based generator.

Each (seed, stream_id) pair keys its own Philox stream; the Philox counter walks the draw
index (step index * dim + coordinate), so any replicate can be regenerated on its own and
replicates can be produced in any order or on any thread. Normals come from the
inverse normal CDF applied to open-interval uniforms.
"""

import attr
import numpy as np
from scipy.special import ndtri

MASK64 = (1 << 64) - 1


def _uint64(value):
    return int(value) & MASK64


@attr.s(frozen=True, slots=True)
class NoiseSeed:
    """A 64-bit seed plus a 64-bit stream id; together the 128-bit Philox key."""

    seed = attr.ib(converter=_uint64)
    stream_id = attr.ib(default=0, converter=_uint64)

    def bit_generator(self):
        return np.random.Philox(key=np.array([self.seed, self.stream_id], dtype=np.uint64))

    def with_stream(self, stream_id):
        return NoiseSeed(self.seed, stream_id)


@attr.s(frozen=True, slots=True, eq=False)
class BrownianIncrements:
    """Increments W(t_{k+1}) - W(t_k) for the forward steps of a mesh, shape (n_forward, d)."""

    mesh = attr.ib()
    dim = attr.ib()
    increments = attr.ib()


def standard_normals(seed, count):
    """``count`` standard normal draws of the stream keyed by ``seed``."""
    raw = seed.bit_generator().random_raw(count)
    uniforms = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(uniforms)


def brownian_increments(mesh, dim, seed):
    """
    Gaussian increments with variance ``mesh.step`` per coordinate.

    Deterministic in (mesh, dim, seed).
    """
    if dim < 1:
        raise ValueError("dim must be at least 1")
    normals = standard_normals(seed, mesh.n_forward * dim).reshape(mesh.n_forward, dim)
    increments = np.sqrt(mesh.step) * normals
    increments.flags.writeable = False
    return BrownianIncrements(mesh=mesh, dim=dim, increments=increments)


def brownian_increments_batch(mesh, dim, seed, stream_ids):
    """
    Increments of many replicates at once, shape ``(len(stream_ids), n_forward, dim)``.

    Row ``i`` equals ``brownian_increments(mesh, dim, NoiseSeed(seed, stream_ids[i]))``.
    """
    base = seed.seed if isinstance(seed, NoiseSeed) else _uint64(seed)
    count = mesh.n_forward * dim
    out = np.empty((len(stream_ids), count))
    for row, stream_id in enumerate(stream_ids):
        out[row] = standard_normals(NoiseSeed(base, stream_id), count)
    return np.sqrt(mesh.step) * out.reshape(len(stream_ids), mesh.n_forward, dim)
