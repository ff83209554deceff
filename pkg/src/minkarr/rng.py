"""Counter-based SplitMix64 random streams.

Every draw is a pure function of ``(seed, stream, counter)`` so restarts and
shards can be regenerated independently and in any order.

Algorithm (all arithmetic modulo 2**64)::

    GOLDEN = 0x9E3779B97F4A7C15
    mix(z):  z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
             z ^= z >> 27; z *= 0x94D049BB133111EB
             z ^= z >> 31
    key    = mix(seed ^ mix(stream + GOLDEN))
    word_k = mix(key + (k + 1) * GOLDEN)            k = 0, 1, 2, ...

Doubles in [0, 1) are ``(word >> 11) * 2**-53``.  Normals use Box-Muller on
consecutive pairs ``(u1, u2)`` with ``r = sqrt(-2 ln(1 - u1))`` giving
``r cos(2 pi u2), r sin(2 pi u2)``.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    z &= _MASK
    z ^= z >> 30
    z = (z * _M1) & _MASK
    z ^= z >> 27
    z = (z * _M2) & _MASK
    z ^= z >> 31
    return z


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, stream: int = 0) -> int:
    return mix64((seed & _MASK) ^ mix64(stream + GOLDEN))


class CounterRNG:
    """Sequential view over one ``(seed, stream)`` substream."""

    def __init__(self, seed: int = 0, stream: int = 0):
        self.seed = seed
        self.stream = stream
        self.key = stream_key(seed, stream)
        self.counter = 0

    def words(self, n: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        with np.errstate(over="ignore"):
            z = np.uint64(self.key) + k * np.uint64(GOLDEN)
            return _mix64_array(z)

    def uniform(self, size=None, low: float = 0.0, high: float = 1.0):
        shape = () if size is None else np.atleast_1d(size)
        n = int(np.prod(shape)) if size is not None else 1
        u = (self.words(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        u = low + (high - low) * u
        if size is None:
            return float(u[0])
        return u.reshape(tuple(shape))

    def normal(self, size) -> np.ndarray:
        shape = tuple(np.atleast_1d(size))
        n = int(np.prod(shape))
        m = (n + 1) // 2
        u = self.uniform(2 * m).reshape(m, 2)
        r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        phi = 2.0 * np.pi * u[:, 1]
        z = np.empty((m, 2))
        z[:, 0] = r * np.cos(phi)
        z[:, 1] = r * np.sin(phi)
        return z.ravel()[:n].reshape(shape)

    def unit_vectors(self, n: int, d: int) -> np.ndarray:
        """Uniform points on the sphere S^{d-1} by normalizing Gaussians."""
        g = self.normal((n, d))
        norms = np.linalg.norm(g, axis=1)
        # a zero vector has probability ~0; replace rather than divide by zero
        bad = norms == 0
        if bad.any():
            g[bad, 0] = 1.0
            norms[bad] = 1.0
        return g / norms[:, None]
