"""
## Documented pseudo-random stream for reproducible random signals.

Why: the random cosine series signal must be identical across platforms and
implementations, so the generator is fixed here rather than delegated to numpy's
default BitGenerator (whose streams are not part of any stable contract).

SplitMix64
    state_i = seed + i * 0x9E3779B97F4A7C15  (mod 2^64), i = 1, 2, ...
    z = state_i
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out_i = z ^ (z >> 31)

Uniforms in (0, 1]: ((out_i >> 11) + 1) * 2^-53.
Normals (Box-Muller): uniforms taken in pairs (u1, u2) give
    sqrt(-2 ln u1) cos(2 pi u2), sqrt(-2 ln u1) sin(2 pi u2)
and the k-th normal of the stream is the k-th of these, in that order.

Each output depends only on (seed, i), so whole streams are computed at once with
wrapping numpy.uint64 arithmetic.

*Tested by: tests/test_rng.py*
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from gpswf_core.errors import DomainError

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB
_MASK64 = (1 << 64) - 1


def splitmix64(seed: int, count: int) -> NDArray[np.uint64]:
    """First `count` SplitMix64 outputs for `seed` (taken mod 2^64)."""
    if count < 0:
        raise DomainError(f"count must be >= 0, got {count}")
    i = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK64) + i * np.uint64(GOLDEN_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_2)
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, count: int) -> NDArray[np.float64]:
    """Uniform doubles in (0, 1] from the top 53 bits of each output."""
    top = (splitmix64(seed, count) >> np.uint64(11)).astype(np.float64)
    return (top + 1.0) * 2.0**-53


def standard_normals(seed: int, count: int) -> NDArray[np.float64]:
    """First `count` Box-Muller normals of the stream."""
    if count < 0:
        raise DomainError(f"count must be >= 0, got {count}")
    pairs = (count + 1) // 2
    u = uniforms(seed, 2 * pairs)
    radius = np.sqrt(-2.0 * np.log(u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]
