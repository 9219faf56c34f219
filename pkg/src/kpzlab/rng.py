"""Counter-based random numbers (splitmix64).

Every stochastic routine in this package draws uniforms through these mixers,
keyed by (seed, sample index, event counter).  Streams are reproducible and
order-independent: sample i never depends on how many draws sample j made,
and a vertex at (x, y) gets the same coin regardless of sweep order.
"""

from __future__ import annotations

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """Finalizing mixer of splitmix64; bijective on 64-bit words."""
    z = (z + _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def derive_key(seed: int, index: int) -> int:
    """Per-sample key; distinct samples get decorrelated streams."""
    return mix64(mix64(seed & _MASK) ^ ((index * _GAMMA) & _MASK))


def uniform(key: int, counter: int) -> float:
    """Uniform in [0, 1) for draw `counter` of stream `key`."""
    h = mix64((key ^ ((counter * _MIX1) & _MASK)) & _MASK)
    return (h >> 11) * (1.0 / 9007199254740992.0)
