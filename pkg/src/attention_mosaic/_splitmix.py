"""splitmix64 pseudorandom generator.

Tiny, seedable and exactly reproducible across platforms, which is what the
weight initializer and the site sampler need to produce stable golden
outputs. The k-th output is a pure function of seed + (k+1)*GAMMA, so whole
streams can be generated vectorized without changing the draw order.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Sequential splitmix64 stream."""

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        # 53-bit mantissa, uniform in [0, 1)
        return (self.next_uint64() >> 11) * 2.0**-53


def uint64_stream(seed: int, count: int) -> np.ndarray:
    """First `count` outputs of SplitMix64(seed), vectorized."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(int(seed) & _MASK) + idx * np.uint64(_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def float_stream(seed: int, count: int) -> np.ndarray:
    """First `count` uniforms in [0, 1), matching SplitMix64.next_float."""
    return (uint64_stream(seed, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53
