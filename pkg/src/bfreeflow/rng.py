"""Deterministic 64-bit random generator (splitmix64).

A counter-based variant: output i is mix(seed + i*GAMMA) with the standard
splitmix64 finalizer, so scalar stepping and vectorized batch generation
produce the same stream on every platform. Seeds are plain Python ints;
state never depends on the process RNG or on numpy's global state.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MUL1 = 0xBF58476D1CE4E5B9
_MUL2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * _MUL1 & MASK64
    z = (z ^ (z >> 27)) * _MUL2 & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Stream of 64-bit words: word i+1 is mix(seed + (i+1)*GAMMA mod 2^64)."""

    __slots__ = ("seed", "_count")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._count = 0

    def next_u64(self) -> int:
        self._count += 1
        return _mix((self.seed + self._count * GAMMA) & MASK64)

    def u64_array(self, n: int) -> np.ndarray:
        """Next n outputs as a uint64 array; equals n calls to next_u64."""
        idx = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        z = (np.uint64(self.seed) + idx * np.uint64(GAMMA))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MUL1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MUL2)
        return z ^ (z >> np.uint64(31))

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def bernoulli_bits(self, n: int, p: float = 0.5) -> np.ndarray:
        """n iid Bernoulli(p) bits as a uint8 array, one 64-bit word per bit."""
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        threshold = np.uint64(min(int(p * 2.0**64), MASK64))
        return (self.u64_array(n) < threshold).astype(np.uint8)

    def split(self) -> "SplitMix64":
        """Independent child stream; reproducible given the parent state."""
        return SplitMix64(self.next_u64())
