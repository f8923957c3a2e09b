"""Arithmetic indicator sequences: Mobius, squarefree, and B-free sieves.

Everything marks multiples in a flat array rather than factoring each n,
so ranges of 10^8 stay tractable.
"""

from __future__ import annotations

import math

import numpy as np

from .basis import ModulusBasis
from .words import BinaryWord


def mobius(n_max: int) -> np.ndarray:
    """Mobius values mu(1..n_max) as an int8 array (entry i-1 is mu(i))."""
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    mu = np.ones(n_max + 1, dtype=np.int8)
    is_prime = np.ones(n_max + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, n_max + 1):
        if is_prime[p]:
            is_prime[2 * p :: p] = False
            mu[p::p] *= -1
            sq = p * p
            if sq <= n_max:
                mu[sq::sq] = 0
    return mu[1:]


def squarefree_indicator(n_max: int) -> BinaryWord:
    """Indicator of integers free of square factors, positions 1..n_max."""
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    flags = np.ones(n_max + 1, dtype=np.uint8)
    for p in range(2, math.isqrt(n_max) + 1):
        if flags[p]:  # still squarefree: covers every prime; composites add nothing new
            sq = p * p
            flags[sq::sq] = 0
    return BinaryWord.from_numpy(flags[1:])


def bfree_indicator(n_max: int, basis: ModulusBasis) -> BinaryWord:
    """Indicator of integers divisible by no modulus of the basis."""
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    flags = np.ones(n_max + 1, dtype=np.uint8)
    for b in basis.moduli:
        flags[b::b] = 0
    return BinaryWord.from_numpy(flags[1:])
