"""Finite truncations of the modulus group and its rotation.

A basis of pairwise-coprime moduli b_1 < ... < b_r stands in for an infinite
family; the product group prod Z/b_i carries the translation by (-1,...,-1).
The forbidden set consists of vectors with some coordinate equal to 1 (the
class a shifted sequence can never omit once a 1 reaches its front), and its
complement supports the induced dynamics used elsewhere in the package.

Residues are stored reduced to 0..b-1; the forbidden class is the literal
value 1 in each coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as _iproduct
from typing import Iterable, Iterator

from .errors import (
    NotCoprimeError,
    NotInComplementError,
    PeriodOverflowError,
    TooSmallError,
)
from .rng import SplitMix64

FORBIDDEN_CLASS = 1
# guards absurd inputs only; 242 bits already occur for the squares of all
# primes up to 97, which downstream density checks rely on
_PERIOD_LIMIT = 1 << 256


@dataclass(frozen=True)
class ModulusBasis:
    """Strictly increasing, pairwise coprime moduli, each >= 2."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if not self.moduli:
            raise ValueError("basis must contain at least one modulus")
        for b in self.moduli:
            if b < 2:
                raise TooSmallError(b)
        for i in range(len(self.moduli) - 1):
            if self.moduli[i] >= self.moduli[i + 1]:
                raise ValueError("moduli must be strictly increasing")
        for i in range(len(self.moduli)):
            for j in range(i + 1, len(self.moduli)):
                if math.gcd(self.moduli[i], self.moduli[j]) != 1:
                    raise NotCoprimeError(self.moduli[i], self.moduli[j])
        if math.prod(self.moduli) >= _PERIOD_LIMIT:
            raise PeriodOverflowError(math.prod(self.moduli))

    def __len__(self) -> int:
        return len(self.moduli)

    def period(self) -> int:
        """Order of the translation: product of the moduli."""
        return math.prod(self.moduli)

    def complement_size(self) -> int:
        """Number of vectors avoiding the forbidden class: prod (b_i - 1)."""
        return math.prod(b - 1 for b in self.moduli)


@dataclass(frozen=True)
class ResidueVector:
    """Element of the product group, one reduced residue per modulus."""

    basis: ModulusBasis
    residues: tuple[int, ...]

    def __post_init__(self):
        if len(self.residues) != len(self.basis.moduli):
            raise ValueError(
                f"got {len(self.residues)} residues for "
                f"{len(self.basis.moduli)} moduli"
            )
        for g, b in zip(self.residues, self.basis.moduli):
            if not 0 <= g < b:
                raise ValueError(f"residue {g} not reduced mod {b}")


def make_basis(moduli: Iterable[int]) -> ModulusBasis:
    """Validate and sort a list of moduli into a basis."""
    mods = sorted(moduli)
    return ModulusBasis(tuple(mods))


def first_primes(r: int) -> list[int]:
    """The first r primes, by a small sieve."""
    if r < 1:
        raise ValueError("need r >= 1")
    # p_r < r (ln r + ln ln r) for r >= 6
    bound = 15 if r < 6 else int(r * (math.log(r) + math.log(math.log(r)))) + 2
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(math.isqrt(bound)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(sieve[p * p :: p]))
    primes = [n for n in range(bound + 1) if sieve[n]]
    return primes[:r]


def squarefree_basis(r: int) -> ModulusBasis:
    """Squares of the first r primes: the truncation used for squarefree numbers."""
    return ModulusBasis(tuple(p * p for p in first_primes(r)))


def translate(g: ResidueVector) -> ResidueVector:
    """Subtract 1 from every coordinate, mod its modulus."""
    res = tuple((c - 1) % b for c, b in zip(g.residues, g.basis.moduli))
    return ResidueVector(g.basis, res)


def in_forbidden(g: ResidueVector) -> bool:
    """True iff some coordinate equals the forbidden class."""
    return any(c == FORBIDDEN_CLASS for c in g.residues)


def return_time(g: ResidueVector) -> int:
    """Steps of translation until the vector next avoids the forbidden class.

    Defined only off the forbidden set. The group is a finite cycle, so the
    return time is at most the period.
    """
    if in_forbidden(g):
        raise NotInComplementError("return time undefined on the forbidden set")
    # n is a return iff no coordinate satisfies g_i - n == 1 mod b_i
    n = 1
    while any((c - n) % b == FORBIDDEN_CLASS for c, b in zip(g.residues, g.basis.moduli)):
        n += 1
    return n


def haar_sample(basis: ModulusBasis, rng: SplitMix64) -> ResidueVector:
    """Uniform vector: each coordinate independently uniform on 0..b-1."""
    return ResidueVector(basis, tuple(rng.below(b) for b in basis.moduli))


def complement_sample(basis: ModulusBasis, rng: SplitMix64) -> ResidueVector:
    """Uniform vector conditioned to avoid the forbidden class (coordinatewise)."""
    res = []
    for b in basis.moduli:
        c = rng.below(b - 1)
        res.append(c if c < FORBIDDEN_CLASS else c + 1)
    return ResidueVector(basis, tuple(res))


def complement_mass(basis: ModulusBasis) -> float:
    """Haar mass of the complement of the forbidden set: prod (1 - 1/b_i)."""
    return basis.complement_size() / basis.period()


def all_vectors(basis: ModulusBasis) -> Iterator[ResidueVector]:
    """Every vector of the finite group, in lexicographic order."""
    for combo in _iproduct(*(range(b) for b in basis.moduli)):
        yield ResidueVector(basis, combo)


def complement_vectors(basis: ModulusBasis) -> Iterator[ResidueVector]:
    """Every vector avoiding the forbidden class, in lexicographic order."""
    ranges = [
        [c for c in range(b) if c != FORBIDDEN_CLASS] for b in basis.moduli
    ]
    for combo in _iproduct(*ranges):
        yield ResidueVector(basis, combo)
