"""Finite binary words and the residue classes their supports miss.

A word is an immutable packed bit string with 1-indexed positions (position m
is the m-th symbol). The packing is a single arbitrary-precision integer with
position m at bit m-1, which makes popcounts, shifts and numpy round-trips
cheap; word enumeration elsewhere iterates over millions of these.

Admissibility w.r.t. a basis means: for every modulus, at least one residue
class contains no support position. A finite admissible word always extends
to an admissible sequence (append zeros), so this is also membership in the
language of the associated subshift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import ModulusBasis, ResidueVector
from .errors import NotUniquelyOmittingError, ShiftTooLargeError


class BinaryWord:
    """Immutable 0/1 word; positions are 1-indexed."""

    __slots__ = ("bits", "length")

    def __init__(self, bits: int, length: int):
        if length < 0:
            raise ValueError("length must be >= 0")
        if bits < 0 or bits >> length:
            raise ValueError("bits do not fit in the stated length")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "length", length)

    def __setattr__(self, name, value):
        raise AttributeError("BinaryWord is immutable")

    @classmethod
    def from_text(cls, text: str) -> "BinaryWord":
        """Parse an ASCII 0/1 string, first character = position 1."""
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise ValueError(f"invalid character {ch!r} in word text")
        return cls(bits, len(text))

    @classmethod
    def from_hex(cls, packed: str) -> "BinaryWord":
        """Parse the '<length>:<hex>' packed form produced by to_hex."""
        length_s, _, hex_s = packed.partition(":")
        return cls(int(hex_s, 16), int(length_s))

    @classmethod
    def from_numpy(cls, arr: np.ndarray) -> "BinaryWord":
        """Build from a 0/1 array, entry 0 = position 1."""
        a = np.ascontiguousarray(arr, dtype=np.uint8)
        packed = np.packbits(a, bitorder="little").tobytes()
        return cls(int.from_bytes(packed, "little"), len(a))

    @classmethod
    def from_support(cls, positions, length: int) -> "BinaryWord":
        bits = 0
        for m in positions:
            if not 1 <= m <= length:
                raise ValueError(f"support position {m} outside 1..{length}")
            bits |= 1 << (m - 1)
        return cls(bits, length)

    def bit(self, m: int) -> int:
        if not 1 <= m <= self.length:
            raise IndexError(f"position {m} outside 1..{self.length}")
        return self.bits >> (m - 1) & 1

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinaryWord)
            and self.bits == other.bits
            and self.length == other.length
        )

    def __hash__(self) -> int:
        return hash((self.bits, self.length))

    def __repr__(self) -> str:
        text = self.to_text() if self.length <= 64 else self.to_text()[:61] + "..."
        return f"BinaryWord({text!r})"

    def to_text(self) -> str:
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.length))

    def to_hex(self) -> str:
        return f"{self.length}:{self.bits:x}"

    def to_numpy(self) -> np.ndarray:
        nbytes = (self.length + 7) // 8
        raw = np.frombuffer(self.bits.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.length]

    def ones_count(self) -> int:
        return self.bits.bit_count()


def support(w: BinaryWord) -> list[int]:
    """Ascending positions of the 1s."""
    out = []
    bits = w.bits
    while bits:
        low = bits & -bits
        out.append(low.bit_length())
        bits ^= low
    return out


def shift(w: BinaryWord, k: int) -> BinaryWord:
    """Drop the first k symbols."""
    if k < 0 or k > w.length:
        raise ShiftTooLargeError(k, w.length)
    return BinaryWord(w.bits >> k, w.length - k)


@dataclass(frozen=True)
class OmissionProfile:
    """Per modulus: the residue classes containing no support position."""

    basis: ModulusBasis
    omitted: tuple[frozenset[int], ...]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.omitted)


def omission_profile(
    w: BinaryWord, basis: ModulusBasis, phase: int = 0
) -> OmissionProfile:
    """Classes c mod b_i missed by {n + phase : n in supp(w)}.

    The phase lets callers reason about windows that start deeper inside a
    longer sequence without copying it.
    """
    if phase < 0:
        raise ValueError("phase must be >= 0")
    supp = np.asarray(support(w), dtype=np.int64)
    omitted = []
    for b in basis.moduli:
        if supp.size:
            hit = np.unique((supp + phase) % b)
            missing = np.setdiff1d(np.arange(b), hit, assume_unique=True)
        else:
            missing = np.arange(b)
        omitted.append(frozenset(int(c) for c in missing))
    return OmissionProfile(basis, tuple(omitted))


def is_admissible(w: BinaryWord, basis: ModulusBasis) -> bool:
    """True iff every modulus misses at least one class of the support."""
    supp = np.asarray(support(w), dtype=np.int64)
    for b in basis.moduli:
        if supp.size >= b and np.unique(supp % b).size == b:
            return False
    return True


def unique_omitted(profile: OmissionProfile) -> ResidueVector:
    """The single omitted class per modulus, when there is exactly one."""
    res = []
    for i, classes in enumerate(profile.omitted):
        if len(classes) != 1:
            raise NotUniquelyOmittingError(i, len(classes))
        res.append(next(iter(classes)))
    return ResidueVector(profile.basis, tuple(res))
