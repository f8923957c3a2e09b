"""Skew product over the group rotation, and its first-return map.

A state is a residue vector plus a finite tape with a read cursor. One step
translates the vector and consumes one tape symbol unless the vector lies in
the forbidden set. Inducing on the complement of the forbidden set makes the
dynamics a direct product: the vector part jumps by its return time while the
cursor advances by exactly one. verify_product_structure checks that shape
either exhaustively or along many random orbits.
"""

from __future__ import annotations

from dataclasses import dataclass

from .basis import (
    ModulusBasis,
    ResidueVector,
    complement_sample,
    complement_vectors,
    in_forbidden,
    return_time,
    translate,
)
from .errors import NotInComplementError, TapeExhaustedError
from .rng import SplitMix64
from .words import BinaryWord


@dataclass(frozen=True)
class SkewState:
    """Point of the product system: group element, tape, symbols consumed."""

    g: ResidueVector
    tape: BinaryWord
    cursor: int = 0

    def __post_init__(self):
        if not 0 <= self.cursor <= len(self.tape):
            raise ValueError("cursor outside tape")

    def remaining(self) -> int:
        return len(self.tape) - self.cursor


@dataclass(frozen=True)
class OrbitTrace:
    """Successive states under skew_step, with complement membership flags."""

    states: tuple[SkewState, ...]
    return_flags: tuple[bool, ...]

    @property
    def step_count(self) -> int:
        return len(self.states) - 1


def skew_step(s: SkewState) -> SkewState:
    """One step: translate the vector; consume a symbol iff it was unforbidden."""
    advance = 0 if in_forbidden(s.g) else 1
    if advance and s.remaining() < 1:
        raise TapeExhaustedError("tape exhausted")
    return SkewState(translate(s.g), s.tape, s.cursor + advance)


def induced_step(s: SkewState) -> SkewState:
    """First-return step on the complement of the forbidden set.

    Applies skew_step return_time(g) times. On a finite basis this always
    lands back in the complement having consumed exactly one symbol.
    """
    if in_forbidden(s.g):
        raise NotInComplementError("induced step undefined on the forbidden set")
    r = return_time(s.g)
    out = s
    for _ in range(r):
        out = skew_step(out)
    assert not in_forbidden(out.g) and out.cursor == s.cursor + 1
    return out


def orbit(s: SkewState, n: int) -> OrbitTrace:
    """n steps of skew_step with every intermediate state recorded."""
    states = [s]
    for _ in range(n):
        states.append(skew_step(states[-1]))
    flags = tuple(not in_forbidden(st.g) for st in states)
    return OrbitTrace(tuple(states), flags)


@dataclass(frozen=True)
class ProductStructureReport:
    """Outcome of checking that induced steps advance the cursor by one."""

    checks: int
    failures: int
    max_return_time: int

    def ok(self) -> bool:
        return self.failures == 0


def verify_product_structure(
    samples: int,
    steps: int,
    basis: ModulusBasis,
    rng: SplitMix64,
    exhaustive: bool = False,
) -> ProductStructureReport:
    """Check the product form of the induced map over many orbits.

    Each check runs `steps` induced steps from a start in the complement and
    verifies that every one advances the cursor by exactly 1 and returns to
    the complement. With exhaustive=True the starts enumerate the whole
    complement instead of being sampled.
    """
    starts = (
        list(complement_vectors(basis))
        if exhaustive
        else [complement_sample(basis, rng) for _ in range(samples)]
    )
    # worst-case tape use per induced step is the period
    tape = BinaryWord(0, steps + basis.period())
    checks = failures = 0
    max_rt = 0
    for g0 in starts:
        state = SkewState(g0, tape, 0)
        for _ in range(steps):
            max_rt = max(max_rt, return_time(state.g))
            before = state.cursor
            try:
                state = induced_step(state)
            except AssertionError:
                failures += 1
                break
            checks += 1
            if state.cursor != before + 1 or in_forbidden(state.g):
                failures += 1
    return ProductStructureReport(checks, failures, max_rt)
