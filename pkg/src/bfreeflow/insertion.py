"""Zero-insertion along residue classes, and its inverse.

Given a residue vector g, position m is *forced* when m falls in the class
g_i mod b_i for some i. Writing a free bit stream y into the unforced
positions of 1..M (zeros at forced ones) produces a word that omits class
g_i mod b_i for every i, and deleting those zeros recovers the consumed
prefix of y exactly. One translation step of g matches one shift of the
output, with the tape advancing only when g avoids the forbidden class;
check_commutation verifies that identity entrywise.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .basis import ModulusBasis, ResidueVector, in_forbidden, translate
from .errors import InputTooShortError, NotOmittingError
from .words import BinaryWord, shift

_SCAN_LIMIT = 10_000
_IE_MAX_MODULI = 20


def forced_zero(g: ResidueVector, m: int) -> bool:
    """True iff position m is forced to 0 by some coordinate of g."""
    if m < 1:
        raise ValueError("positions start at 1")
    return any(m % b == c for c, b in zip(g.residues, g.basis.moduli))


def forced_mask(g: ResidueVector, m_max: int) -> np.ndarray:
    """Boolean array, entry m-1 true iff position m is forced, m = 1..m_max."""
    mask = np.zeros(m_max, dtype=bool)
    for c, b in zip(g.residues, g.basis.moduli):
        first = c if c >= 1 else b  # smallest position >= 1 in class c mod b
        mask[first - 1 :: b] = True
    return mask


def _crt_pair(c1: int, m1: int, c2: int, m2: int) -> tuple[int, int]:
    # coprime moduli: residue mod m1*m2 hitting both classes
    inv = pow(m1, -1, m2)
    return (c1 + (c2 - c1) * inv % m2 * m1) % (m1 * m2), m1 * m2


def forced_count_by_scan(g: ResidueVector, m: int) -> int:
    """Forced positions <= m, counted one position at a time."""
    return sum(1 for n in range(1, m + 1) if forced_zero(g, n))


def forced_count_by_crt(g: ResidueVector, m: int) -> int:
    """Forced positions <= m via inclusion-exclusion over modulus subsets.

    Coprimality makes every subset intersection a single class mod the
    product, so each term is a floor count. Cost 2^r, independent of m.
    """
    moduli = g.basis.moduli
    total = 0
    for size in range(1, len(moduli) + 1):
        sign = 1 if size % 2 else -1
        for subset in combinations(range(len(moduli)), size):
            c, mod = g.residues[subset[0]], moduli[subset[0]]
            for i in subset[1:]:
                c, mod = _crt_pair(c, mod, g.residues[i], moduli[i])
            first = c if c >= 1 else mod
            if first <= m:
                total += sign * ((m - first) // mod + 1)
    return total


def forced_count(g: ResidueVector, m: int) -> int:
    """Number of forced positions in 1..m.

    Scans directly for small m; switches to the inclusion-exclusion count for
    long prefixes (or a vectorized scan when the basis is too wide for 2^r
    subsets). The two routes agree everywhere and are cross-checked in tests.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return 0
    if m <= _SCAN_LIMIT:
        return forced_count_by_scan(g, m)
    if len(g.basis) <= _IE_MAX_MODULI:
        return forced_count_by_crt(g, m)
    return int(forced_mask(g, m).sum())


def insert_prefix(g: ResidueVector, y: BinaryWord, m_out: int) -> BinaryWord:
    """First m_out symbols of the insertion of tape y along g.

    Forced positions read 0; position m otherwise carries tape bit
    m - (number of forced positions <= m). Requires the tape to cover every
    unforced position up to the horizon.
    """
    if m_out < 0:
        raise ValueError("output length must be >= 0")
    mask = forced_mask(g, m_out)
    needed = m_out - int(mask.sum())
    if len(y) < needed:
        raise InputTooShortError(needed, len(y))
    out = np.zeros(m_out, dtype=np.uint8)
    out[~mask] = y.to_numpy()[:needed]
    return BinaryWord.from_numpy(out)


def extract(x: BinaryWord, g: ResidueVector) -> BinaryWord:
    """Delete the forced-position zeros of x; inverse of insert_prefix.

    Rejects words that do not omit g: a 1 in a forced position means x is
    outside the image of the insertion, and silently dropping it would hide
    the mismatch.
    """
    mask = forced_mask(g, len(x))
    arr = x.to_numpy()
    bad = np.flatnonzero(arr.astype(bool) & mask)
    if bad.size:
        raise NotOmittingError(int(bad[0]) + 1)
    return BinaryWord.from_numpy(arr[~mask])


def check_commutation(g: ResidueVector, y: BinaryWord, m_out: int) -> bool:
    """Insert-then-step equals step-then-insert on the first m_out symbols.

    One dynamical step translates g and consumes a tape symbol exactly when g
    avoids the forbidden class; the static side shifts the inserted word by
    one. Both branches (g forbidden / not) are valid inputs.
    """
    lhs_tape = y if in_forbidden(g) else shift(y, 1)
    lhs = insert_prefix(translate(g), lhs_tape, m_out)
    rhs = shift(insert_prefix(g, y, m_out + 1), 1)
    return lhs == rhs


def truncated(g: ResidueVector, r: int) -> ResidueVector:
    """Restriction of g to its first r moduli."""
    if not 1 <= r <= len(g.basis):
        raise ValueError(f"truncation {r} outside 1..{len(g.basis)}")
    return ResidueVector(
        ModulusBasis(g.basis.moduli[:r]), g.residues[:r]
    )


def convergence_index(g: ResidueVector, horizon: int) -> int:
    """Smallest truncation whose forced set matches the full basis on 1..horizon.

    Insertion outputs computed with at least this many moduli agree with the
    full-basis output on the first `horizon` symbols.
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if horizon == 0:
        return 1
    full = forced_mask(g, horizon)
    for r in range(1, len(g.basis) + 1):
        if np.array_equal(forced_mask(truncated(g, r), horizon), full):
            return r
    raise AssertionError("unreachable: the full basis always matches itself")
