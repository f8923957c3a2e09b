"""Word counting and entropy for truncated B-free shifts.

A word of length L occurs in a shift whose elements omit exactly i_k classes
mod b_k iff, for every k, the support of the word meets at most b_k - i_k
classes mod b_k: the omitted classes can then be chosen disjoint from the
support (any window phase only rotates the hit classes, so their number is
what matters). count_words_exact enumerates all 2^L words under this
criterion; the counts are sandwiched between the two Chinese-remainder
bounds, and at lengths that are multiples of the basis period the log of the
sandwich pins the exponential growth rate to log 2 * prod(1 - i_k/b_k).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .basis import ModulusBasis
from .errors import BadOmissionCountError, LengthCapError, WordTooShortError
from .words import BinaryWord

DEFAULT_LENGTH_CAP = 24
_CHUNK_BITS = 18

LN2 = math.log(2.0)


def _validate_omissions(basis: ModulusBasis, omit: Sequence[int]) -> tuple[int, ...]:
    omit = tuple(omit)
    if len(omit) != len(basis.moduli):
        raise ValueError(
            f"got {len(omit)} omission counts for {len(basis.moduli)} moduli"
        )
    for idx, (i_k, b_k) in enumerate(zip(omit, basis.moduli)):
        if not 1 <= i_k <= b_k - 1:
            raise BadOmissionCountError(idx, i_k, b_k)
    return omit


def _class_bit_tables(basis: ModulusBasis, length: int) -> list[np.ndarray]:
    """Per modulus: bit (compactly relabeled class of position m) for m = 1..length.

    Positions 1..length touch at most min(b, length) distinct classes mod b,
    so each hit-set fits a uint32 mask once classes are relabeled compactly.
    """
    tables = []
    for b in basis.moduli:
        classes = sorted({m % b for m in range(1, length + 1)})
        rank = {c: i for i, c in enumerate(classes)}
        tables.append(
            np.array([1 << rank[m % b] for m in range(1, length + 1)], dtype=np.uint32)
        )
    return tables


def _popcount(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr)


def count_words_exact(
    basis: ModulusBasis,
    omit: Sequence[int],
    length: int,
    cap: int = DEFAULT_LENGTH_CAP,
    threads: int = 1,
) -> int:
    """Number of length-`length` words occurring in the shift with the given
    omission counts.

    Brute-force enumeration of all 2^length words; a word counts iff each
    modulus has at least omit[k] classes free of its support. The word space
    is split into chunks by high bits, each processed independently with
    vectorized hit-set masks, and the chunk counts are summed.
    """
    omit = _validate_omissions(basis, omit)
    if length < 1:
        raise ValueError("length must be >= 1")
    if length > cap:
        raise LengthCapError(length, cap)

    tables = _class_bit_tables(basis, length)
    allowed_hits = [
        min(b - i_k, len(np.unique(t)))
        for b, i_k, t in zip(basis.moduli, omit, tables)
    ]
    low_bits = min(length, _CHUNK_BITS)
    high_bits = length - low_bits

    # hit-set masks for all words over positions 1..low_bits, by doubling
    low_masks = []
    for t in tables:
        masks = np.zeros(1 << low_bits, dtype=np.uint32)
        for j in range(low_bits):
            masks[1 << j : 2 << j] = masks[: 1 << j] | t[j]
        low_masks.append(masks)

    def count_chunk(high: int) -> int:
        keep = np.ones(1 << low_bits, dtype=bool)
        for t, masks, most in zip(tables, low_masks, allowed_hits):
            high_mask = np.uint32(0)
            for j in range(high_bits):
                if high >> j & 1:
                    high_mask |= t[low_bits + j]
            keep &= _popcount(masks | high_mask) <= most
        return int(keep.sum())

    highs = range(1 << high_bits)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(count_chunk, highs))
    return sum(count_chunk(h) for h in highs)


def crt_bounds(
    basis: ModulusBasis, omit: Sequence[int], m: int
) -> tuple[int, int]:
    """Two-sided word-count bounds at length m * period.

    Lower: fix one choice of omitted classes; the unconstrained positions
    carry 2^(m * prod(b_k - i_k)) distinct words. Upper: multiply by the
    number of class choices prod C(b_k, i_k). Exact big-integer arithmetic.
    """
    omit = _validate_omissions(basis, omit)
    if m < 1:
        raise ValueError("m must be >= 1")
    free = m * math.prod(b - i for b, i in zip(basis.moduli, omit))
    lower = 1 << free
    upper = math.prod(math.comb(b, i) for b, i in zip(basis.moduli, omit)) * lower
    return lower, upper


def entropy_formula(basis: ModulusBasis, omit: Sequence[int]) -> float:
    """Closed-form topological entropy in nats: ln2 * prod(1 - i_k/b_k)."""
    omit = _validate_omissions(basis, omit)
    return LN2 * math.prod(1.0 - i / b for b, i in zip(basis.moduli, omit))


def rate_envelope(
    basis: ModulusBasis, omit: Sequence[int], m: int
) -> tuple[float, float]:
    """Per-symbol log of the CRT sandwich at length m * period, in nats.

    The lower rate is exactly the closed-form entropy; the upper adds
    sum(ln C(b_k, i_k)) / L, which vanishes as the length grows.
    """
    omit = _validate_omissions(basis, omit)
    length = m * basis.period()
    low = entropy_formula(basis, omit)
    slack = sum(math.log(math.comb(b, i)) for b, i in zip(basis.moduli, omit))
    return low, low + slack / length


class SquarefreeLimit(NamedTuple):
    value: float
    primes_used: int
    largest_prime: int


def entropy_limit_squarefree(tolerance: float) -> SquarefreeLimit:
    """Partial product ln2 * prod_{p <= P} (1 - 1/p^2) with certified tail.

    P = ceil(1/tolerance) suffices: the discarded factor exceeds
    1 - sum_{n > P} 1/n^2 > 1 - 1/P >= 1 - tolerance, so the returned value
    overshoots the limit (6/pi^2) ln2 by at most tolerance * ln2.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be > 0")
    limit_p = max(2, math.ceil(1.0 / tolerance))
    is_prime = np.ones(limit_p + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit_p) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    primes = np.flatnonzero(is_prime).astype(np.float64)
    value = LN2 * float(np.prod(1.0 - primes**-2))
    return SquarefreeLimit(value, len(primes), int(primes[-1]))


def block_distribution(w: BinaryWord, k: int) -> np.ndarray:
    """Frequencies of the 2^k blocks over all overlapping windows of w."""
    if k < 1:
        raise ValueError("block length must be >= 1")
    if len(w) < k:
        raise WordTooShortError(len(w), k)
    bits = w.to_numpy().astype(np.int64)
    weights = 1 << np.arange(k, dtype=np.int64)
    codes = np.lib.stride_tricks.sliding_window_view(bits, k) @ weights
    counts = np.bincount(codes, minlength=1 << k)
    return counts / counts.sum()


def _plugin_entropy(freqs: np.ndarray) -> float:
    nz = freqs[freqs > 0]
    return float(-(nz * np.log(nz)).sum())


def empirical_block_entropy(w: BinaryWord, k: int) -> float:
    """Plug-in block entropy H_k / k in nats per symbol.

    H_k is the entropy of the empirical distribution of k-blocks over all
    overlapping windows. Converges to the entropy rate from above as k grows
    (slowly, when the source hides state such as an alignment phase), and
    needs len(w) >> 2^k windows to be trustworthy.
    """
    if len(w) < k + 1000:
        raise WordTooShortError(len(w), k + 1000)
    return _plugin_entropy(block_distribution(w, k)) / k


def empirical_entropy_rate(w: BinaryWord, k: int) -> float:
    """Conditional-entropy estimate H_k - H_{k-1} in nats per symbol.

    Same plug-in frequencies as empirical_block_entropy, but the difference
    of consecutive block entropies sheds the O(1/k) additive bias of H_k / k.
    Requires k >= 2.
    """
    if k < 2:
        raise ValueError("rate estimate needs k >= 2")
    if len(w) < k + 1000:
        raise WordTooShortError(len(w), k + 1000)
    h_k = _plugin_entropy(block_distribution(w, k))
    h_km1 = _plugin_entropy(block_distribution(w, k - 1))
    return h_k - h_km1


def abramov_check(h_full: float, y_mass: float, h_induced: float) -> float:
    """Signed defect of the induced-entropy identity: h_induced * y_mass - h_full."""
    if not 0.0 < y_mass <= 1.0:
        raise ValueError("y_mass must lie in (0, 1]")
    if not (math.isfinite(h_full) and math.isfinite(h_induced)):
        raise ValueError("entropies must be finite")
    return h_induced * y_mass - h_full


@dataclass(frozen=True)
class EntropyReport:
    """Everything a word-count experiment knows about one (basis, I, L)."""

    moduli: tuple[int, ...]
    omit: tuple[int, ...]
    length: int
    formula_nats: float
    count_lower: int
    count_upper: int
    exact_count: int | None = None
    empirical: float | None = None
    extras: dict = field(default_factory=dict)

    @property
    def exact_rate(self) -> float | None:
        if self.exact_count is None:
            return None
        return math.log(self.exact_count) / self.length


def entropy_report(
    basis: ModulusBasis,
    omit: Sequence[int],
    m: int,
    compute_exact: bool = True,
    cap: int = DEFAULT_LENGTH_CAP,
    threads: int = 1,
) -> EntropyReport:
    """Bounds, formula, and (when the length is under the cap) the exact count
    at length m * period."""
    omit = _validate_omissions(basis, omit)
    length = m * basis.period()
    lower, upper = crt_bounds(basis, omit, m)
    exact = None
    if compute_exact and length <= cap:
        exact = count_words_exact(basis, omit, length, cap=cap, threads=threads)
    return EntropyReport(
        moduli=basis.moduli,
        omit=omit,
        length=length,
        formula_nats=entropy_formula(basis, omit),
        count_lower=lower,
        count_upper=upper,
        exact_count=exact,
    )
