import math

import pytest

from bfreeflow.basis import (
    complement_mass,
    in_forbidden,
    make_basis,
    squarefree_basis,
)
from bfreeflow.entropy import LN2
from bfreeflow.insertion import extract, forced_count
from bfreeflow.rng import SplitMix64
from bfreeflow.sampler import (
    expected_mme_density,
    induced_entropy_estimate,
    ones_density,
    sample_mme_prefix,
)
from bfreeflow.sieve import squarefree_indicator
from bfreeflow.skew import SkewState, skew_step
from bfreeflow.words import BinaryWord, is_admissible, omission_profile


def test_sample_is_admissible_and_roundtrips():
    b = make_basis([4, 9])
    rng = SplitMix64(2)
    for _ in range(20):
        x, g, y = sample_mme_prefix(b, 500, rng)
        assert is_admissible(x, b)
        consumed = 500 - forced_count(g, 500)
        back = extract(x, g)
        assert back == BinaryWord(y.bits & ((1 << consumed) - 1), consumed)


def test_sample_deterministic():
    b = make_basis([4, 9, 25])
    a = sample_mme_prefix(b, 300, SplitMix64(42))
    c = sample_mme_prefix(b, 300, SplitMix64(42))
    assert a == c


def test_ones_density_examples():
    assert ones_density(BinaryWord.from_text("0101")) == 0.5
    assert ones_density(BinaryWord(0, 10)) == 0.0
    assert ones_density(squarefree_indicator(1_000_000)) == pytest.approx(
        6 / math.pi**2, abs=0.002
    )


def test_expected_density_values():
    assert expected_mme_density(make_basis([4])) == 0.375
    assert expected_mme_density(make_basis([4, 9])) == pytest.approx(1 / 3)
    assert expected_mme_density(squarefree_basis(25)) == pytest.approx(
        3 / math.pi**2, abs=0.005
    )


def test_sample_density_concentrates():
    # binomial band with the documented 4x slack: insertion makes positions
    # negatively correlated, so the iid bound alone is not guaranteed
    b = make_basis([4, 9])
    n = 200_000
    x, _, _ = sample_mme_prefix(b, n, SplitMix64(7))
    d = expected_mme_density(b)
    band = 4 * 3 * math.sqrt(d * (1 - d) / n)
    assert abs(ones_density(x) - d) < band


def test_omission_counts_settle_to_one():
    # long samples hit every class except the chosen one; rare exceptions are
    # flagged and tolerated below the 1e-3 rate
    b = make_basis([4, 9])
    horizon = 100 * b.period()
    rng = SplitMix64(13)
    runs, exceptions = 200, 0
    for _ in range(runs):
        x, g, _ = sample_mme_prefix(b, horizon, rng)
        prof = omission_profile(x, b)
        if prof.counts != (1, 1):
            exceptions += 1
    assert exceptions / runs < 1e-3, f"flagged {exceptions}/{runs} coupon misses"


def test_bernoulli_parameter_changes_tape():
    b = make_basis([4])
    x, _, y = sample_mme_prefix(b, 100_000, SplitMix64(3), bernoulli=0.2)
    assert abs(ones_density(y) - 0.2) < 0.01
    assert abs(ones_density(x) - 0.75 * 0.2) < 0.01


def test_dynamical_and_static_pictures_agree():
    # stepping the skew state and reading the next inserted symbol
    # reproduces the statically inserted word
    b = make_basis([4, 9])
    rng = SplitMix64(21)
    horizon = 2000
    x, g, y = sample_mme_prefix(b, horizon, rng)
    state = SkewState(g, y, 0)
    for j in range(horizon):
        symbol = 0 if in_forbidden(state.g) else y.bit(state.cursor + 1)
        assert symbol == x.bit(j + 1)
        state = skew_step(state)


def test_induced_entropy_estimate_pipeline():
    b = make_basis([4])
    report = induced_entropy_estimate(b, 200_000, 8, SplitMix64(5))
    # the extracted tape is the Bernoulli input: plug-in is accurate on iid
    assert report.tape_block_entropy == pytest.approx(LN2, abs=0.01)
    # frozen population values for the inserted process (alignment mixture):
    # H_8/8 = 0.634575 and H_8 - H_7 = 0.598303
    assert report.x_block_entropy == pytest.approx(0.634575, abs=0.01)
    assert report.x_entropy_rate == pytest.approx(0.598303, abs=0.015)
    # wiring: residual = tape estimate * complement mass - x estimate
    assert report.abramov_residual == pytest.approx(
        report.tape_block_entropy * complement_mass(b) - report.x_block_entropy,
        abs=1e-12,
    )
    assert report.ones_density == pytest.approx(0.375, abs=0.01)


def test_lower_bernoulli_scores_lower_entropy():
    # comparative maximality signature: a biased tape drops every estimate
    b = make_basis([4])
    fair = induced_entropy_estimate(b, 150_000, 8, SplitMix64(6))
    biased = induced_entropy_estimate(b, 150_000, 8, SplitMix64(6), bernoulli=0.3)
    assert biased.tape_block_entropy < fair.tape_block_entropy - 0.05
    assert biased.x_block_entropy < fair.x_block_entropy - 0.05
    assert biased.x_entropy_rate < fair.x_entropy_rate - 0.05
