"""B-free subshifts at finite modulus truncation.

Pairwise-coprime moduli define a subshift of binary sequences whose supports
miss at least one residue class per modulus (squares of primes give the
squarefree numbers). This package provides the finite-truncation machinery:
residue groups and their rotation, binary words and admissibility, indicator
sieves, the zero-insertion map and its inverse, the skew product with its
induced first-return form, exact word counting with two-sided growth bounds,
and sampling of the maximal-entropy measure. The `bfreeflow` CLI exposes all
of it reproducibly.
"""

from .basis import (
    ModulusBasis,
    ResidueVector,
    complement_mass,
    haar_sample,
    in_forbidden,
    make_basis,
    return_time,
    squarefree_basis,
    translate,
)
from .entropy import (
    EntropyReport,
    abramov_check,
    count_words_exact,
    crt_bounds,
    empirical_block_entropy,
    empirical_entropy_rate,
    entropy_formula,
    entropy_limit_squarefree,
    entropy_report,
    rate_envelope,
)
from .errors import BfreeflowError
from .insertion import (
    check_commutation,
    convergence_index,
    extract,
    forced_count,
    forced_zero,
    insert_prefix,
)
from .rng import SplitMix64
from .sampler import (
    InducedEntropyReport,
    expected_mme_density,
    induced_entropy_estimate,
    ones_density,
    sample_mme_prefix,
)
from .sieve import bfree_indicator, mobius, squarefree_indicator
from .skew import (
    OrbitTrace,
    SkewState,
    induced_step,
    orbit,
    skew_step,
    verify_product_structure,
)
from .words import (
    BinaryWord,
    OmissionProfile,
    is_admissible,
    omission_profile,
    shift,
    support,
    unique_omitted,
)

__version__ = "0.1.0"

__all__ = [
    "BfreeflowError",
    "BinaryWord",
    "EntropyReport",
    "InducedEntropyReport",
    "ModulusBasis",
    "OmissionProfile",
    "OrbitTrace",
    "ResidueVector",
    "SkewState",
    "SplitMix64",
    "abramov_check",
    "bfree_indicator",
    "check_commutation",
    "complement_mass",
    "convergence_index",
    "count_words_exact",
    "crt_bounds",
    "empirical_block_entropy",
    "empirical_entropy_rate",
    "entropy_formula",
    "entropy_limit_squarefree",
    "entropy_report",
    "expected_mme_density",
    "extract",
    "forced_count",
    "forced_zero",
    "haar_sample",
    "in_forbidden",
    "induced_entropy_estimate",
    "induced_step",
    "insert_prefix",
    "is_admissible",
    "make_basis",
    "mobius",
    "omission_profile",
    "ones_density",
    "orbit",
    "rate_envelope",
    "return_time",
    "sample_mme_prefix",
    "shift",
    "skew_step",
    "squarefree_basis",
    "squarefree_indicator",
    "support",
    "translate",
    "unique_omitted",
    "verify_product_structure",
]
