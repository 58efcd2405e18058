"""twistcert: quadratic twist construction with verifiable 2-Selmer certificates."""

from .curve import CurveQ, QuadField, make_curve, twist, two_division_cubic
from .reduction import ReductionData, tate_reduction, is_good_at, bad_primes
from .classify import PrimeClass, classify_prime, splitting_in_quadratic, find_usable_primes
from .local import (
    LocalH1,
    H1Subspace,
    SquareClass,
    WSubspace,
    alpha_dim,
    build_local_h1,
    hilbert_symbol_odd,
    kummer_image,
    local_two_torsion_dim,
    w_subspace,
)
from .ledger import (
    AMembership,
    Certificate,
    a_set_for_twist,
    build_certificate,
    certificate_from_dict,
    certificate_to_dict,
    certificate_to_json,
    drift_places,
    drift_upper_bound,
    selmer_K_lower_bound,
    sha_ledger,
)
from .forge import TwistPlan, forge, pad_for_congruences, plan_twist, verify_plan

__all__ = [
    "CurveQ",
    "QuadField",
    "make_curve",
    "twist",
    "two_division_cubic",
    "ReductionData",
    "tate_reduction",
    "is_good_at",
    "bad_primes",
    "PrimeClass",
    "classify_prime",
    "splitting_in_quadratic",
    "find_usable_primes",
    "LocalH1",
    "H1Subspace",
    "SquareClass",
    "WSubspace",
    "alpha_dim",
    "build_local_h1",
    "hilbert_symbol_odd",
    "kummer_image",
    "local_two_torsion_dim",
    "w_subspace",
    "AMembership",
    "Certificate",
    "a_set_for_twist",
    "build_certificate",
    "certificate_from_dict",
    "certificate_to_dict",
    "certificate_to_json",
    "drift_places",
    "drift_upper_bound",
    "selmer_K_lower_bound",
    "sha_ledger",
    "TwistPlan",
    "forge",
    "pad_for_congruences",
    "plan_twist",
    "verify_plan",
]

__version__ = "0.1.0"
