"""Prime classification: local 2-torsion rank, splitting in K, searches.

A good odd prime q lands in class i when the 2-division cubic has
0, 1 or 3 roots mod q (i = 0, 1, 2); two roots cannot occur because
good reduction keeps the cubic discriminant a q-unit.  Root counts
mod q equal the Q_q-torsion rank by Hensel lifting.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .arith import cubic_roots_mod, kronecker, primes_up_to
from .curve import CurveQ, QuadField, check_K_not_sqrt_disc, has_rational_two_torsion
from .errors import BadPrime, HypothesisFailed, SearchExhausted
from .reduction import is_good_at

logger = logging.getLogger(__name__)

INERT = "Inert"
SPLIT = "Split"
RAMIFIED = "Ramified"

_ROOTS_TO_DIM = {0: 0, 1: 1, 3: 2}


@dataclass(frozen=True)
class PrimeClass:
    prime: int
    torsion_dim: int
    splitting_in_K: str | None
    good_for_E: bool


def classify_prime(E: CurveQ, q: int) -> PrimeClass:
    """Class of a good odd prime: torsion_dim = dim_F2 E(Q_q)[2]."""
    if q == 2:
        raise BadPrime("classification is defined at odd primes only")
    if not is_good_at(E, q):
        raise BadPrime(f"{q} divides the minimal discriminant")
    nroots = len(cubic_roots_mod(0, E.A, E.B, q))
    assert nroots != 2, "good reduction forces 0, 1 or 3 roots"
    return PrimeClass(
        prime=q, torsion_dim=_ROOTS_TO_DIM[nroots], splitting_in_K=None, good_for_E=True
    )


def splitting_in_quadratic(K: QuadField, q: int) -> str:
    """How q behaves in Q(sqrt(D))/Q.

    Odd q reads off the Kronecker symbol (D/q); q = 2 is decided by
    D mod 8 (inert for 5, split for 1, otherwise ramified).
    """
    if q == 2:
        m = K.D % 8
        if m == 1:
            return SPLIT
        if m == 5:
            return INERT
        return RAMIFIED
    s = kronecker(K.D, q)
    return INERT if s == -1 else SPLIT if s == 1 else RAMIFIED


def find_usable_primes(E: CurveQ, K: QuadField, count: int, bound: int) -> list[int]:
    """The first `count` odd primes <= bound that are good for E, carry
    full local 2-torsion, are inert in K, and avoid 2*D*disc(E).

    Deterministic ascending scan, so repeated runs always select the
    same primes.  Raises HypothesisFailed when the search cannot
    succeed at all (rational 2-torsion, or K = Q(sqrt(disc))), and
    SearchExhausted with a density estimate when the bound is too small.
    """
    if has_rational_two_torsion(E):
        raise HypothesisFailed("curve has rational 2-torsion")
    if not check_K_not_sqrt_disc(E, K):
        raise HypothesisFailed("K = Q(sqrt(disc)): no inert full-torsion primes exist")
    found: list[int] = []
    scanned = 0
    warned = False
    for q in primes_up_to(bound):
        if q == 2 or E.disc % q == 0 or K.D % q == 0:
            continue
        if not warned and q > bound // 2 and len(found) < count / 2:
            logger.warning(
                "usable-prime search past %d/%d with %d/%d found",
                bound // 2, bound, len(found), count,
            )
            warned = True
        scanned += 1
        if not is_good_at(E, q):
            continue
        if classify_prime(E, q).torsion_dim != 2:
            continue
        if splitting_in_quadratic(K, q) != INERT:
            continue
        found.append(q)
        if len(found) == count:
            return found
    density = len(found) / scanned if scanned else 0.0
    raise SearchExhausted(
        f"found {len(found)}/{count} usable primes below {bound} "
        f"(observed density {density:.4f}; expected ~1/12)"
    )


def chebotarev_fractions(E: CurveQ, K: QuadField, bound: int) -> dict[str, float]:
    """Observed densities among good odd primes < bound: the fraction
    with full 2-torsion (Chebotarev predicts 1/6 for S3 image) and the
    fraction inert in K (1/2).  Advisory numbers, not certificates."""
    good = full = inert = 0
    for q in primes_up_to(bound):
        if q == 2 or E.disc % q == 0:
            continue
        if not is_good_at(E, q):
            continue
        good += 1
        if classify_prime(E, q).torsion_dim == 2:
            full += 1
        if K.D % q != 0 and splitting_in_quadratic(K, q) == INERT:
            inert += 1
    if good == 0:
        return {"good": 0, "full_torsion_fraction": 0.0, "inert_fraction": 0.0}
    return {
        "good": good,
        "full_torsion_fraction": full / good,
        "inert_fraction": inert / good,
    }
