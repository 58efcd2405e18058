"""Dimension bookkeeping and certificates.

The certificate chain, per twist E^d and quadratic field K:

  * every odd prime q | d with additive twisted reduction, full local
    2-torsion and inert in K contributes 2 to a lower bound on
    dim Sel_2(E^d/K)  (the A-set);
  * the places where the local conditions of E and E^d can differ give
    an upper bound on |dim Sel_2(E/Q) - dim Sel_2(E^d/Q)| as the sum
    of local Kummer-image dimensions of E (the drift);
  * with externally supplied ranks and a Selmer bound over Q, the
    two bounds combine into lower bounds for the 2-torsion of the
    Tate-Shafarevich group over K and for its gap against Q.

Nothing here asserts unconditional growth: external inputs stay
flagged as assumptions inside the certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .arith import factorize, is_squarefree
from .classify import INERT, classify_prime, splitting_in_quadratic
from .curve import CurveQ, QuadField, check_K_not_sqrt_disc, has_rational_two_torsion, make_curve, twist
from .errors import EvenD, HypothesisFailed, MissingExternalInput, NotSquarefree
from .local import PLACE_INF, alpha_dim, local_two_torsion_dim
from .reduction import ADDITIVE, bad_primes, tate_reduction

SCHEMA_VERSION = "1"

PRIME_CAP_NOTE = "primality is decided by a deterministic witness set valid for primes <= 2^63"
SEL_K_NOTE = (
    "sel_K_lower counts 2 dimensions per verified A-prime; the counting "
    "criterion itself is quoted from the literature and is not re-verified here"
)
EXTERNAL_SEL_NOTE = "sel2_E_over_Q_upper is an externally supplied bound, not computed here"
EXTERNAL_RANK_NOTE = (
    "rank_d_Q and rank_dD_Q are externally supplied; rank_K is their sum "
    "via the quadratic-field rank decomposition"
)
TORSION_PROOF_NOTE = (
    "dim E(K)[2] = 0 because the 2-division cubic is irreducible over Q "
    "and a cubic cannot divide a quadratic extension degree"
)


@dataclass(frozen=True)
class AMembership:
    prime: int
    odd: bool
    additive_for_twist: bool
    full_local_torsion: bool
    inert_in_K: bool

    @property
    def member(self) -> bool:
        return (
            self.odd
            and self.additive_for_twist
            and self.full_local_torsion
            and self.inert_in_K
        )


@dataclass(frozen=True)
class Certificate:
    curve: CurveQ
    K: QuadField
    d: int
    a_set: tuple[AMembership, ...]
    sel_K_lower: int
    drift_T: tuple[tuple[object, int], ...]  # (place, alpha_dim)
    drift_upper: int
    hypothesis_checklist: dict[str, bool]
    external_inputs: dict[str, int] = field(default_factory=dict)
    derived: dict[str, int] = field(default_factory=dict)
    assumptions: tuple[str, ...] = ()
    schema_version: str = SCHEMA_VERSION

    def all_hypotheses_hold(self) -> bool:
        return all(self.hypothesis_checklist.values()) and all(
            m.member or not _is_core_class(self.curve, m.prime)
            for m in self.a_set
        )


def _is_core_class(E: CurveQ, q: int) -> bool:
    return classify_prime(E, q).torsion_dim == 2


def a_set_for_twist(E: CurveQ, d: int, K: QuadField) -> list[AMembership]:
    """A-membership checks for every odd prime dividing d, computed on
    the twisted curve E^d."""
    if d % 2 == 0:
        raise EvenD("twisting integer must be odd")
    if d == 0 or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not squarefree")
    twisted = twist(E, d)
    out = []
    for q in sorted(factorize(abs(d))):
        out.append(
            AMembership(
                prime=q,
                odd=q != 2,
                additive_for_twist=tate_reduction(twisted, q).kind == ADDITIVE,
                full_local_torsion=local_two_torsion_dim(twisted, q) == 2,
                inert_in_K=splitting_in_quadratic(K, q) == INERT,
            )
        )
    return out


def selmer_K_lower_bound(a_set) -> int:
    """2 per full member; conditional on the external counting criterion."""
    return 2 * sum(1 for m in a_set if m.member)


def drift_places(E: CurveQ, d: int) -> list:
    """Places where the local conditions of E and E^d may differ.

    Membership: 2 when d is not a 2-adic square (d odd: d != 1 mod 8);
    infinity when d < 0; an odd bad prime when d is a nonsquare there;
    an odd divisor of d unless dim alpha = 0 on both sides (good
    divisors with no local 2-torsion change nothing: both images are
    the zero subspace).  Over-inclusion at bad primes keeps the bound
    valid without alpha-equality tests there.
    """
    if d == 0 or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not squarefree")
    if d % 2 == 0:
        raise EvenD("drift accounting expects odd d")
    places = []
    if d % 8 != 1:
        places.append(2)
    bad_odd = {p for p in bad_primes(E) if p != 2}
    divisors = set(factorize(abs(d)))
    from .arith import kronecker

    for p in sorted(bad_odd | divisors):
        if p in divisors:
            if p in bad_odd:
                places.append(p)  # conservative: ramified twist at a bad prime
            elif local_two_torsion_dim(E, p) != 0:
                places.append(p)
            # else: alpha_p(1) = alpha_p(d) = 0, drop
        else:
            if kronecker(d, p) == -1:
                places.append(p)
    if d < 0:
        places.append(PLACE_INF)
    return places


def drift_pairs(E: CurveQ, d: int) -> list[tuple[object, int]]:
    return [(v, alpha_dim(E, v)) for v in drift_places(E, d)]


def drift_upper_bound(E: CurveQ, d: int) -> int:
    return sum(dim for _, dim in drift_pairs(E, d))


def rank_K_decompose(rank_d_Q: int, rank_dD_Q: int) -> int:
    """rk E^d(K) = rk E^d(Q) + rk E^{dD}(Q); inputs are external."""
    if rank_d_Q < 0 or rank_dD_Q < 0:
        raise ValueError("ranks are nonnegative")
    return rank_d_Q + rank_dD_Q


def torsion2_dim_over_K(E: CurveQ, K: QuadField) -> int:
    """dim_F2 E(K)[2] when the 2-division cubic is irreducible: an
    irreducible cubic has no root in a quadratic field, so 0."""
    if has_rational_two_torsion(E):
        raise HypothesisFailed(
            "2-division cubic is reducible; supply torsion externally"
        )
    return 0


def sha_ledger(cert: Certificate) -> Certificate:
    """Fill the derived fields that the present external inputs allow.

    sha_K_lower = max(0, sel_K_lower - rank_K - dim E(K)[2]); the gap
    bound additionally subtracts the Selmer-over-Q budget
    sel2_E_over_Q_upper + drift_upper.
    """
    ext = cert.external_inputs
    if "rank_d_Q" not in ext or "rank_dD_Q" not in ext:
        raise MissingExternalInput("rank_d_Q and rank_dD_Q are required")
    rank_K = rank_K_decompose(ext["rank_d_Q"], ext["rank_dD_Q"])
    torsion = torsion2_dim_over_K(cert.curve, cert.K)
    derived = dict(cert.derived)
    derived["rank_K"] = rank_K
    derived["sha_K_lower"] = max(0, cert.sel_K_lower - rank_K - torsion)
    assumptions = list(cert.assumptions)
    if EXTERNAL_RANK_NOTE not in assumptions:
        assumptions.append(EXTERNAL_RANK_NOTE)
    if TORSION_PROOF_NOTE not in assumptions:
        assumptions.append(TORSION_PROOF_NOTE)
    if "sel2_E_over_Q_upper" in ext:
        budget = ext["sel2_E_over_Q_upper"] + cert.drift_upper
        derived["sha_gap_lower"] = derived["sha_K_lower"] - budget
        if EXTERNAL_SEL_NOTE not in assumptions:
            assumptions.append(EXTERNAL_SEL_NOTE)
    return replace(cert, derived=derived, assumptions=tuple(assumptions))


def build_certificate(E: CurveQ, K: QuadField, d: int, external_inputs=None) -> Certificate:
    """Recompute every certificate ingredient from the raw inputs."""
    a_set = tuple(a_set_for_twist(E, d, K))
    pairs = tuple(drift_pairs(E, d))
    checklist = {
        "no_rational_2_torsion": not has_rational_two_torsion(E),
        "K_ne_sqrt_disc": check_K_not_sqrt_disc(E, K),
        "d_squarefree": is_squarefree(d),
        "d_odd": d % 2 != 0,
        "d_positive": d > 0,
        "d_is_2adic_square": d % 8 == 1,
        "d_square_at_bad_primes": _square_at(E, d, {p for p in bad_primes(E) if p != 2}),
        "d_square_at_D_divisors": _square_at(E, d, {p for p in factorize(abs(K.D)) if p != 2}),
        "divisors_good_for_E": all(is_good_at(E, m.prime) for m in a_set),
        "divisors_coprime_to_D": all(K.D % m.prime != 0 for m in a_set),
    }
    cert = Certificate(
        curve=E,
        K=K,
        d=d,
        a_set=a_set,
        sel_K_lower=selmer_K_lower_bound(a_set),
        drift_T=pairs,
        drift_upper=sum(dim for _, dim in pairs),
        hypothesis_checklist=checklist,
        external_inputs=dict(external_inputs or {}),
        assumptions=(PRIME_CAP_NOTE, SEL_K_NOTE),
    )
    if "rank_d_Q" in cert.external_inputs and "rank_dD_Q" in cert.external_inputs:
        cert = sha_ledger(cert)
    return cert


def _square_at(E: CurveQ, d: int, primes) -> bool:
    from .arith import kronecker

    return all(p not in factorize(abs(d)) and kronecker(d, p) == 1 for p in primes)


# ---------------------------------------------------------------------------
# serialization: schema v1, integers as decimal strings

def _enc_place(v) -> str:
    return "inf" if v == PLACE_INF else str(v)


def certificate_to_dict(cert: Certificate) -> dict:
    return {
        "schema_version": cert.schema_version,
        "curve": {"A": str(cert.curve.A), "B": str(cert.curve.B)},
        "K": {"D": str(cert.K.D)},
        "d": str(cert.d),
        "a_set": [
            {
                "prime": str(m.prime),
                "odd": m.odd,
                "additive_for_twist": m.additive_for_twist,
                "full_local_torsion": m.full_local_torsion,
                "inert_in_K": m.inert_in_K,
                "member": m.member,
            }
            for m in cert.a_set
        ],
        "sel_K_lower": str(cert.sel_K_lower),
        "drift_T": [[_enc_place(v), str(dim)] for v, dim in cert.drift_T],
        "drift_upper": str(cert.drift_upper),
        "external_inputs": {k: str(v) for k, v in sorted(cert.external_inputs.items())},
        "derived": {k: str(v) for k, v in sorted(cert.derived.items())},
        "hypothesis_checklist": dict(sorted(cert.hypothesis_checklist.items())),
        "assumptions": list(cert.assumptions),
    }


def certificate_to_json(cert: Certificate) -> str:
    """Canonical JSON: sorted keys, no whitespace, decimal-string ints."""
    return json.dumps(certificate_to_dict(cert), sort_keys=True, separators=(",", ":"))


def certificate_from_dict(doc: dict) -> Certificate:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    E = make_curve(int(doc["curve"]["A"]), int(doc["curve"]["B"]))
    K = QuadField(D=int(doc["K"]["D"]))
    a_set = tuple(
        AMembership(
            prime=int(m["prime"]),
            odd=bool(m["odd"]),
            additive_for_twist=bool(m["additive_for_twist"]),
            full_local_torsion=bool(m["full_local_torsion"]),
            inert_in_K=bool(m["inert_in_K"]),
        )
        for m in doc["a_set"]
    )
    drift_T = tuple(
        (PLACE_INF if v == "inf" else int(v), int(dim)) for v, dim in doc["drift_T"]
    )
    return Certificate(
        curve=E,
        K=K,
        d=int(doc["d"]),
        a_set=a_set,
        sel_K_lower=int(doc["sel_K_lower"]),
        drift_T=drift_T,
        drift_upper=int(doc["drift_upper"]),
        hypothesis_checklist={k: bool(v) for k, v in doc["hypothesis_checklist"].items()},
        external_inputs={k: int(v) for k, v in doc.get("external_inputs", {}).items()},
        derived={k: int(v) for k, v in doc.get("derived", {}).items()},
        assumptions=tuple(doc.get("assumptions", ())),
        schema_version=doc["schema_version"],
    )
