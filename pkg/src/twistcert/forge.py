"""Constructive twist search: pick inert full-torsion primes, pad with
torsion-free primes until d is a local square at 2, the bad primes and
the divisors of D, and re-verify everything from scratch.

Core primes each buy 2 dimensions of Sel_2 over K and cost 2 in the
drift budget; pad primes cost nothing (their local images vanish) and
exist to empty the non-core places out of the drift set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import ceil, prod

from .arith import crt_solve, factorize, is_squarefree, kronecker, primes_up_to
from .classify import classify_prime, find_usable_primes
from .curve import (
    CurveQ,
    QuadField,
    check_K_not_sqrt_disc,
    has_rational_two_torsion,
    require_K_ok,
    require_no_two_torsion,
)
from .errors import SearchExhausted, VerificationFailed
from .ledger import Certificate, build_certificate
from .local import PLACE_INF, alpha_dim
from .reduction import bad_primes, is_good_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TwistPlan:
    curve: CurveQ
    K: QuadField
    target_r: int
    core_primes: tuple[int, ...]
    pad_primes: tuple[int, ...]
    d: int
    congruence_targets: tuple[tuple[int, int], ...]  # (residue, modulus)
    assumptions: dict

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted(self.core_primes + self.pad_primes))


def default_congruence_targets(E: CurveQ, K: QuadField) -> tuple[tuple[int, int], ...]:
    """d = 1 mod 8 plus d = 1 mod p at odd bad primes and odd divisors
    of D.  Residue 1 is the simplest square, so meeting these targets
    makes d a local square at every non-core place that could enter
    the drift set."""
    moduli = {8}
    moduli.update(p for p in bad_primes(E) if p != 2)
    moduli.update(p for p in factorize(abs(K.D)) if p != 2)
    return tuple((1, m) for m in sorted(moduli))


def plan_twist(E: CurveQ, K: QuadField, r: int, c: int | None, bound: int) -> TwistPlan:
    """Choose s core primes so that 2s exceeds r plus the external
    budget c and the worst-case non-core drift, then pad."""
    require_no_two_torsion(E)
    require_K_ok(E, K)
    extras = alpha_dim(E, 2) + alpha_dim(E, PLACE_INF)
    extras += sum(alpha_dim(E, p) for p in bad_primes(E) if p != 2)
    c_eff = c if c is not None else 0
    s = max(1, ceil((r + 1 + c_eff + extras) / 2))
    core = tuple(find_usable_primes(E, K, s, bound))
    plan = TwistPlan(
        curve=E,
        K=K,
        target_r=r,
        core_primes=core,
        pad_primes=(),
        d=prod(core),
        congruence_targets=default_congruence_targets(E, K),
        assumptions={} if c is None else {"sel2_upper_c": c},
    )
    return pad_for_congruences(plan, bound)


def pad_for_congruences(plan: TwistPlan, bound: int) -> TwistPlan:
    """Append torsion-free good primes until d meets every congruence
    target; a single pad in the CRT-determined class always suffices."""
    unmet = [(r, m) for r, m in plan.congruence_targets if plan.d % m != r % m]
    if not unmet:
        return plan
    needed = []
    for r, m in plan.congruence_targets:
        from math import gcd

        if gcd(plan.d, m) != 1:
            raise SearchExhausted(
                f"target modulus {m} shares a factor with d; pads cannot fix it"
            )
        needed.append((r * pow(plan.d, -1, m) % m, m))
    rho, M = crt_solve(needed)
    E, K = plan.curve, plan.K
    for p in primes_up_to(bound):
        if p % M != rho:
            continue
        if p == 2 or plan.d % p == 0 or K.D % p == 0 or E.disc % p == 0:
            continue
        if not is_good_at(E, p):
            continue
        if classify_prime(E, p).torsion_dim != 0:
            continue
        new_d = plan.d * p
        assert all(new_d % m == r % m for r, m in plan.congruence_targets)
        return TwistPlan(
            curve=E,
            K=K,
            target_r=plan.target_r,
            core_primes=plan.core_primes,
            pad_primes=plan.pad_primes + (p,),
            d=new_d,
            congruence_targets=plan.congruence_targets,
            assumptions=plan.assumptions,
        )
    raise SearchExhausted(
        f"no torsion-free pad prime = {rho} mod {M} below {bound}"
    )


def verify_plan(plan: TwistPlan, external_inputs=None) -> Certificate:
    """Recompute every claim of the plan from scratch and emit the
    certificate.  Raises VerificationFailed naming the first failing
    check; plan metadata is cross-checked, never trusted."""
    E, K, d = plan.curve, plan.K, plan.d
    if d == 0 or not is_squarefree(d):
        raise VerificationFailed("d_squarefree", d)
    if d % 2 == 0:
        raise VerificationFailed("d_odd", d)
    if has_rational_two_torsion(E):
        raise VerificationFailed("no_rational_2_torsion")
    if not check_K_not_sqrt_disc(E, K):
        raise VerificationFailed("K_ne_sqrt_disc")

    core, pads = [], []
    for q in sorted(factorize(abs(d))):
        if q == 2 or not is_good_at(E, q):
            raise VerificationFailed("divisor_good_for_E", q)
        if K.D % q == 0:
            raise VerificationFailed("divisor_coprime_to_D", q)
        dim = classify_prime(E, q).torsion_dim
        if dim == 2:
            core.append(q)
        elif dim == 0:
            pads.append(q)
        else:
            raise VerificationFailed("divisor_class", q)
    if tuple(core) != tuple(sorted(plan.core_primes)):
        raise VerificationFailed("core_primes_mismatch", core)
    if tuple(pads) != tuple(sorted(plan.pad_primes)):
        raise VerificationFailed("pad_primes_mismatch", pads)

    for r, m in plan.congruence_targets:
        if d % m != r % m:
            raise VerificationFailed("congruence_target", (r, m))

    ext = dict(external_inputs or {})
    if "sel2_upper_c" in plan.assumptions:
        ext.setdefault("sel2_E_over_Q_upper", plan.assumptions["sel2_upper_c"])
    cert = build_certificate(E, K, d, ext)

    # every core prime must be a full A-member
    members = {m.prime: m for m in cert.a_set}
    for q in core:
        m = members[q]
        for check in ("odd", "additive_for_twist", "full_local_torsion", "inert_in_K"):
            if not getattr(m, check):
                raise VerificationFailed(check, q)
    if cert.sel_K_lower != 2 * len(core):
        raise VerificationFailed("sel_K_lower", cert.sel_K_lower)
    if not all(cert.hypothesis_checklist.values()):
        failing = sorted(k for k, v in cert.hypothesis_checklist.items() if not v)
        raise VerificationFailed(failing[0])
    return cert


def forge(E: CurveQ, K: QuadField, r: int, bound: int, c: int | None = None,
          rank_d_Q: int | None = None, rank_dD_Q: int | None = None) -> Certificate:
    """plan + pad + verify in one call; the library face of the CLI."""
    plan = plan_twist(E, K, r, c, bound)
    ext = {}
    if rank_d_Q is not None and rank_dD_Q is not None:
        ext = {"rank_d_Q": rank_d_Q, "rank_dD_Q": rank_dD_Q}
    return verify_plan(plan, external_inputs=ext)
