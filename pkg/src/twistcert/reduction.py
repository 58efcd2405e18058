"""Tate's algorithm at a single prime.

Runs on the general Weierstrass quintuple (a1, a2, a3, a4, a6) so the
coordinate changes the algorithm demands stay available, and loops on
the u = p rescaling when the input model is non-minimal.  Kodaira
symbol, minimal-discriminant valuation, conductor exponent and
Tamagawa number are all computed; certificates only consume the
(kind, kodaira, v_delta_min) triple.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import cubic_roots_mod, kronecker, require_prime, sqrt_mod, _val
from .curve import CurveQ

GOOD = "Good"
MULT_SPLIT = "MultiplicativeSplit"
MULT_NONSPLIT = "MultiplicativeNonsplit"
ADDITIVE = "Additive"

_INF = 10**9  # valuation of 0 for the divisibility tests below


def _valinf(n, p):
    return _INF if n == 0 else _val(n, p)

# irreducible-component counts of the special fiber, for Ogg's formula
_COMPONENTS = {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}


@dataclass(frozen=True)
class ReductionData:
    prime: int
    kind: str
    kodaira: str
    v_delta_min: int
    tamagawa: int
    conductor_exponent: int
    minimal_model: tuple[int, int, int, int, int]

    def __repr__(self):
        return (
            f"ReductionData(p={self.prime}, {self.kind}, {self.kodaira}, "
            f"v={self.v_delta_min}, c={self.tamagawa}, f={self.conductor_exponent})"
        )


def _b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def _discriminant(b2, b4, b6, b8):
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def _rst(ai, r, s, t):
    """Apply x -> x + r, y -> y + s x + t (u = 1)."""
    a1, a2, a3, a4, a6 = ai
    return (
        a1 + 2 * s,
        a2 - s * a1 + 3 * r - s * s,
        a3 + r * a1 + 2 * t,
        a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t,
        a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1,
    )


def _quad_nroots(a, b, c, p):
    """Number of roots of a x^2 + b x + c in F_p (a a p-unit)."""
    if p == 2:
        return sum(1 for x in (0, 1) if (a * x * x + b * x + c) % 2 == 0)
    disc = (b * b - 4 * a * c) % p
    if disc == 0:
        return 1
    return 2 if kronecker(disc, p) == 1 else 0


def _quad_is_separable(a, b, c, p):
    """Distinct roots over the algebraic closure mod p."""
    if p == 2:
        return b % 2 == 1
    return (b * b - 4 * a * c) % p != 0


def _quad_double_root(a, b, c, p):
    if p == 2:
        # b even, a odd: x^2 = c/a has the unique root c*a mod 2
        return c % 2
    return -b * pow(2 * a, -1, p) % p


def _cubic_roots_any_p(al, be, ga, p):
    """Roots in F_p of T^3 + al T^2 + be T + ga for any prime p."""
    if p == 2:
        return {x for x in (0, 1) if (x**3 + al * x * x + be * x + ga) % 2 == 0}
    return cubic_roots_mod(al, be, ga, p)


def _cubic_mults(al, be, ga, p):
    """List of (root, multiplicity) over F_p; repeated roots of a cubic
    are automatically rational, so this sees every multiplicity."""
    out = []
    for r in sorted(_cubic_roots_any_p(al, be, ga, p)):
        if (3 * r * r + 2 * al * r + be) % p != 0:
            out.append((r, 1))
            continue
        third = (-al - 2 * r) % p
        out.append((r, 3 if third == r else 2))
    return out


def tate_reduction(E: CurveQ, p: int) -> ReductionData:
    """Reduction data of the minimal model of E at p.

    Handles every prime including 2 and 3; non-minimal input is
    rescaled by u = p inside the loop.
    """
    require_prime(p)
    return _tate(E.a_invariants, p)


def is_good_at(E: CurveQ, p: int) -> bool:
    if p > 3 and E.disc % p != 0:
        return True  # v_p(disc) = 0: minimal and nonsingular
    return tate_reduction(E, p).kind == GOOD


def bad_primes(E: CurveQ) -> list[int]:
    """Primes of bad reduction (of the minimal model), ascending."""
    from .arith import factorize

    return sorted(p for p in factorize(E.disc) if not is_good_at(E, p))


def _tate(ai, p):  # noqa: C901  (the algorithm is one long case chain)
    original = ai
    for _ in range(64):
        a1, a2, a3, a4, a6 = ai
        b2, b4, b6, b8 = _b_invariants(*ai)
        c4 = b2 * b2 - 24 * b4
        c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
        disc = _discriminant(b2, b4, b6, b8)
        assert disc != 0
        n = _val(disc, p) if disc % p == 0 else 0
        if n == 0:
            return ReductionData(p, GOOD, "I0", 0, 1, 0, ai)

        # ---- move the singular point of the reduction to (0, 0)
        if p == 2:
            if b2 % 2 == 0:
                r = a4 % 2
                t = (r * (1 + a2 + a4) + a6) % 2
            else:
                r = a3 % 2
                t = (r + a4) % 2
        elif p == 3:
            r = (-b6) % 3 if b2 % 3 == 0 else (-b2 * b4) % 3
            t = (a1 * r + a3) % 3
        else:
            if c4 % p == 0:
                r = -b2 * pow(12, -1, p) % p
            else:
                r = -(c6 + b2 * c4) * pow(12 * c4, -1, p) % p
            t = -(a1 * r + a3) * pow(2, -1, p) % p
        ai = _rst(ai, r, 0, t)
        a1, a2, a3, a4, a6 = ai
        b2, b4, b6, b8 = _b_invariants(*ai)
        assert a3 % p == 0 and a4 % p == 0 and a6 % p == 0

        # ---- multiplicative: nodal reduction, type I_n
        if c4 % p != 0:
            # node tangents rational iff T^2 + a1 T - a2 splits
            split = _quad_nroots(1, a1, -a2, p) > 0
            if split:
                kind, c = MULT_SPLIT, n
            else:
                kind, c = MULT_NONSPLIT, 2 if n % 2 == 0 else 1
            return ReductionData(p, kind, f"I{n}", n, c, 1, ai)

        # ---- additive chain
        if _valinf(a6, p) < 2:
            return ReductionData(p, ADDITIVE, "II", n, 1, n, ai)
        if _valinf(b8, p) < 3:
            return ReductionData(p, ADDITIVE, "III", n, 2, n - 1, ai)
        if _valinf(b6, p) < 3:
            c = 3 if _quad_nroots(1, a3 // p, -(a6 // p**2), p) > 0 else 1
            return ReductionData(p, ADDITIVE, "IV", n, c, n - 2, ai)

        # normalize to p | a1, a2; p^2 | a3, a4; p^3 | a6
        if p == 2:
            s = a2 % 2
            t = 2 * ((a6 // 4) % 2)
        else:
            s = -a1 * pow(2, -1, p) % p
            t = -a3 * pow(2, -1, p * p) % (p * p)
        ai = _rst(ai, 0, s, t)
        a1, a2, a3, a4, a6 = ai
        assert a1 % p == 0 and a2 % p == 0
        assert a3 % p**2 == 0 and a4 % p**2 == 0 and a6 % p**3 == 0

        # cubic P(T) = T^3 + (a2/p) T^2 + (a4/p^2) T + (a6/p^3)
        mults = _cubic_mults(a2 // p, a4 // p**2, a6 // p**3, p)
        maxmult = max((m for _, m in mults), default=1)

        if maxmult == 1:
            c = 1 + len(mults)
            return ReductionData(p, ADDITIVE, "I0*", n, c, n - 4, ai)

        if maxmult == 2:
            r1 = next(r for r, m in mults if m == 2)
            ai = _rst(ai, p * r1, 0, 0)
            return _type_in_star(ai, p, n)

        # triple root: shift it to T = 0
        r1 = next(r for r, m in mults if m == 3)
        ai = _rst(ai, p * r1, 0, 0)
        a1, a2, a3, a4, a6 = ai
        assert a2 % p**2 == 0 and a4 % p**3 == 0 and a6 % p**4 == 0

        # quadratic Y^2 + (a3/p^2) Y - a6/p^4
        al, be = a3 // p**2, -(a6 // p**4)
        if _quad_is_separable(1, al, be, p):
            c = 3 if _quad_nroots(1, al, be, p) > 0 else 1
            return ReductionData(p, ADDITIVE, "IV*", n, c, n - 6, ai)
        y1 = _quad_double_root(1, al, be, p)
        ai = _rst(ai, 0, 0, p * p * y1)
        a1, a2, a3, a4, a6 = ai
        assert a3 % p**3 == 0 and a6 % p**5 == 0

        if _valinf(a4, p) < 4:
            return ReductionData(p, ADDITIVE, "III*", n, 2, n - 7, ai)
        if _valinf(a6, p) < 6:
            return ReductionData(p, ADDITIVE, "II*", n, 1, n - 8, ai)

        # non-minimal: rescale u = p and restart
        ai = (a1 // p, a2 // p**2, a3 // p**3, a4 // p**4, a6 // p**6)
        assert _discriminant(*_b_invariants(*ai)) * p**12 == disc
    raise AssertionError(f"Tate loop did not terminate for {original} at {p}")


def _type_in_star(ai, p, n):
    """The I_n* (n >= 1) subprocedure.

    On entry the cubic has its double root at T = 0, so
    v(a1) >= 1, v(a2) = 1, v(a3) >= 2, v(a4) >= 3, v(a6) >= 4.
    Quadratics in the y- and x-directions are tested in alternation,
    sliding one level deeper after each double root.
    """
    a1, a2, a3, a4, a6 = ai
    assert a2 % p == 0 and a2 % p**2 != 0
    assert a3 % p**2 == 0 and a4 % p**3 == 0 and a6 % p**4 == 0
    nstar, k = 1, 1
    for _ in range(n + 2):
        # y-quadratic Y^2 + (a3/p^(k+1)) Y - a6/p^(2k+2)
        al, be = a3 // p ** (k + 1), -(a6 // p ** (2 * k + 2))
        if _quad_is_separable(1, al, be, p):
            c = 2 + _quad_nroots(1, al, be, p)
            return ReductionData(
                p, ADDITIVE, f"I{nstar}*", n, c, n - 4 - nstar, (a1, a2, a3, a4, a6)
            )
        y1 = _quad_double_root(1, al, be, p)
        a1, a2, a3, a4, a6 = _rst((a1, a2, a3, a4, a6), 0, 0, p ** (k + 1) * y1)
        nstar += 1

        # x-quadratic (a2/p) X^2 + (a4/p^(k+2)) X + a6/p^(2k+3)
        aq, bq, cq = a2 // p, a4 // p ** (k + 2), a6 // p ** (2 * k + 3)
        if _quad_is_separable(aq, bq, cq, p):
            c = 2 + _quad_nroots(aq, bq, cq, p)
            return ReductionData(
                p, ADDITIVE, f"I{nstar}*", n, c, n - 4 - nstar, (a1, a2, a3, a4, a6)
            )
        x1 = _quad_double_root(aq, bq, cq, p)
        a1, a2, a3, a4, a6 = _rst((a1, a2, a3, a4, a6), p ** (k + 1) * x1, 0, 0)
        nstar += 1
        k += 1
    raise AssertionError("I_n* subprocedure exceeded the discriminant bound")


def count_points_mod_p(ai, p):
    """(nonsingular, singular) affine point counts of the reduction mod
    an odd prime p, plus-one convention left to the caller.

    Brute force; the reduction-kind oracle in the tests compares
    #E_ns(F_p) against p, p - 1, p + 1.
    """
    a1, a2, a3, a4, a6 = ai
    nonsing = sing = 0
    for x in range(p):
        # y^2 + (a1 x + a3) y - (x^3 + a2 x^2 + a4 x + a6) = 0
        b = (a1 * x + a3) % p
        c = -(x**3 + a2 * x * x + a4 * x + a6) % p
        disc = (b * b - 4 * c) % p
        chi = kronecker(disc, p)
        ys = []
        inv2 = pow(2, -1, p)
        if chi == 0:
            ys = [(-b) * inv2 % p]
        elif chi == 1:
            s = sqrt_mod(disc, p)
            ys = [(-b + s) * inv2 % p, (-b - s) * inv2 % p]
        for y in ys:
            dx = (a1 * y - (3 * x * x + 2 * a2 * x + a4)) % p
            dy = (2 * y + a1 * x + a3) % p
            if dx == 0 and dy == 0:
                sing += 1
            else:
                nonsing += 1
    return nonsing, sing
