"""Short Weierstrass models over Q, twisting, and 2-torsion tests.

Only integral models y^2 = x^3 + Ax + B are accepted; callers with a
long model must complete the square first.  Twisting by squarefree d
sends (A, B) to (d^2 A, d^3 B), and the 2-division cubic is read off
as x^3 + Ax + B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize, is_squarefree, squarefree_part
from .errors import HypothesisFailed, NotSquarefree, SingularCurve


@dataclass(frozen=True)
class CurveQ:
    """y^2 = x^3 + Ax + B with cached discriminant and c4."""

    A: int
    B: int
    disc: int
    c4: int

    def __repr__(self):
        return f"CurveQ(A={self.A}, B={self.B})"

    @property
    def j_invariant(self) -> Fraction:
        return Fraction(self.c4**3, self.disc)

    @property
    def a_invariants(self) -> tuple[int, int, int, int, int]:
        return (0, 0, 0, self.A, self.B)


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt(D)) for a squarefree integer D not in {0, 1}."""

    D: int

    def __post_init__(self):
        if self.D in (0, 1):
            raise ValueError("D must define a genuine quadratic field")
        if squarefree_part(self.D) != self.D:
            raise NotSquarefree(f"D = {self.D} is not squarefree")


def make_curve(A: int, B: int) -> CurveQ:
    """Build a CurveQ, rejecting singular models."""
    disc = -16 * (4 * A**3 + 27 * B**2)
    if disc == 0:
        raise SingularCurve(f"discriminant vanishes for A={A}, B={B}")
    return CurveQ(A=A, B=B, disc=disc, c4=-48 * A)


def twist(E: CurveQ, d: int) -> CurveQ:
    """Quadratic twist E^d = (d^2 A, d^3 B); d must be squarefree."""
    if d == 0 or not is_squarefree(d):
        raise NotSquarefree(f"twisting integer {d} is not squarefree")
    return make_curve(d * d * E.A, d**3 * E.B)


def two_division_cubic(E: CurveQ) -> tuple[int, int, int]:
    """Coefficients (c2, c1, c0) of the 2-division cubic x^3 + Ax + B."""
    return (0, E.A, E.B)


def has_rational_two_torsion(E: CurveQ) -> bool:
    """Whether x^3 + Ax + B has an integer root.

    A rational root of a monic integral cubic is an integer dividing B,
    so only divisors of B need testing (x = 0 handles B = 0).
    """
    if E.B == 0:
        return True  # x = 0
    divisors = [1]
    for p, e in factorize(E.B).items():
        divisors = [d * p**k for d in divisors for k in range(e + 1)]
    for d in divisors:
        for x in (d, -d):
            if x**3 + E.A * x + E.B == 0:
                return True
    return False


def check_K_not_sqrt_disc(E: CurveQ, K: QuadField) -> bool:
    """True iff K differs from Q(sqrt(disc E)).

    When true, Q(E[2]) and K intersect in Q, the hypothesis the
    inert-prime search needs.
    """
    return squarefree_part(E.disc) != K.D


def require_no_two_torsion(E: CurveQ) -> None:
    if has_rational_two_torsion(E):
        raise HypothesisFailed("curve has a nontrivial rational 2-torsion point")


def require_K_ok(E: CurveQ, K: QuadField) -> None:
    if not check_K_not_sqrt_disc(E, K):
        raise HypothesisFailed("K equals Q(sqrt(disc)); inert 2-torsion primes cannot exist")
