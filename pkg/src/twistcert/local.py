"""Explicit local Galois cohomology at odd primes with full 2-torsion.

When E has good reduction at an odd prime q and all three 2-torsion
x-coordinates live in Q_q, the Galois action on E[2] is trivial and

    H^1(Q_q, E[2]) = (Q_q^* / squares) (x) E[2]

is four-dimensional over F_2 with basis u(x)P1, u(x)P2, q(x)P1, q(x)P2,
u the least positive nonresidue mod q.  The Tate pairing is the
product of the tame Hilbert symbol with the Weil pairing, and Kummer
images of twists are computed from explicit local points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import count_zp_roots, cubic_roots_mod, kronecker, least_nonresidue
from .curve import CurveQ, QuadField, make_curve, two_division_cubic
from .errors import NotFullTorsion, NotInert, SamplingExhausted
from .classify import INERT, splitting_in_quadratic
from .reduction import is_good_at

PLACE_INF = "inf"

_ROOTS_TO_DIM = {0: 0, 1: 1, 3: 2}


@dataclass(frozen=True)
class SquareClass:
    """An element of Q_q^* / (Q_q^*)^2 for odd q: u^unit_bit * q^uni_bit."""

    prime: int
    unit_bit: int
    uni_bit: int

    def __post_init__(self):
        if self.unit_bit not in (0, 1) or self.uni_bit not in (0, 1):
            raise ValueError("square class bits must be 0 or 1")

    @property
    def is_ramified(self) -> bool:
        return self.uni_bit == 1

    def __add__(self, other: "SquareClass") -> "SquareClass":
        if other.prime != self.prime:
            raise ValueError("square classes live over different primes")
        return SquareClass(
            self.prime,
            self.unit_bit ^ other.unit_bit,
            self.uni_bit ^ other.uni_bit,
        )


def square_class_of(n: int, q: int) -> SquareClass:
    """Class of a nonzero integer in Q_q^*/(Q_q^*)^2, q odd."""
    if n == 0:
        raise ValueError("0 has no square class")
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return SquareClass(q, 1 if kronecker(n, q) == -1 else 0, v & 1)


def class_representative(d: SquareClass) -> int:
    """The canonical integer representative 1, u, q or u*q."""
    u = least_nonresidue(d.prime)
    rep = 1
    if d.unit_bit:
        rep *= u
    if d.uni_bit:
        rep *= d.prime
    return rep


def hilbert_symbol_odd(a: SquareClass, b: SquareClass) -> int:
    """Additive Hilbert symbol on Q_q^*/(Q_q^*)^2, q odd.

    Tame formula: (u,u) = 0, (u,q) = 1 (u is a nonresidue), and
    (q,q) = 1 exactly when q = 3 mod 4; extended bilinearly.
    Value 0 means z^2 = a x^2 + b y^2 has a nontrivial Q_q-point.
    """
    if a.prime != b.prime:
        raise ValueError("mixed primes in Hilbert symbol")
    q = a.prime
    i, j = a.unit_bit, a.uni_bit
    k, l = b.unit_bit, b.uni_bit
    return (i * l + k * j + j * l * (1 if q % 4 == 3 else 0)) % 2


# ---------------------------------------------------------------------------
# F2 linear algebra on 4-bit masks; basis order uP1, uP2, qP1, qP2

def _reduce_basis(vectors) -> tuple[int, ...]:
    """Row-reduce bitmask vectors; returns a canonical echelon basis."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    # back-substitute for a unique reduced form
    for i in range(len(basis)):
        for j in range(len(basis)):
            if i != j:
                reduced = basis[i] ^ basis[j]
                if reduced < basis[i]:
                    basis[i] = reduced
    return tuple(sorted(basis, reverse=True))


def _mask_bits(mask: int):
    return [i for i in range(4) if mask >> i & 1]


@dataclass(frozen=True)
class LocalH1:
    """H^1(Q_q, E[2]) with its Tate pairing, q odd good with full torsion."""

    prime: int
    curve: CurveQ
    roots: tuple[int, int, int]  # 2-division cubic roots mod q, ascending
    nonresidue: int
    gram: tuple[tuple[int, int, int, int], ...]

    def pair(self, v: int, w: int) -> int:
        """Tate pairing of two bitmask vectors."""
        total = 0
        for i in _mask_bits(v):
            for j in _mask_bits(w):
                total ^= self.gram[i][j]
        return total

    def gram_rank(self) -> int:
        rows = [sum(bit << j for j, bit in enumerate(row)) for row in self.gram]
        return len(_reduce_basis(rows))


@dataclass(frozen=True)
class H1Subspace:
    parent: LocalH1
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: int) -> bool:
        for b in self.basis:
            v = min(v, v ^ b)
        return v == 0

    def is_isotropic(self) -> bool:
        return all(
            self.parent.pair(v, w) == 0 for v in self.basis for w in self.basis
        )

    def intersection_dim(self, other: "H1Subspace") -> int:
        joint = _reduce_basis(list(self.basis) + list(other.basis))
        return self.dim + other.dim - len(joint)


# the W subspace carries no extra data beyond its parent and basis
WSubspace = H1Subspace


def build_local_h1(E: CurveQ, q: int) -> LocalH1:
    """Assemble the 4-dimensional pairing space at a full-torsion prime.

    gram[a(x)P, b(x)Q] = hilbert(a, b) * weil(P, Q) with the unique
    nondegenerate alternating Weil form on E[2].
    """
    roots = _full_torsion_roots(E, q)
    u = least_nonresidue(q)
    u_cls = SquareClass(q, 1, 0)
    q_cls = SquareClass(q, 0, 1)
    classes = (u_cls, u_cls, q_cls, q_cls)
    points = (0, 1, 0, 1)
    gram = tuple(
        tuple(
            hilbert_symbol_odd(classes[i], classes[j])
            * (1 if points[i] != points[j] else 0)
            for j in range(4)
        )
        for i in range(4)
    )
    return LocalH1(prime=q, curve=E, roots=roots, nonresidue=u, gram=gram)


def _full_torsion_roots(E: CurveQ, q: int) -> tuple[int, int, int]:
    if q == 2:
        raise NotFullTorsion("local H^1 model requires an odd prime")
    if not is_good_at(E, q):
        raise NotFullTorsion(f"{q} is a bad prime for the curve")
    roots = sorted(cubic_roots_mod(0, E.A, E.B, q))
    if len(roots) != 3:
        raise NotFullTorsion(f"2-division cubic has {len(roots)} roots mod {q}")
    return tuple(roots)


def w_subspace(h1: LocalH1, K: QuadField) -> H1Subspace:
    """Classes killed by the inert (unramified) quadratic completion:
    the span of u(x)P1 and u(x)P2."""
    if splitting_in_quadratic(K, h1.prime) != INERT:
        raise NotInert(f"{h1.prime} is not inert in Q(sqrt({K.D}))")
    return H1Subspace(parent=h1, basis=_reduce_basis([0b0001, 0b0010]))


def _tensor_vector(cls: SquareClass, point: int) -> int:
    """Bitmask of cls (x) P_point, point in {0, 1}."""
    mask = 0
    if cls.unit_bit:
        mask |= 1 << point
    if cls.uni_bit:
        mask |= 1 << (2 + point)
    return mask


def _kummer_vector(cls1: SquareClass, cls2: SquareClass) -> int:
    """Cocycle of a point with Kummer coordinates (cls1, cls2) =
    (x - e1, x - e2) classes: cls1 (x) P2 + cls2 (x) P1."""
    return _tensor_vector(cls1, 1) ^ _tensor_vector(cls2, 0)


def kummer_image(E: CurveQ, q: int, d: SquareClass, h1: LocalH1 | None = None) -> H1Subspace:
    """The image of E^d(Q_q)/2 in H^1(Q_q, E[2]) as a 2-dim subspace.

    Generators come from the three 2-torsion points of the twist; when
    those do not span (possible only for unramified d), Kummer classes
    of sampled local points fill in the rest, scanning x residues in
    ascending order for determinism.
    """
    if h1 is None:
        h1 = build_local_h1(E, q)
    elif h1.prime != q or h1.curve != E:
        raise ValueError("pairing space does not match the curve/prime")
    if d.prime != q:
        raise ValueError("square class lives over a different prime")
    e1, e2, e3 = h1.roots
    d_unit = class_representative(SquareClass(q, d.unit_bit, 0))

    def cls(n: int) -> SquareClass:
        return square_class_of(n, q)

    dc = SquareClass(q, d.unit_bit, d.uni_bit)
    # torsion point images; differences e_i - e_j are q-units by good
    # reduction, so residues mod q carry their full square class
    vectors = [
        _kummer_vector(dc + dc + cls((e1 - e2) * (e1 - e3)), dc + cls(e1 - e2)),
        _kummer_vector(dc + cls(e2 - e1), dc + dc + cls((e2 - e1) * (e2 - e3))),
        _kummer_vector(dc + cls(e3 - e1), dc + cls(e3 - e2)),
    ]
    basis = _reduce_basis(vectors)
    if len(basis) == 2:
        return H1Subspace(parent=h1, basis=basis)

    if not d.is_ramified:
        # good-reduction twist: sample affine points of the reduced twist
        A2, B3 = d_unit * d_unit * E.A, d_unit**3 * E.B
        te = [d_unit * e % q for e in (e1, e2, e3)]
        for x0 in range(q):
            if x0 in te:
                continue
            val = (x0**3 + A2 * x0 + B3) % q
            if kronecker(val, q) != 1:
                continue
            v = _kummer_vector(cls(x0 - te[0]), cls(x0 - te[1]))
            basis = _reduce_basis(list(basis) + [v])
            if len(basis) == 2:
                return H1Subspace(parent=h1, basis=basis)
    else:
        # ramified twist: torsion always spans (the P1/P2 components mix
        # unit and uniformizer classes); sampling here would scan
        # x = 0..q-1 and x = q * residues, but reaching this branch
        # means the lifting machinery is broken
        pass
    raise SamplingExhausted(
        f"Kummer image at {q} stuck at dimension {len(basis)}; this is a bug"
    )


def local_two_torsion_dim(E: CurveQ, q: int) -> int:
    """dim_F2 E(Q_q)[2] at an odd prime, any reduction type.

    Counts Z_q-roots of the 2-division cubic by recursive Hensel
    descent, which silently covers twisted curves at q | d (their
    cubic has the scaled roots d * e_i).
    """
    c2, c1, c0 = two_division_cubic(E)
    count = count_zp_roots((c0, c1, c2, 1), q)
    return _ROOTS_TO_DIM[count]


def alpha_dim(E: CurveQ, v) -> int:
    """dim_F2 of the local Kummer image alpha_v(1) at a place v.

    Odd v: equals dim E(Q_v)[2].  v = 2: dim E(Q_2)[2] + 1 (the
    [Q_2:Q_2] correction).  v = "inf": 1 when disc > 0 else 0.
    """
    if v == PLACE_INF:
        return 1 if E.disc > 0 else 0
    if v == 2:
        c2, c1, c0 = two_division_cubic(E)
        return _ROOTS_TO_DIM[count_zp_roots((c0, c1, c2, 1), 2)] + 1
    return local_two_torsion_dim(E, v)


def alpha_trivial(E: CurveQ, q: int, h1: LocalH1 | None = None) -> H1Subspace:
    """alpha_q(1), the local condition of E itself."""
    return kummer_image(E, q, SquareClass(q, 0, 0), h1=h1)
