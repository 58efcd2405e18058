"""Exact number-theoretic primitives.

Everything here is deterministic: primality is decided by a fixed
Miller-Rabin witness set valid far beyond 2^63, factorization uses
Brent's rho with a fixed parameter schedule, and all root searches
scan candidates in a fixed order.  No randomness, so the certificate
layer can replay every computation bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .errors import FactorizationOverflow, MultipleRoot, NonCoprimeModuli

# Primes are capped so the deterministic witness set below stays valid;
# factorization accepts inputs up to the product cap.
PRIME_BOUND = 2**63
FACTOR_INPUT_BOUND = 2**127

# Deterministic for all n < 3.3 * 10^24, comfortably past PRIME_BOUND.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SCAN_LIMIT = 10**4  # below this, root finding mod q is a direct scan


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 0 <= n <= 2^63."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(q: int) -> int:
    """Validate q as a supported prime and return it."""
    if q > PRIME_BOUND:
        raise FactorizationOverflow(f"prime {q} exceeds the 2^63 cap")
    if q < 2 or not is_prime(q):
        raise ValueError(f"{q} is not prime")
    return q


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for any n != 0.

    Multiplicative in both arguments; extends the Jacobi symbol by
    (a/2) = 0, +1, -1 for a even, a = +-1 mod 8, a = +-3 mod 8 and
    (a/-1) = sign(a).
    """
    if n == 0:
        raise ValueError("kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def least_nonresidue(q: int) -> int:
    """Smallest positive quadratic nonresidue mod an odd prime q."""
    u = 2
    while kronecker(u, q) != -1:
        u += 1
    return u


def sqrt_mod(a: int, q: int) -> int | None:
    """A square root of a mod an odd prime q, or None.

    Tonelli-Shanks with the deterministic nonresidue from
    least_nonresidue; of the two roots the smaller one is returned.
    """
    a %= q
    if a == 0:
        return 0
    if kronecker(a, q) != 1:
        return None
    if q % 4 == 3:
        r = pow(a, (q + 1) // 4, q)
        return min(r, q - r)
    # write q - 1 = 2^s * t with t odd
    t, s = q - 1, 0
    while t % 2 == 0:
        t //= 2
        s += 1
    z = pow(least_nonresidue(q), t, q)
    m, c, u, r = s, z, pow(a, t, q), pow(a, (t + 1) // 2, q)
    while u != 1:
        # find least i with u^(2^i) = 1
        i, v = 0, u
        while v != 1:
            v = v * v % q
            i += 1
        b = pow(c, 1 << (m - i - 1), q)
        m, c = i, b * b % q
        u, r = u * c % q, r * b % q
    return min(r, q - r)


# ---------------------------------------------------------------------------
# polynomial arithmetic mod q (dense, low-degree; coefficients low-to-high)

def _poly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mulmod(f, g, mod_poly, q):
    """f*g reduced mod (mod_poly, q); mod_poly monic."""
    prod = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                prod[i + j] = (prod[i + j] + fi * gj) % q
    return _poly_divmod_monic(prod, mod_poly, q)


def _poly_divmod_monic(f, m, q):
    """Remainder of f modulo the monic polynomial m, coefficients mod q."""
    f = list(f)
    dm = len(m) - 1
    while len(f) - 1 >= dm:
        c = f[-1] % q
        if c:
            shift = len(f) - 1 - dm
            for i, mi in enumerate(m):
                f[shift + i] = (f[shift + i] - c * mi) % q
        f.pop()
    return _poly_trim(f)


def _poly_powmod_x(e, mod_poly, q):
    """x^e mod (mod_poly, q) by square and multiply."""
    result = [1]
    base = _poly_divmod_monic([0, 1], mod_poly, q)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod_poly, q)
        base = _poly_mulmod(base, base, mod_poly, q)
        e >>= 1
    return result


def _poly_gcd(f, g, q):
    """Monic gcd in F_q[x]."""
    f = _poly_trim([c % q for c in f])
    g = _poly_trim([c % q for c in g])
    while g:
        inv = pow(g[-1], -1, q)
        gm = [c * inv % q for c in g]
        f, g = gm, _poly_divmod_monic(f, gm, q)
    if f:
        inv = pow(f[-1], -1, q)
        f = [c * inv % q for c in f]
    return f


def _eval_mod(coeffs, x, q):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def _roots_of_split_poly(g, q):
    """Roots of a monic g mod q that is known to split into distinct
    linear factors (a divisor of x^q - x).  Degree <= 3."""
    deg = len(g) - 1
    if deg == 0:
        return set()
    if deg == 1:
        return {(-g[0]) % q}
    if deg == 2:
        b, c = g[1], g[0]
        disc = (b * b - 4 * c) % q
        s = sqrt_mod(disc, q)
        inv2 = pow(2, -1, q)
        return {(-b + s) * inv2 % q, (-b - s) * inv2 % q}
    # degree 3, three distinct rational roots: split off one factor by
    # gcd with (x+delta)^((q-1)/2) - 1 for delta = 0, 1, 2, ...
    for delta in range(q):
        base = _poly_divmod_monic([delta, 1], g, q)
        h = [1]
        e = (q - 1) // 2
        b = base
        while e:
            if e & 1:
                h = _poly_mulmod(h, b, g, q)
            b = _poly_mulmod(b, b, g, q)
            e >>= 1
        h = list(h)
        if h:
            h[0] = (h[0] - 1) % q
        d = _poly_gcd(g, h, q)
        if 0 < len(d) - 1 < 3:
            rest = _quotient_monic(g, d, q)
            return _roots_of_split_poly(d, q) | _roots_of_split_poly(rest, q)
    raise AssertionError("no separating shift found for split cubic")


def _quotient_monic(f, d, q):
    """Exact quotient f/d of monic polynomials mod q."""
    f = [c % q for c in f]
    out = [0] * (len(f) - len(d) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = f[len(d) - 1 + i] % q
        out[i] = c
        if c:
            for j, dj in enumerate(d):
                f[i + j] = (f[i + j] - c * dj) % q
    return out


def cubic_roots_mod(c2: int, c1: int, c0: int, q: int) -> set[int]:
    """Roots of x^3 + c2 x^2 + c1 x + c0 in F_q, q an odd prime.

    Direct scan below 10^4; above that, the distinct-root factor is
    extracted as gcd(f, x^q - x) and root-solved, which the scan path
    cross-validates in tests.
    """
    if q == 2 or not is_prime(q):
        raise ValueError("cubic_roots_mod needs an odd prime modulus")
    coeffs = (c0 % q, c1 % q, c2 % q, 1)
    if q < _SCAN_LIMIT:
        return {x for x in range(q) if _eval_mod(coeffs, x, q) == 0}
    f = list(coeffs)
    xq = _poly_powmod_x(q, f, q)
    # x^q - x mod f
    h = list(xq)
    while len(h) < 2:
        h.append(0)
    h[1] = (h[1] - 1) % q
    g = _poly_gcd(f, h, q)
    roots = _roots_of_split_poly(g, q)
    assert all(_eval_mod(coeffs, r, q) == 0 for r in roots)
    return roots


@dataclass(frozen=True)
class PadicRoot:
    """A Hensel-lifted simple root: f(residue) = 0 mod prime^precision."""

    prime: int
    residue: int
    precision: int

    @property
    def modulus(self) -> int:
        return self.prime**self.precision


def _poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_lift_root(coeffs, q: int, r0: int, k: int) -> PadicRoot:
    """Lift a simple root r0 of f mod q to a root mod q^k.

    coeffs lists f low-to-high (constant term first).  Raises
    MultipleRoot when f'(r0) = 0 mod q, the signal for a ramified or
    bad-reduction root that the caller must treat separately.
    """
    if k < 1:
        raise ValueError("precision must be positive")
    if _poly_eval(coeffs, r0) % q != 0:
        raise ValueError(f"{r0} is not a root mod {q}")
    deriv = _poly_deriv(coeffs)
    if _poly_eval(deriv, r0) % q == 0:
        raise MultipleRoot(f"derivative vanishes at {r0} mod {q}")
    # Newton iteration with doubling precision
    prec = 1
    r = r0 % q
    while prec < k:
        prec = min(2 * prec, k)
        mod = q**prec
        fr = _poly_eval(coeffs, r) % mod
        fpr = _poly_eval(deriv, r) % mod
        r = (r - fr * pow(fpr, -1, mod)) % mod
    return PadicRoot(prime=q, residue=r % q**k, precision=k)


# ---------------------------------------------------------------------------
# factorization

def _brent_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (deterministic schedule)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise AssertionError(f"rho failed on {n}")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}.

    Raises FactorizationOverflow when |n| exceeds the supported input
    range or a prime factor exceeds the 2^63 prime cap.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    if n > FACTOR_INPUT_BOUND:
        raise FactorizationOverflow(f"|n| exceeds 2^127: {n}")
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d * d <= n and d < _SCAN_LIMIT:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            if m > PRIME_BOUND:
                raise FactorizationOverflow(f"prime factor {m} exceeds 2^63")
            factors[m] = factors.get(m, 0) + 1
            continue
        r = isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        f = _brent_rho(m)
        stack.extend((f, m // f))
    return factors


def squarefree_part(n: int) -> int:
    """sign(n) times the product of primes dividing n to an odd power."""
    if n == 0:
        raise ValueError("squarefree part undefined for 0")
    sign = -1 if n < 0 else 1
    part = sign
    for p, e in factorize(n).items():
        if e % 2:
            part *= p
    return part


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).values())


def crt_solve(congruences) -> tuple[int, int]:
    """Combine (residue, modulus) pairs; moduli must be pairwise coprime."""
    r, m = 0, 1
    for ri, mi in congruences:
        if mi < 1:
            raise ValueError("moduli must be positive")
        if gcd(m, mi) != 1:
            raise NonCoprimeModuli(f"moduli {m} and {mi} share a factor")
        # x = r (mod m), x = ri (mod mi)
        t = (ri - r) * pow(m, -1, mi) % mi
        r += m * t
        m *= mi
        r %= m
    return r, m


# ---------------------------------------------------------------------------
# p-adic root counting for low-degree integral polynomials

def _fp_roots_any(coeffs, p):
    """Roots in F_p of an integral polynomial of degree <= 3 (after
    reduction the degree may drop).  Returns a set."""
    red = [c % p for c in coeffs]
    while red and red[-1] == 0:
        red.pop()
    if not red:
        raise ValueError("zero polynomial")
    deg = len(red) - 1
    if p < _SCAN_LIMIT or deg <= 0:
        return {x for x in range(p) if _eval_mod(red, x, p) == 0}
    if deg == 1:
        return {(-red[0]) * pow(red[1], -1, p) % p}
    if deg == 2:
        b, c = red[1] * pow(red[2], -1, p) % p, red[0] * pow(red[2], -1, p) % p
        disc = (b * b - 4 * c) % p
        s = sqrt_mod(disc, p)
        if s is None:
            return set()
        inv2 = pow(2, -1, p)
        return {(-b + s) * inv2 % p, (-b - s) * inv2 % p}
    inv = pow(red[3], -1, p)
    return cubic_roots_mod(red[2] * inv, red[1] * inv, red[0] * inv, p)


def count_zp_roots(coeffs, p: int, _depth: int = 64) -> int:
    """Number of distinct roots in Z_p of a squarefree integral polynomial.

    Recursive Hensel descent: simple roots mod p each carry exactly one
    Z_p root; a multiple residue r is explored through f(r + p x)/p^m.
    Squarefree input guarantees termination well inside _depth.
    """
    if _depth == 0:
        raise AssertionError("p-adic root recursion exceeded its bound")
    coeffs = list(coeffs)
    v = min((_val(c, p) for c in coeffs if c), default=None)
    if v is None:
        raise ValueError("zero polynomial")
    if v:
        coeffs = [c // p**v for c in coeffs]
    deriv = _poly_deriv(coeffs)
    count = 0
    for r in sorted(_fp_roots_any(coeffs, p)):
        if _eval_mod(deriv, r, p) != 0:
            count += 1
        else:
            shifted = _poly_shift_scale(coeffs, r, p)
            count += count_zp_roots(shifted, p, _depth - 1)
    return count


def _val(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _poly_shift_scale(coeffs, r, p):
    """Coefficients of f(r + p*x)."""
    # binomial expansion; degrees here are tiny so the direct loop is fine
    out = [0] * len(coeffs)
    for i, c in enumerate(coeffs):
        if not c:
            continue
        # c * (r + p x)^i
        term = [c]
        for _ in range(i):
            nxt = [0] * (len(term) + 1)
            for j, t in enumerate(term):
                nxt[j] += t * r
                nxt[j + 1] += t * p
            term = nxt
        for j, t in enumerate(term):
            out[j] += t
    return out


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound via a byte sieve."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    return [i for i in range(2, bound + 1) if sieve[i]]
