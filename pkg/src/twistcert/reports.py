"""Report builders shared by the CLI and the HTTP service.

Both front ends serialize exactly these structures, so their JSON
outputs are interchangeable and certificates stay reproducible from
either entry point.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .arith import primes_up_to
from .classify import classify_prime, splitting_in_quadratic
from .curve import CurveQ, QuadField, has_rational_two_torsion
from .errors import NotFullTorsion
from .ledger import (
    build_certificate,
    certificate_from_dict,
    certificate_to_dict,
    certificate_to_json,
)
from .local import (
    H1Subspace,
    SquareClass,
    alpha_trivial,
    build_local_h1,
    kummer_image,
    w_subspace,
)
from .reduction import is_good_at

_BASIS_LABELS = ("u*P1", "u*P2", "q*P1", "q*P2")

TWIST_CLASSES = {
    "trivial": (0, 0),
    "u": (1, 0),
    "ramified": (0, 1),
    "ramified-u": (1, 1),
}


def classify_report(E: CurveQ, K: QuadField, bound: int, threads: int = 1) -> dict:
    """Rows for every prime <= bound plus observed densities."""
    primes = primes_up_to(bound)

    def row(q: int) -> dict:
        good = is_good_at(E, q)
        dim = None
        if good and q != 2:
            dim = classify_prime(E, q).torsion_dim
        return {
            "prime": str(q),
            "good_for_E": good,
            "torsion_dim": None if dim is None else str(dim),
            "splitting_in_K": splitting_in_quadratic(K, q),
        }

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, primes))
    else:
        rows = [row(q) for q in primes]

    good_odd = [r for r in rows if r["good_for_E"] and r["prime"] != "2"]
    counts = {str(i): 0 for i in range(3)}
    inert = 0
    for r in good_odd:
        counts[r["torsion_dim"]] += 1
        if r["splitting_in_K"] == "Inert":
            inert += 1
    n = len(good_odd)
    densities = {
        "good_odd_primes": str(n),
        "torsion_dim_fractions": {k: (v / n if n else 0.0) for k, v in counts.items()},
        "inert_fraction": inert / n if n else 0.0,
    }
    warnings = []
    if has_rational_two_torsion(E):
        warnings.append("no_rational_2_torsion=false: curve has rational 2-torsion")
    return {
        "curve": {"A": str(E.A), "B": str(E.B)},
        "D": str(K.D),
        "bound": str(bound),
        "rows": rows,
        "densities": densities,
        "warnings": warnings,
    }


def _subspace_dict(sub: H1Subspace) -> dict:
    return {
        "dim": str(sub.dim),
        "basis": [_mask_label(v) for v in sub.basis],
        "basis_masks": [str(v) for v in sub.basis],
        "isotropic": sub.is_isotropic(),
    }


def _mask_label(mask: int) -> str:
    parts = [_BASIS_LABELS[i] for i in range(4) if mask >> i & 1]
    return " + ".join(parts) if parts else "0"


def local_report(E: CurveQ, q: int, D: int | None = None, twist_class: str | None = None) -> dict:
    """Gram matrix and Kummer subspaces at a full-torsion prime."""
    h1 = build_local_h1(E, q)  # raises NotFullTorsion when inapplicable
    out = {
        "curve": {"A": str(E.A), "B": str(E.B)},
        "q": str(q),
        "roots_mod_q": [str(r) for r in h1.roots],
        "nonresidue_u": str(h1.nonresidue),
        "basis": list(_BASIS_LABELS),
        "gram": [[str(x) for x in row] for row in h1.gram],
        "gram_rank": str(h1.gram_rank()),
    }
    a1 = alpha_trivial(E, q, h1)
    out["alpha_1"] = _subspace_dict(a1)
    if D is not None:
        W = w_subspace(h1, QuadField(D=D))
        out["w_subspace"] = _subspace_dict(W)
        out["w_equals_alpha_1"] = W.basis == a1.basis
    if twist_class is not None:
        bits = TWIST_CLASSES.get(twist_class)
        if bits is None:
            raise ValueError(f"unknown twist class {twist_class!r}; "
                             f"choose from {sorted(TWIST_CLASSES)}")
        ad = kummer_image(E, q, SquareClass(q, bits[0], bits[1]), h1=h1)
        out["twist_class"] = twist_class
        out["alpha_twist"] = _subspace_dict(ad)
        out["intersection_dim_with_alpha_1"] = str(ad.intersection_dim(a1))
    return out


def verify_document(doc: dict) -> tuple[bool, str | None]:
    """Recompute a stored certificate and compare.

    Returns (ok, detail).  Parse problems raise ValueError/KeyError and
    are the caller's exit-code-2 path; a clean recomputation mismatch
    or a failing hypothesis returns ok = False.
    """
    cert = certificate_from_dict(doc)
    recomputed = build_certificate(cert.curve, cert.K, cert.d, cert.external_inputs)
    stored = certificate_to_dict(cert)
    fresh = certificate_to_dict(recomputed)
    if stored != fresh:
        for key in sorted(set(stored) | set(fresh)):
            if stored.get(key) != fresh.get(key):
                return False, f"field {key!r} does not match recomputation"
        return False, "certificate does not match recomputation"
    if not recomputed.all_hypotheses_hold():
        failing = sorted(
            k for k, v in recomputed.hypothesis_checklist.items() if not v
        )
        return False, f"hypothesis failed: {failing[0] if failing else 'a_set member'}"
    return True, None


def forge_report(E: CurveQ, K: QuadField, r: int, bound: int, c: int | None,
                 rank_d_Q: int | None, rank_dD_Q: int | None) -> dict:
    from .forge import forge

    cert = forge(E, K, r, bound, c=c, rank_d_Q=rank_d_Q, rank_dD_Q=rank_dD_Q)
    return certificate_to_dict(cert)


__all__ = [
    "classify_report",
    "local_report",
    "verify_document",
    "forge_report",
    "certificate_to_json",
    "TWIST_CLASSES",
]
