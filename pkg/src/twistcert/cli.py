"""Command-line front door; a thin client of the core package.

Subcommands: classify | forge | verify | local.  All inputs are flags
(no environment variables), so certificates are reproducible from the
command line alone.  Exit codes: 0 success, 1 search or verification
failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import squarefree_part
from .curve import make_curve, QuadField
from .errors import (
    HypothesisFailed,
    NotFullTorsion,
    SearchExhausted,
    SingularCurve,
    TwistCertError,
    VerificationFailed,
)
from .reports import classify_report, forge_report, local_report, verify_document

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2


def parse_curve(text: str):
    """Accept "A,B" or JSON {"A": ..., "B": ...}."""
    text = text.strip()
    if text.startswith("{"):
        doc = json.loads(text)
        return make_curve(int(doc["A"]), int(doc["B"]))
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"curve must be 'A,B' or JSON, got {text!r}")
    return make_curve(int(parts[0]), int(parts[1]))


def parse_field(D: int) -> tuple[QuadField, str | None]:
    """Squarefree-normalize D, warning when the input was not."""
    sf = squarefree_part(D)
    if sf != D:
        return QuadField(D=sf), f"D={D} is not squarefree; using its squarefree kernel {sf}"
    return QuadField(D=D), None


def _emit(doc: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    else:
        text = _render_text(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _render_text(doc: dict) -> str:
    lines: list[str] = []

    def walk(node, indent=""):
        if isinstance(node, dict):
            for k, v in node.items():
                if isinstance(v, (dict, list)):
                    lines.append(f"{indent}{k}:")
                    walk(v, indent + "  ")
                else:
                    lines.append(f"{indent}{k}: {v}")
        elif isinstance(node, list):
            for item in node:
                if isinstance(item, (dict, list)):
                    walk(item, indent + "  ")
                    lines.append("")
                else:
                    lines.append(f"{indent}- {item}")
        else:
            lines.append(f"{indent}{node}")

    walk(doc)
    return "\n".join(line for line in lines if line is not None)


def cmd_classify(args) -> int:
    E = parse_curve(args.curve)
    K, warning = parse_field(args.D)
    report = classify_report(E, K, args.bound, threads=args.threads)
    if warning:
        report["warnings"].insert(0, warning)
    for w in report["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    _emit(report, args)
    return EXIT_OK


def cmd_forge(args) -> int:
    E = parse_curve(args.curve)
    K, warning = parse_field(args.D)
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    if (args.rank_d is None) != (args.rank_dD is None):
        print("error: --rank-d and --rank-dD must be supplied together", file=sys.stderr)
        return EXIT_INVALID
    doc = forge_report(E, K, args.r, args.bound, args.c, args.rank_d, args.rank_dD)
    _emit(doc, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot parse certificate: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        ok, detail = verify_document(doc)
    except (KeyError, ValueError, TypeError) as exc:
        print(f"error: malformed certificate: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if not ok:
        print(f"verification failed: {detail}", file=sys.stderr)
        return EXIT_FAILURE
    print("certificate verified")
    return EXIT_OK


def cmd_local(args) -> int:
    E = parse_curve(args.curve)
    doc = local_report(E, args.q, D=args.D, twist_class=args.twist_class)
    _emit(doc, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistcert",
        description="Construct quadratic twists with certified 2-Selmer bounds "
        "over a quadratic field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for prime scans (default 1)")

    p = sub.add_parser("classify", help="classify primes up to a bound")
    p.add_argument("--curve", required=True, help="'A,B' or JSON {\"A\":..,\"B\":..}")
    p.add_argument("--D", type=int, required=True, help="quadratic field discriminant part")
    p.add_argument("--bound", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("forge", help="search for a twist and emit a certificate")
    p.add_argument("--curve", required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--r", type=int, required=True, help="target dimension margin")
    p.add_argument("--bound", type=int, default=10**6)
    p.add_argument("--c", type=int, default=None,
                   help="external upper bound for dim Sel_2(E/Q)")
    p.add_argument("--rank-d", dest="rank_d", type=int, default=None)
    p.add_argument("--rank-dD", dest="rank_dD", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_forge)

    p = sub.add_parser("verify", help="re-verify a stored certificate")
    p.add_argument("path", help="certificate JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("local", help="inspect the local pairing at one prime")
    p.add_argument("--curve", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--D", type=int, default=None)
    p.add_argument("--twist-class", dest="twist_class", default=None,
                   choices=("trivial", "u", "ramified", "ramified-u"))
    common(p)
    p.set_defaults(func=cmd_local)

    return parser


def _merge_curve_flag(argv):
    """Fold '--curve -1,0' into '--curve=-1,0' so argparse does not
    mistake a negative A for an option."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--curve" and i + 1 < len(argv):
            out.append(f"--curve={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_curve_flag(list(argv)))
    try:
        return args.func(args)
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (HypothesisFailed, SingularCurve, NotFullTorsion) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (TwistCertError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
