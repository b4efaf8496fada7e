"""Command line: ``treecocycles <command> [options]``.

Exit status is 0 on success, 1 when a check fails and 2 on usage or input errors.
Vertices are given as ``zero:<s>`` / ``inf:<s>`` (the apartment vertex l(s)) or
as a JSON object; matrices as ``"a,b;c,d"`` or a JSON 2x2 array of strings.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from .algebra import INF, Place, valuation
from .cellcomplex import chain_from_json, chain_to_json, act_chain
from .cocycle import pairing_matrix, phi
from .config import Config
from .group import Matrix2, matrix_from_json
from .parse import parse_rational
from .render import render_ball, render_chain
from .tree import act, distance, line_vertex, vertex_from_json, vertex_to_json
from .verify import TAGS, run_all, run_check


class UsageError(ValueError):
    pass


def parse_vertex(text: str, field):
    text = text.strip()
    if text.startswith("{"):
        return vertex_from_json(json.loads(text), field)
    place, sep, s = text.partition(":")
    if not sep:
        raise UsageError(f"cannot read vertex {text!r}; use zero:<s>, inf:<s> or JSON")
    try:
        return line_vertex(Place.parse(place), int(s))
    except ValueError as exc:
        raise UsageError(f"cannot read vertex {text!r}: {exc}") from None


def parse_matrix(text: str, field) -> Matrix2:
    text = text.strip()
    if text.startswith("["):
        return matrix_from_json(json.loads(text), field)
    rows = [r.split(",") for r in text.split(";")]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise UsageError(f"matrix {text!r} is not of the form 'a,b;c,d'")
    (a, b), (c, d) = rows
    return Matrix2.of(*(parse_rational(x, field) for x in (a, b, c, d)), field=field)


def read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--field", default=d("q"), help="q or fp:<p>")
    parser.add_argument("--ring", default=d(None), choices=["z", "fp"], help="coefficient ring J (default follows --field)")
    parser.add_argument("--threshold", type=int, default=d(1), help="horoball threshold on beta_rho")
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("--samples", type=int, default=d(20))
    parser.add_argument("--word-radius", type=int, default=d(2))
    parser.add_argument("--format", default=d(None), choices=["json", "text", "dot"])
    parser.add_argument("--out", default=d(None), help="write output to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treecocycles", description="Cocycles on the product of two Bruhat-Tits trees.")
    _common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("val", parents=[common], help="valuation of a rational function")
    p.add_argument("expr")
    p.add_argument("--place", default="zero", choices=["zero", "inf"])

    p = sub.add_parser("dist", parents=[common], help="tree distance between two vertices")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("act", parents=[common], help="act by a matrix on a vertex or chain")
    p.add_argument("matrix")
    p.add_argument("target", nargs="?", help="vertex; omit when using --chain")
    p.add_argument("--chain", help="chain JSON file ('-' for stdin)")

    p = sub.add_parser("phi", parents=[common], help="evaluate phi_n on a chain")
    p.add_argument("n", type=int)
    p.add_argument("chain", help="chain JSON file ('-' for stdin)")

    p = sub.add_parser("pairing", parents=[common], help="pairing matrix of Phi_{m+2i} against B_{m+2j}")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--k", type=int, default=3)

    p = sub.add_parser("verify", parents=[common], help="lemma certificates")
    p.add_argument("tag", help=f"one of {', '.join(TAGS)} or all")

    p = sub.add_parser("render", parents=[common], help="DOT rendering")
    p.add_argument("what", choices=["ball", "chain"])
    p.add_argument("source", nargs="?", help="chain JSON file for 'render chain'")
    p.add_argument("--place", default="zero", choices=["zero", "inf"])
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--center", help="center vertex (default: the base vertex)")
    return parser


def make_config(args) -> Config:
    ring = args.ring
    if ring is None:
        ring = "z" if args.field.strip().lower() in ("q", "qq", "rationals") else "fp"
    return Config(
        field_name=args.field,
        ring_name=ring,
        threshold=args.threshold,
        word_radius=args.word_radius,
        samples=args.samples,
        seed=args.seed,
        format=args.format or "json",
    )


def _val_text(v) -> str:
    return "+inf" if v == INF else str(v)


def run(args) -> tuple[object, str, int]:
    """(json payload, text rendering, exit status) for a parsed command line."""
    config = make_config(args)
    field = config.field
    cmd = args.command
    if cmd == "val":
        v = valuation(parse_rational(args.expr, field), Place.parse(args.place))
        return {"expr": args.expr, "place": args.place, "valuation": _val_text(v) if v == INF else v}, _val_text(v), 0
    if cmd == "dist":
        d = distance(parse_vertex(args.a, field), parse_vertex(args.b, field))
        return {"distance": d}, str(d), 0
    if cmd == "act":
        g = parse_matrix(args.matrix, field)
        if g.det().is_zero():
            raise ValueError("singular matrix")
        if args.chain:
            out = act_chain(g, chain_from_json(read_json(args.chain), field))
            return chain_to_json(out), "\n".join(f"{c} * {cell}" for cell, c in out), 0
        if not args.target:
            raise UsageError("act needs a vertex or --chain")
        v = act(g, parse_vertex(args.target, field))
        return vertex_to_json(v, field), str(v), 0
    if cmd == "phi":
        if args.n < 1:
            raise UsageError("n must be >= 1")
        value = phi(args.n, chain_from_json(read_json(args.chain), field))
        return {"n": args.n, "phi": field.format(value)}, field.format(value), 0
    if cmd == "pairing":
        if args.k < 1 or args.m < 0 or args.m % 2:
            raise UsageError("need k >= 1 and an even m >= 0")
        indices = [args.m + 2 * i for i in range(1, args.k + 1)]
        report = pairing_matrix(indices, config.ring, config.horoball)
        text = "\n".join(" ".join(field.format(x) for x in row) for row in report.matrix)
        text += f"\ntriangular: {report.triangular}  rank: {report.rank}"
        return report.to_json(), text, 0 if report.triangular else 1
    if cmd == "verify":
        if args.tag != "all" and args.tag not in TAGS:
            raise UsageError(f"unknown lemma tag {args.tag!r}; choose from {', '.join(TAGS)} or all")
        certs = run_all(config) if args.tag == "all" else [run_check(args.tag, config)]
        ok = all(c.passed for c in certs)
        payload = {"certificates": [c.to_json() for c in certs], "verdict": "PASS" if ok else "FAIL"}
        text = "\n".join(f"{c.lemma:<13} {c.verdict}  [{', '.join(c.labels)}] {c.notes}".rstrip() for c in certs)
        return payload, text, 0 if ok else 1
    if cmd == "render":
        if args.what == "ball":
            if not field.is_finite:
                raise UsageError("rendering a ball requires a finite field (--field fp:<p>)")
            center = parse_vertex(args.center, field) if args.center else line_vertex(Place.parse(args.place), 0)
            dot = render_ball(center, args.radius, field)
        else:
            if not args.source:
                raise UsageError("render chain needs a chain JSON file")
            dot = render_chain(chain_from_json(read_json(args.source), field))
        return {"dot": dot}, dot, 0
    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            payload, text, status = run(args)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for msg in dict.fromkeys(str(w.message) for w in caught):
        print(f"warning: {msg}", file=sys.stderr)
    fmt = args.format or ("dot" if args.command == "render" else "json")
    if fmt == "json":
        out = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
