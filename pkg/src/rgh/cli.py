"""Command line: ``rgh enumerate | homology | verify | graph``.

Exit codes: 0 success, 1 usage or validation error, 2 budget exceeded,
3 internal invariant violated (d o d != 0).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .complex import ModeError, boundary_matrices, check_d_squared, matrix_json, resolve_mode
from .enumeration import (
    BudgetExceeded,
    InvalidSignature,
    Limits,
    Signature,
    counts_by_dimension,
    default_threads,
    enumerate_cells,
    write_catalog,
)
from .graph import GraphValidationError, RibbonGraph, validate
from .homology import homology

EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(kind):
    def conv(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return value
    return conv


def _add_signature(p: argparse.ArgumentParser) -> None:
    for name in ("g", "h", "r", "s"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--tails", choices=("cyclic", "free"), default="cyclic",
                   help="cyclic: tail labels increase along each boundary (default); free: all arrangements")
    p.add_argument("--max-cells", type=_positive(int), default=None)
    p.add_argument("--max-seconds", type=_positive(float), default=None)
    p.add_argument("--threads", type=_positive(int), default=None,
                   help="worker processes (default: $RGH_THREADS, else all cores)")
    p.add_argument("--catalog", type=Path, help="write the JSON-lines catalog here")
    p.add_argument("--pretty", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rgh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("enumerate", help="enumerate the cells of a signature")
    _add_signature(p)

    p = sub.add_parser("homology", help="homology of the cellular chain complex")
    _add_signature(p)
    p.add_argument("--mode", choices=("auto", "integer", "rational"), default="auto")
    p.add_argument("--verify-d2", action="store_true", help="check d o d = 0 and fail with exit 3 otherwise")
    p.add_argument("--matrices", type=Path, help="directory for boundary matrix exports")
    p.add_argument("--out", type=Path, help="also write the JSON report here")

    p = sub.add_parser("verify", help="run the standard consistency suite")
    p.add_argument("--suite", choices=("standard",), default="standard")
    p.add_argument("--threads", type=_positive(int), default=None)

    p = sub.add_parser("graph", help="inspect a JSON graph file")
    p.add_argument("action", choices=("validate", "canonical", "dot"))
    p.add_argument("file", type=Path)
    p.add_argument("--pretty", action="store_true")
    return parser


def _summary(counts: dict[int, int]) -> str:
    return "dims " + " ".join(f"{d}:{c}" for d, c in counts.items())


def _dump(obj, pretty: bool) -> str:
    return json.dumps(obj, sort_keys=True, indent=2 if pretty else None)


def _threads(args) -> int:
    return args.threads if args.threads is not None else default_threads()


def _enumerate(args):
    sig = Signature(args.g, args.h, args.r, args.s)
    limits = Limits(args.max_cells, args.max_seconds)
    basis = enumerate_cells(sig, limits, tails=args.tails, threads=_threads(args))
    if args.catalog:
        write_catalog(basis, args.catalog)
    return basis


def cmd_enumerate(args) -> int:
    basis = _enumerate(args)
    counts = counts_by_dimension(basis)
    if args.pretty:
        print(f"signature {basis.signature}: {len(basis)} classes ({args.tails} tails)")
        print(_summary(counts))
    else:
        print(_dump({"signature": list(basis.signature.astuple()), "tails": args.tails,
                     "cells": {str(d): c for d, c in counts.items()}, "total": len(basis),
                     "summary": _summary(counts)}, False))
    return 0


def cmd_homology(args) -> int:
    if args.mode == "integer" and args.r == 0:
        raise ModeError("MODE_ERROR: integer coefficients need r > 0")
    basis = _enumerate(args)
    mode = resolve_mode(basis, args.mode)
    mats = boundary_matrices(basis, mode, threads=_threads(args))
    if args.verify_d2:
        bad = check_d_squared(mats)
        if bad:
            print(f"d o d != 0 in degrees {sorted(bad)}", file=sys.stderr)
            return EXIT_INVARIANT
    if args.matrices:
        args.matrices.mkdir(parents=True, exist_ok=True)
        for d, m in mats.items():
            (args.matrices / f"d{d}.coo").write_text(m.to_coo(), encoding="utf-8")
            (args.matrices / f"d{d}.json").write_text(matrix_json(basis, m, mode) + "\n", encoding="utf-8")
    result = homology(basis, mats, mode)
    text = result.dumps(pretty=args.pretty)
    print(text)
    if args.out:
        args.out.write_text(result.dumps() + "\n", encoding="utf-8")
    return 0


def cmd_verify(args) -> int:
    from .verify import run_standard_suite

    lines, ok = run_standard_suite(threads=_threads(args))
    for line in lines:
        print(line)
    return 0 if ok else EXIT_INVARIANT


def to_dot(graph: RibbonGraph) -> str:
    lines = ["graph ribbon {", "  node [shape=circle, style=filled];"]
    for v, cyc in enumerate(graph.vertices):
        m = graph.mark_label[v]
        if m:
            lines.append(f'  v{v} [label="{m}", fillcolor="black", fontcolor="white"];')
        else:
            lines.append(f'  v{v} [label="", fillcolor="white", width=0.2];')
    for j, x in enumerate(graph.tails):
        lines.append(f'  t{j + 1} [shape=plaintext, style="", label="{j + 1}"];')
        lines.append(f'  v{graph.vertex_of[x]} -- t{j + 1} [dir=forward, taillabel="{x}"];')
    for x, y in enumerate(graph.alpha):
        if x < y:
            lines.append(f'  v{graph.vertex_of[x]} -- v{graph.vertex_of[y]} [taillabel="{x}", headlabel="{y}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_graph(args) -> int:
    try:
        data = json.loads(args.file.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read graph: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        graph = validate(data)
    except GraphValidationError as exc:
        print("invalid: " + ", ".join(exc.violations))
        return EXIT_USAGE
    if args.action == "validate":
        sig = "(%d,%d,%d,%d)" % graph.signature
        print(f"valid, signature {sig}, dim {graph.cell_dimension()}")
    elif args.action == "canonical":
        cc = graph.canonical_code()
        print(_dump({"code": list(cc.code), "aut": cc.aut_order,
                     "graph": graph.canonical_form().to_json()}, args.pretty))
    else:
        sys.stdout.write(to_dot(graph))
    return 0


COMMANDS = {"enumerate": cmd_enumerate, "homology": cmd_homology,
            "verify": cmd_verify, "graph": cmd_graph}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InvalidSignature, ModeError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"BUDGET_EXCEEDED: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
