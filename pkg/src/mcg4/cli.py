"""Command line interface: ``mcg4 analyze|ss|check|catalog``.

Exit codes: 0 on success, 2 for bad input, 3 when a result fails its own
consistency check.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog
from .forms import FormError, InternalInconsistency, make_form
from .james import e3_report
from .linalg import DimensionError, IntMatrix, as_matrix
from .mcg import ManifoldModel, ModelError, analyze, stabilize_model
from .variations import FormVariation, compose, is_rel_boundary, is_variation, xi

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class InputError(Exception):
    pass


def _read_json(path_or_literal: str):
    """Parse a file path, or an inline JSON literal such as ``[[1]]``."""
    text = path_or_literal
    where = "argument"
    if not path_or_literal.lstrip().startswith(("[", "{")):
        path = Path(path_or_literal)
        if not path.is_file():
            raise InputError(f"{path_or_literal}: no such file")
        text = path.read_text(encoding="utf-8")
        where = str(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _load_model(target: str) -> ManifoldModel:
    if target in catalog.names():
        return catalog.get(target).load()
    if not Path(target).is_file():
        raise InputError(f"{target}: neither a catalog name nor a file (see 'catalog list')")
    data = _read_json(target)
    try:
        return ManifoldModel.from_dict(data)
    except ModelError as exc:
        raise InputError(f"{target}: {exc}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.quiet:
        return
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_analyze(args) -> int:
    model = _load_model(args.target)
    if args.stabilize:
        model = stabilize_model(model, args.stabilize)
    report = analyze(model)
    _emit(args, report.to_dict(), report.to_text())
    return EXIT_OK


def cmd_ss(args) -> int:
    if not 1 <= args.rank <= 8:
        raise InputError(f"--rank must be between 1 and 8, got {args.rank}")
    report = e3_report(args.rank, args.spin)
    _emit(args, report.to_dict(), report.to_text())
    return EXIT_OK


def _matrix_text(m: IntMatrix) -> str:
    if m == IntMatrix.identity(m.rows):
        return "I"
    return json.dumps(m.tolist())


def cmd_check(args) -> int:
    try:
        form = make_form(_read_json(args.form))
        v = as_matrix(_read_json(args.variation))
        member = is_variation(form, v)
    except (FormError, DimensionError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    payload = {"member": member}
    parts = [f"member: {str(member).lower()}"]
    if member:
        var = FormVariation(v, form)
        a = xi(var).a
        rel = is_rel_boundary(form, a)
        payload.update({"xi": a.tolist(), "rel_boundary": rel})
        parts += [f"xi: {_matrix_text(a)}", f"rel_boundary: {str(rel).lower()}"]
        if args.compose_with:
            try:
                w = FormVariation(as_matrix(_read_json(args.compose_with)), form)
            except (FormError, DimensionError, ValueError) as exc:
                raise InputError(f"--compose-with: {exc}") from None
            c = compose(var, w)
            payload["compose"] = c.v.tolist()
            parts.append(f"compose: {json.dumps(c.v.tolist())}")
    _emit(args, payload, "; ".join(parts))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        names = catalog.names()
        _emit(args, {"models": names}, "\n".join(names))
        return EXIT_OK
    if not args.name:
        raise InputError("catalog show needs a model name")
    try:
        entry = catalog.get(args.name)
    except KeyError:
        raise InputError(f"unknown catalog model {args.name!r}") from None
    if not args.quiet:
        print(json.dumps(entry.model, indent=2 if args.json else None))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="print nothing on success")

    parser = argparse.ArgumentParser(
        prog="mcg4",
        description="Mapping class group invariants of simply connected 4-manifolds with boundary.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="report for a model file or catalog name")
    p.add_argument("target", help="path to a model JSON file, or a catalog name")
    p.add_argument("--text", action="store_true", help="text report (the default)")
    p.add_argument("--stabilize", type=int, default=0, metavar="G", help="add G hyperbolic summands first")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("ss", parents=[common], help="E3 terms of the James spectral sequence")
    p.add_argument("--rank", type=int, required=True, help="number of degree-2 generators (1..8)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--spin", dest="spin", action="store_true")
    g.add_argument("--nonspin", dest="spin", action="store_false")
    p.set_defaults(func=cmd_ss)

    p = sub.add_parser("check", parents=[common], help="membership and xi for a matrix")
    p.add_argument("--form", required=True, help="Gram matrix: JSON file or inline literal")
    p.add_argument("--variation", required=True, help="candidate variation: JSON file or inline literal")
    p.add_argument("--compose-with", help="second variation to compose with")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("catalog", parents=[common], help="list or show built-in models")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.json = getattr(args, "json", False)
    args.quiet = getattr(args, "quiet", False)
    try:
        return args.func(args)
    except (InputError, ModelError, FormError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
