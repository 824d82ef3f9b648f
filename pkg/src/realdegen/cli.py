"""Command line: validate, analyze, patchwork, snf, examples.

Exit codes: 0 ok, 1 violation (validation failure or an internal invariant
broken by the input), 2 unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog
from .complexes import ComplexError
from .degeneration import DegenerationError, StratifiedDegeneration
from .linalg import IntegerMatrix, smith_normal_form
from .main_complexes import check_sdd, verdict
from .patchwork import (PatchworkInput, build_viro_graph,
                        to_sdd, validate_input, viro_svg)


class ParseError(Exception):
    pass


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _read(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise ParseError(str(exc))
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}")


def load(path: str):
    """Parse a file into a ``StratifiedDegeneration`` or ``PatchworkInput``."""
    obj = _read(path)
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")
    try:
        if "polygon" in obj:
            return PatchworkInput.from_json(obj)
        if "strata" in obj:
            return StratifiedDegeneration.from_json(obj)
    except DegenerationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed input: {exc!r}")
    raise ParseError("input is neither a degeneration (\"strata\") nor a patchwork (\"polygon\")")


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _diagnose(problems):
    sys.stderr.write(dumps({"ok": False, "problems": problems}))


def cmd_validate(args) -> int:
    try:
        obj = load(args.path)
    except DegenerationError as exc:
        _diagnose([{"kind": type(exc).__name__, "message": str(exc)}])
        return 1
    if isinstance(obj, PatchworkInput):
        try:
            flags = validate_input(obj)
        except DegenerationError as exc:
            _diagnose([{"kind": type(exc).__name__, "message": str(exc)}])
            return 1
        _emit(dumps({"ok": True, "kind": "patchwork", "flags": flags}), args.out)
        return 0
    problems = check_sdd(obj, force=True)
    if problems:
        _diagnose(problems)
        return 1
    _emit(dumps({"ok": True, "kind": "sdd", "warnings": obj.structure_warnings()}), args.out)
    return 0


def _render(report, args, extra=None) -> int:
    if args.format == "md":
        text = report.to_markdown(args.coeff)
    else:
        data = report.to_json(args.coeff)
        if extra:
            data.update(extra)
        text = dumps(data)
    _emit(text, args.out)
    if report.violations:
        return 1
    if args.strict and not report.theorem_applicable:
        sys.stderr.write("theorem not applicable: hypotheses (a)/(b) fail\n")
        return 1
    return 0


def _analyze(sdd, args, extra=None) -> int:
    problems = check_sdd(sdd, force=True)
    if problems:
        _diagnose(problems)
        return 1
    return _render(verdict(sdd), args, extra)


def cmd_analyze(args) -> int:
    try:
        obj = load(args.path)
        if isinstance(obj, PatchworkInput):
            obj = to_sdd(obj)
    except DegenerationError as exc:
        _diagnose([{"kind": type(exc).__name__, "message": str(exc)}])
        return 1
    return _analyze(obj, args)


def cmd_patchwork(args) -> int:
    try:
        if args.catalog:
            pi = catalog.get_patchwork(args.catalog)
        elif args.path:
            pi = load(args.path)
            if not isinstance(pi, PatchworkInput):
                raise ParseError("not a patchwork file")
        else:
            raise ParseError("give a patchwork file or --catalog NAME")
        flags = validate_input(pi)
        graph = build_viro_graph(pi, check=False)
        sdd = to_sdd(pi, check=False)
    except KeyError as exc:
        raise ParseError(str(exc))
    except DegenerationError as exc:
        _diagnose([{"kind": type(exc).__name__, "message": str(exc)}])
        return 1
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(viro_svg(pi, graph))
    extra = {"patchwork": {"flags": flags, "b0": graph.n_cycles(),
                           "segments": len(graph.segments),
                           "vertices": graph.n_vertices,
                           "union_of_cycles": graph.is_union_of_cycles()}}
    return _analyze(sdd, args, extra)


def cmd_snf(args) -> int:
    obj = _read(args.path)
    try:
        m = IntegerMatrix.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed matrix: {exc}")
    sf = smith_normal_form(m, with_transforms=args.transforms)
    out = {"factors": list(sf.invariant_factors), "rank": sf.rank}
    if args.transforms:
        out["left"] = sf.left_transform.to_rows()
        out["right"] = sf.right_transform.to_rows()
    _emit(dumps(out), args.out)
    return 0


def cmd_examples(args) -> int:
    if args.action == "list":
        lines = [f"{n}\tsdd" for n in catalog.SDD_NAMES]
        lines += [f"{n}\tpatchwork" for n in catalog.PATCHWORK_NAMES]
        _emit("\n".join(lines) + "\n", args.out)
        return 0
    if not args.name:
        raise ParseError("examples emit needs a name")
    try:
        obj = catalog.get(args.name)
    except KeyError as exc:
        raise ParseError(str(exc))
    _emit(dumps(obj.to_json()), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="realdegen", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write to this file instead of standard output")

    def report_flags(sp):
        sp.add_argument("--coeff", choices=("z", "f2", "both"), default="both")
        sp.add_argument("--format", choices=("json", "md"), default="json")
        sp.add_argument("--strict", action="store_true",
                        help="exit 1 when hypotheses (a)/(b) fail")

    sp = sub.add_parser("validate", help="check an SDD or patchwork file")
    sp.add_argument("path")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("analyze", help="full verdict report")
    sp.add_argument("path")
    report_flags(sp)
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("patchwork", help="patchwork pipeline and optional SVG")
    sp.add_argument("path", nargs="?")
    sp.add_argument("--catalog", metavar="NAME")
    sp.add_argument("--svg", metavar="FILE")
    report_flags(sp)
    common(sp)
    sp.set_defaults(func=cmd_patchwork)

    sp = sub.add_parser("snf", help="Smith normal form of a JSON matrix")
    sp.add_argument("path")
    sp.add_argument("--transforms", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_snf)

    sp = sub.add_parser("examples", help="built-in catalog")
    sp.add_argument("action", choices=("list", "emit"))
    sp.add_argument("name", nargs="?")
    common(sp)
    sp.set_defaults(func=cmd_examples)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return 2
    except (DegenerationError, ComplexError) as exc:
        _diagnose([{"kind": type(exc).__name__, "message": str(exc)}])
        return 1


if __name__ == "__main__":
    sys.exit(main())
