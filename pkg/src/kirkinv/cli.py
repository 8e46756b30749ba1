"""Command-line entry point: ``kirkinv`` / ``python -m kirkinv``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__, catalog
from .invariants import LinkMapPresentation, PresentationError
from .report import InternalInconsistency, build_report, compare, render_comparison, render_text
from .ring import parse_sequence
from .wirtinger import CrossSection, MalformedDiagram, NonStabilizing, presentation_from_cross_section
from .words import Word, is_positive, magnus_expand, positive_normalize

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3
EXIT_ARITY = 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {path}: {exc.strerror}") from None


def _load_presentation(path: str):
    raw = _read(path)
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_INPUT, f"{path}: invalid JSON: {exc}") from None
    try:
        return LinkMapPresentation.from_json(data), raw
    except ValueError as exc:
        raise _Fail(EXIT_INPUT, f"{path}: {exc}") from None


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot write {path}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_expand(args) -> int:
    try:
        w = Word.parse(args.word, args.n, args.i)
    except ValueError as exc:
        raise _Fail(EXIT_INPUT, str(exc)) from None
    poly = magnus_expand(w)
    if args.format == "structured":
        out = {"n": args.n, "component": args.i, "word": args.word, "expansion": poly.to_structured()}
        if args.verbose:
            out["positive"] = is_positive(w)
        _write(_dumps(out), None)
    else:
        text = poly.to_text() + "\n"
        if args.verbose:
            pw, inverted = positive_normalize(w)
            text += f"positive: {'no' if inverted else 'yes'}"
            text += f" (positive representative {pw})\n" if inverted else "\n"
        _write(text, None)
    return EXIT_OK


def cmd_invariants(args) -> int:
    p, raw = _load_presentation(args.file)
    comps = args.component or None
    seq = None
    if args.sequence:
        try:
            seq = parse_sequence(args.sequence)
        except ValueError as exc:
            raise _Fail(EXIT_INPUT, str(exc)) from None
    if comps:
        bad = [c for c in comps if not 1 <= c <= p.n]
        if bad:
            raise _Fail(EXIT_INPUT, f"component {bad[0]} out of range 1..{p.n}")
    if seq is not None:
        if any(not 1 <= j <= p.n for j in seq):
            raise _Fail(EXIT_INPUT, f"sequence {args.sequence!r} uses an index outside 1..{p.n}")
        if comps and any(c in seq for c in comps):
            raise _Fail(EXIT_INPUT, f"sequence {args.sequence!r} contains the selected component")
    try:
        rep = build_report(p, comps, seq, source=args.file, source_bytes=raw)
    except InternalInconsistency as exc:
        raise _Fail(EXIT_INTERNAL, f"internal inconsistency: {exc}") from None
    except ValueError as exc:
        raise _Fail(EXIT_INPUT, str(exc)) from None
    _write(_dumps(rep) if args.format == "structured" else render_text(rep, args.verbose), None)
    return EXIT_OK


def cmd_compare(args) -> int:
    a, _ = _load_presentation(args.a)
    b, _ = _load_presentation(args.b)
    if a.n != b.n:
        raise _Fail(EXIT_ARITY, f"arity mismatch: {args.a} has n={a.n}, {args.b} has n={b.n}")
    result = compare(a, b)
    _write(_dumps(result) if args.format == "structured" else render_comparison(result), None)
    return EXIT_OK


def cmd_from_diagram(args) -> int:
    raw = _read(args.file)
    try:
        cs = CrossSection.from_json(json.loads(raw))
    except json.JSONDecodeError as exc:
        raise _Fail(EXIT_INPUT, f"{args.file}: invalid JSON: {exc}") from None
    except (MalformedDiagram, KeyError, TypeError, ValueError) as exc:
        raise _Fail(EXIT_INPUT, f"{args.file}: {exc}") from None
    try:
        p = presentation_from_cross_section(cs)
    except NonStabilizing as exc:
        raise _Fail(EXIT_INTERNAL, f"{type(exc).__name__}: {exc}") from None
    except ValueError as exc:
        raise _Fail(EXIT_INPUT, str(exc)) from None
    _write(_dumps(p.to_json()), args.output)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        if args.format == "structured":
            _write(_dumps(catalog.CATALOG), None)
        else:
            width = max(map(len, catalog.CATALOG))
            _write("".join(f"{k:<{width}}  {v}\n" for k, v in catalog.CATALOG.items()), None)
        return EXIT_OK
    if not args.name:
        raise _Fail(EXIT_INPUT, "catalog emit needs an entry name")
    try:
        if args.cross_section:
            data = catalog.cross_section(args.name, args.n).to_json()
        else:
            data = catalog.build(args.name, args.n, args.reversed).presentation.to_json()
    except KeyError as exc:
        raise _Fail(EXIT_INPUT, str(exc.args[0])) from None
    except ValueError as exc:
        raise _Fail(EXIT_INPUT, str(exc)) from None
    _write(_dumps(data), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS)
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="kirkinv", description="Higher-order Kirk invariants of link maps.", parents=[common]
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="reduced Magnus expansion of a word")
    p.add_argument("-n", type=int, required=True, help="number of components")
    p.add_argument("-i", type=int, required=True, help="excluded component")
    p.add_argument("word")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("invariants", parents=[common], help="invariant report for a presentation file")
    p.add_argument("file")
    p.add_argument("-i", "--component", type=int, action="append", help="restrict to component (repeatable)")
    p.add_argument("--sequence", help="single sequence, e.g. 12 or 1,2")
    p.add_argument("--all", action="store_true", help="every component and sequence (default)")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("compare", parents=[common], help="compare the invariants of two presentations")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("from-diagram", parents=[common], help="presentation from a cross-section diagram")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_from_diagram)

    p = sub.add_parser("catalog", parents=[common], help="built-in example link maps")
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.add_argument("--n", type=int)
    p.add_argument("--reversed", type=int, metavar="I", help="emit S^I[n] instead of S[n]")
    p.add_argument("--cross-section", action="store_true", help="emit the diagram fixture instead")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "format"):
        args.format = "text"
    if not hasattr(args, "verbose"):
        args.verbose = False
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"kirkinv: error: {exc}", file=sys.stderr)
        return exc.code
    except NonStabilizing as exc:
        print(f"kirkinv: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
