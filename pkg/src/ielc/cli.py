"""Command-line front end.

Exit status: 0 success (typed / valid / normalised / iso holds), 1 a semantic
negative with a report (ill-typed, refuted, failed check), 2 usage, input or
resource errors.  Every report has a ``--json`` form.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from . import kripke as kr
from .coversys import io as cio
from .coversys.locale import LatticeError, build_SL, classify_operator, representation_iso
from .coversys.poset import PosetError, SizeGuardExceeded
from .coversys.system import (
    check_confluence, check_existence, check_localic, check_modal_localisation,
    check_refinement, check_strict, check_transitivity, classify_cover_system,
)
from .metalang import ml_infer, print_ml_term, print_ml_type, translate_context, translate_term, translate_type
from .parser import ParseError, parse_context, parse_formula, parse_term_spans, print_term, print_type
from .reduce import DEFAULT_FUEL, FuelExhausted, normalize
from .typecheck import TypingError, infer

OK, NEGATIVE, ERROR = 0, 1, 2


class CliError(Exception):
    """Input or resource problem; reported with exit status 2."""


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None


def _emit(args, text_lines, payload):
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


def default_fuel() -> int:
    raw = os.environ.get("IELC_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        value = int(raw)
    except ValueError:
        raise CliError(f"IELC_FUEL must be an integer, got {raw!r}") from None
    if value < 0:
        raise CliError("IELC_FUEL must be non-negative")
    return value


def _load_term(args):
    text = _read(args.file)
    try:
        term, spans = parse_term_spans(text)
    except ParseError as e:
        raise CliError(f"{args.file}:{e}") from None
    ctx = []
    if getattr(args, "context", None):
        try:
            ctx = parse_context(_read(args.context))
        except ParseError as e:
            raise CliError(f"{args.context}:{e}") from None
    return term, spans, ctx


def _typing_report(e: TypingError, spans, path):
    span = spans.get(id(e.term)) if e.term is not None else None
    where = f"{path}:{span}" if span else path
    info = {"kind": type(e).__name__, "message": str(e)}
    if span:
        info.update(line=span.line, column=span.column)
    return f"{where}: type error: {e}", info


# -- check -----------------------------------------------------------------

def cmd_check(args) -> int:
    term, spans, ctx = _load_term(args)
    try:
        ty = infer(ctx, term)
    except TypingError as e:
        line, info = _typing_report(e, spans, args.file)
        _emit(args, [line], {"command": "check", "ok": False, "error": info})
        return NEGATIVE
    _emit(args, [print_type(ty)], {"command": "check", "ok": True, "type": print_type(ty)})
    return OK


# -- norm ------------------------------------------------------------------

def cmd_norm(args) -> int:
    term, spans, ctx = _load_term(args)
    fuel = args.fuel if args.fuel is not None else default_fuel()
    if fuel < 0:
        raise CliError("--fuel must be non-negative")
    warning = None
    try:
        infer(ctx, term)
    except TypingError as e:
        warning = _typing_report(e, spans, args.file)[0]
        if not args.json:
            print(f"warning: {warning}", file=sys.stderr)
    try:
        nf, trace = normalize(term, fuel)
    except FuelExhausted as e:
        lines = [f"fuel exhausted after {e.fuel} steps"]
        if args.trace:
            lines += e.trace.lines()
        payload = {"command": "norm", "ok": False, "error": "fuel", "fuel": e.fuel,
                   "steps": e.trace.lines(), "last": print_term(e.trace.final)}
        if args.json:
            _emit(args, [], payload)
        else:
            for line in lines:
                print(line, file=sys.stderr)
        return ERROR
    lines = (trace.lines() if args.trace else []) + [print_term(nf)]
    payload = {"command": "norm", "ok": True, "normal_form": print_term(nf), "steps": len(trace)}
    if args.trace:
        payload["trace"] = trace.lines()
    if warning:
        payload["warning"] = warning
    _emit(args, lines, payload)
    return OK


# -- translate -------------------------------------------------------------

def cmd_translate(args) -> int:
    term, spans, ctx = _load_term(args)
    ml = translate_term(term)
    lines = [print_ml_term(ml)]
    payload = {"command": "translate", "ok": True, "term": print_ml_term(ml)}
    if args.check:
        try:
            ty = infer(ctx, term)
        except TypingError as e:
            line, info = _typing_report(e, spans, args.file)
            _emit(args, lines + [line], {**payload, "ok": False, "error": info})
            return NEGATIVE
        mty = ml_infer(translate_context(ctx), ml)
        agrees = mty == translate_type(ty)
        lines.append(f"type: {print_ml_type(mty)}")
        lines.append("typing preserved: " + ("yes" if agrees else "NO"))
        payload.update(type=print_ml_type(mty), source_type=print_type(ty), preserved=agrees, ok=agrees)
        _emit(args, lines, payload)
        return OK if agrees else NEGATIVE
    _emit(args, lines, payload)
    return OK


# -- kripke ----------------------------------------------------------------

def cmd_kripke(args) -> int:
    try:
        phi = parse_formula(args.formula)
    except ParseError as e:
        raise CliError(f"formula: {e}") from None
    if args.max_worlds < 1:
        raise CliError("--max-worlds must be at least 1")
    try:
        cm = kr.countermodel(phi, args.logic, args.max_worlds)
    except kr.ResourceGuardExceeded as e:
        raise CliError(str(e)) from None
    except ValueError as e:
        raise CliError(str(e)) from None
    model_doc = None
    if cm is not None:
        model_doc = {
            "worlds": cm.model.frame.size,
            "leq": sorted([a, b] for a, b in cm.model.frame.leq if a != b),
            "E": sorted([a, b] for a, b in cm.model.frame.E),
            "valuation": {p: sorted(ws) for p, ws in sorted(cm.model.valuation.items())},
            "world": cm.world,
        }
        model_text = kr.format_frame(cm.model.frame, dict(sorted(cm.model.valuation.items())))
        model_lines = model_text.rstrip("\n").split("\n") + [f"# refuted at world {cm.world}"]
    bound = f"{args.max_worlds} world" + ("s" if args.max_worlds != 1 else "")
    if args.mode == "valid":
        if cm is None:
            _emit(args, [f"valid up to {bound} ({args.logic})"],
                  {"command": "kripke", "mode": "valid", "valid": True, "max_worlds": args.max_worlds})
            return OK
        _emit(args, [f"countermodel exists ({args.logic}):"] + model_lines,
              {"command": "kripke", "mode": "valid", "valid": False, "countermodel": model_doc})
        return NEGATIVE
    if cm is None:
        _emit(args, [f"no countermodel up to {bound} ({args.logic})"],
              {"command": "kripke", "mode": "counter", "found": False, "max_worlds": args.max_worlds})
        return NEGATIVE
    _emit(args, model_lines, {"command": "kripke", "mode": "counter", "found": True, "countermodel": model_doc})
    return OK


# -- cover -----------------------------------------------------------------

def _load_structure(path):
    try:
        doc = cio.load(path)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None
    kind = cio.kind_of(doc)
    if kind == "locale":
        l, m = cio.locale_from_json(doc)
        return kind, l, m, build_SL(l, m)
    s = cio.cover_system_from_json(doc)
    return kind, None, None, s


def _verify_lines(s):
    checks = [("existence", check_existence), ("transitivity", check_transitivity),
              ("refinement", check_refinement), ("localic", check_localic), ("strict", check_strict)]
    if s.R is not None:
        checks += [("confluence", check_confluence), ("modal localisation", check_modal_localisation)]
    results = []
    for name, fn in checks:
        w = fn(s)
        results.append((name, w))
    return results


def cmd_cover(args) -> int:
    kind, l, m, s = _load_structure(args.file)
    if args.mode == "verify":
        results = _verify_lines(s)
        lines = [f"{name}: ok" if w is None else f"{name}: FAILED ({w})" for name, w in results]
        status = {name: w is None for name, w in results}
        cover_ok = status["existence"] and status["transitivity"] and status["refinement"]
        strict_localic = cover_ok and status["localic"] and status["strict"]
        lines.append("cover system: " + ("ok" if cover_ok else "FAILED"))
        lines.append("strict localic: " + ("ok" if strict_localic else "FAILED"))
        payload = {"command": "cover", "mode": "verify", "source": kind,
                   "checks": {name: (None if w is None else str(w)) for name, w in results},
                   "cover": cover_ok, "strict_localic": strict_localic}
        _emit(args, lines, payload)
        return OK if cover_ok else NEGATIVE
    if args.mode == "classify":
        c = classify_cover_system(s, variant=args.variant)
        lines = c.lines()
        payload = {"command": "cover", "mode": "classify", "source": kind, "flags": dict(c.flags),
                   "witnesses": {k: str(v) for k, v in sorted(c.witnesses.items())},
                   "variant": args.variant}
        if m is not None:
            ops = classify_operator(l, m)
            lines.append("operator: " + ", ".join(f"{k}={'true' if v else 'false'}" for k, v in ops.items()))
            payload["operator"] = ops
        _emit(args, lines, payload)
        return OK
    # represent
    if kind != "locale":
        raise CliError("represent needs a locale file (elements, leq and optional m)")
    rep = representation_iso(l, m)
    _emit(args, rep.lines(), {"command": "cover", "mode": "represent", "ok": rep.ok,
                              "table": [[str(e), [str(x) for x in xs]] for e, xs in rep.table],
                              "failures": rep.failures})
    return OK if rep.ok else NEGATIVE


# -- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ielc", description="Modal lambda calculus, Kripke and cover-system tools.")
    ap.add_argument("--version", action="version", version=f"ielc {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="infer the type of a term")
    p.add_argument("file")
    p.add_argument("--context", help="file of 'name : type' lines")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("norm", parents=[common], help="normalise a term (leftmost-outermost)")
    p.add_argument("file")
    p.add_argument("--context")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--fuel", type=int, help="step limit (default: $IELC_FUEL or 100000)")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("translate", parents=[common], help="translate into the monadic metalanguage")
    p.add_argument("file")
    p.add_argument("--context")
    p.add_argument("--check", action="store_true", help="also check that typing is preserved")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("kripke", parents=[common], help="finite Kripke validity and countermodels")
    p.add_argument("mode", choices=("valid", "counter"))
    p.add_argument("formula")
    p.add_argument("--logic", choices=kr.LOGICS, default=kr.IEL_MINUS)
    p.add_argument("--max-worlds", type=int, default=3)
    p.set_defaults(func=cmd_kripke)

    p = sub.add_parser("cover", parents=[common], help="cover systems and locale representation")
    p.add_argument("mode", choices=("verify", "classify", "represent"))
    p.add_argument("file")
    p.add_argument("--variant", action="store_true",
                   help="read R-directedness with the common cone of both successors")
    p.set_defaults(func=cmd_cover)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return ERROR if e.code not in (0, None) else OK
    try:
        return args.func(args)
    except CliError as e:
        print(f"ielc: {e}", file=sys.stderr)
        return ERROR
    except (cio.StructureError, LatticeError, PosetError, SizeGuardExceeded) as e:
        print(f"ielc: {args.file}: {e}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
