"""Batch command line: parse, evaluate, reduce, expand, decide, check witnesses, run the corpus.

Exit codes: 0 success or true, 1 false, 2 usage/parse/dialect error, 3 capability error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import (
    DialectViolation,
    EMajSatInstance,
    EtrError,
    EtrInstance,
    FORMULA_TYPES,
    ProbInstance,
    QbfInstance,
    TERM_TYPES,
)
from .decide import brute_force_decide, check_witness
from .eso import EsoInstance
from .evaluation import DEFAULT_CAP, eval_emajsat, eval_formula, eval_qbf, eval_term
from .reductions import PASSES, run_pass
from .reductions.eso_passes import Succ18Instance, eval_succ18
from .succinct import SuccCircuit, compile_sigma_pi, expand_succ, remove_negations
from .textio import KINDS, ParseError, fmt, parse, render

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3
USAGE_CODES = {"DIALECT_VIOLATION", "SYNTAX_ERROR", "KIND_MISMATCH", "ILL_FORMED", "MALFORMED_OPCODE",
               "UNBOUND_VARIABLE", "UNKNOWN_VARIABLE", "NON_PROPOSITIONAL_ATOM", "WIDTH_MISMATCH",
               "NOT_NORMALIZED", "UNSUPPORTED_ATOM", "VALUE_OUT_OF_DOMAIN", "NON_INTEGER_CONSTANT",
               "MISSING_TABLE"}


class UsageError(Exception):
    pass


def _read(path: str, kind: str | None = None):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse(kind, text)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects k=v, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _verdict(value: bool) -> int:
    print("true" if value else "false")
    return EXIT_OK if value else EXIT_FALSE


# ---------------------------------------------------------------------------


def cmd_parse(args) -> int:
    obj = _read(args.input, args.kind)
    _emit(render(obj), args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.qbf:
        q = _read(args.qbf, "qbf")
        return _verdict(eval_qbf(q))
    if not args.input:
        raise UsageError("eval needs --in or --qbf")
    obj = _read(args.input)
    if args.witness:
        return _verdict(check_witness(obj, _read(args.witness, "witness"), args.cap))
    if isinstance(obj, QbfInstance):
        return _verdict(eval_qbf(obj))
    if isinstance(obj, EMajSatInstance):
        return _verdict(eval_emajsat(obj))
    if isinstance(obj, EtrInstance):
        if obj.free_variables():
            raise UsageError("instance has free variables; pass --witness or use decide")
        return _verdict(eval_formula(obj.formula, {}, args.cap))
    if isinstance(obj, (ProbInstance, EsoInstance, Succ18Instance)):
        raise UsageError("this instance needs a --witness to evaluate")
    if isinstance(obj, TERM_TYPES):
        print(fmt(eval_term(obj, {}, args.cap)))
        return EXIT_OK
    if isinstance(obj, FORMULA_TYPES):
        return _verdict(eval_formula(obj, {}, args.cap))
    raise UsageError(f"cannot evaluate a {type(obj).__name__}")


def cmd_reduce(args) -> int:
    names = [n.strip() for n in args.pass_name.split(",") if n.strip()]
    for n in names:
        if n not in PASSES:
            raise UsageError(f"unknown pass {n!r}; known: {', '.join(sorted(PASSES))}")
    inst = _read(args.input)
    witness = _read(args.witness, "witness") if args.witness else None
    params = _params(args.param)
    for n in names:
        result = run_pass(n, inst, params)
        if witness is not None:
            witness = result.transport(witness)
            if witness is None:
                print(f"pass {n}: witness cannot be transported", file=sys.stderr)
        inst = result.target
    _emit(render(inst), args.out)
    if args.witness:
        if witness is None:
            return EXIT_FALSE
        _emit(render(witness), args.witness_out)
    return EXIT_OK


def _succ(path):
    s = _read(path, "succ")
    if not isinstance(s, SuccCircuit):
        raise UsageError("expected a succinct circuit")
    return s


def cmd_succ_expand(args) -> int:
    _emit(render(expand_succ(_succ(args.input), args.cap)), args.out)
    return EXIT_OK


def cmd_succ_denneg(args) -> int:
    _emit(render(remove_negations(_succ(args.input), args.cap)), args.out)
    return EXIT_OK


def cmd_succ_compile(args) -> int:
    inst = _read(args.input)
    if not isinstance(inst, EtrInstance):
        raise UsageError("succ-compile needs an ETR-family instance")
    _emit(render(compile_sigma_pi(inst)), args.out)
    return EXIT_OK


def cmd_decide(args) -> int:
    inst = _read(args.input)
    if isinstance(inst, QbfInstance):
        return _verdict(eval_qbf(inst))
    if not isinstance(inst, EtrInstance):
        raise UsageError("decide needs an ETR-family instance")
    return _verdict(brute_force_decide(inst, args.cap))


def cmd_check_witness(args) -> int:
    inst = _read(args.input)
    w = _read(args.witness, "witness")
    if isinstance(inst, Succ18Instance):
        if w.kind != "assignment":
            raise UsageError("succ18 instances take assignment witnesses")
        return _verdict(eval_succ18(inst, w.payload))
    return _verdict(check_witness(inst, w, args.cap))


def cmd_corpus(args) -> int:
    if args.suite == "acceptance":
        from .acceptance import run_all

        results = run_all(args.seed)
        for r in results:
            print(r.line())
        passed = sum(r.passed for r in results)
        print(f"{passed}/{len(results)} criteria passed")
        return EXIT_OK if passed == len(results) else EXIT_FALSE
    if not args.dir:
        raise UsageError("--suite files needs --dir")
    failures = 0
    files = sorted(p for p in Path(args.dir).iterdir() if p.is_file())
    for p in files:
        try:
            text = p.read_text(encoding="utf-8")
            again = render(parse(None, text))
            ok = render(parse(None, again)) == again
            print(f"[{'PASS' if ok else 'FAIL'}] {p.name}")
        except EtrError as exc:
            ok = False
            print(f"[FAIL] {p.name}: {exc}")
        failures += not ok
    print(f"{len(files) - failures}/{len(files)} files round-trip")
    return EXIT_OK if failures == 0 else EXIT_FALSE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="etrforge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="expansion cap (default 2^20)")
        return sp

    sp = add("parse", cmd_parse, "parse, validate and print canonically")
    sp.add_argument("--kind", choices=KINDS)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out")

    sp = add("eval", cmd_eval, "evaluate a closed instance or check a witness")
    sp.add_argument("--in", dest="input")
    sp.add_argument("--qbf")
    sp.add_argument("--witness")

    sp = add("reduce", cmd_reduce, "apply a pass or a comma-separated pipeline")
    sp.add_argument("--pass", dest="pass_name", required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--witness")
    sp.add_argument("--param", action="append", help="pass parameter k=v (repeatable)")
    sp.add_argument("--out")
    sp.add_argument("--witness-out")

    for name, fn, text in [
        ("succ-expand", cmd_succ_expand, "expand a node circuit to an explicit instance"),
        ("succ-denneg", cmd_succ_denneg, "remove negations and ≤ from a node circuit"),
        ("succ-compile", cmd_succ_compile, "compile a ΣΠ instance to a node circuit"),
    ]:
        sp = add(name, fn, text)
        sp.add_argument("--in", dest="input", required=True)
        sp.add_argument("--out")

    sp = add("decide", cmd_decide, "brute-force decision over finite candidate sets")
    sp.add_argument("--in", dest="input", required=True)

    sp = add("check-witness", cmd_check_witness, "check a witness against an instance")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--witness", required=True)

    sp = add("corpus", cmd_corpus, "run the acceptance suite or round-trip a directory of files")
    sp.add_argument("--suite", choices=["acceptance", "files"], default="acceptance")
    sp.add_argument("--dir")
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DialectViolation) as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EtrError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_USAGE if exc.code in USAGE_CODES else EXIT_CAPABILITY


if __name__ == "__main__":
    sys.exit(main())
