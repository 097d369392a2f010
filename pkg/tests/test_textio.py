from fractions import Fraction

import pytest

from etrforge.core import (
    Atom,
    Const,
    Dialect,
    DialectViolation,
    Distribution,
    EtrInstance,
    Mul,
    Sum,
    Var,
    Witness,
)
from etrforge.fixtures import FUZZERS, random_qbf
from etrforge.reductions.qbf import qbf_to_pietr
from etrforge.textio import ParseError, fmt, parse, parse_expr, read_sexpr, render

HEADER = "#etrforge v1\n"


def test_equality_atom():
    f = parse_expr("(= (sum e 2 (mul (var x) (var e))) (const 1))")
    assert f == Atom("=", Sum("e", 2, Mul(Var("x"), Var("e"))), Const(1))


def test_cosat_document():
    text = HEADER + (
        "kind: sigma-etr\nvars:\nformula: (eq (sum x1 2 (sum x2 2 (mul (mul (add (var x1) (var x2))"
        " (add (var x1) (add (const 1) (neg (var x2))))) (add (const 1) (neg (var x1)))))) (const 0))\n"
    )
    inst = parse("sigma-etr", text)
    assert isinstance(inst, EtrInstance) and inst.dialect is Dialect.SIGMA
    assert render(inst) == text


def test_indexed_variable_outside_sum_scope():
    text = HEADER + "kind: sigma-vi-etr\nformula: (eq (ivar X (var e1) (var e2)) (const 0))\n"
    with pytest.raises(DialectViolation):
        parse("sigma-vi-etr", text)


def test_dialect_checked_against_requested_kind():
    text = HEADER + "kind: sigma-pi-etr\nformula: (eq (prod e 2 (var e)) (const 0))\n"
    assert parse(None, text).dialect is Dialect.SIGMA_PI
    with pytest.raises(DialectViolation):
        parse("sigma-etr", text)


def test_syntax_error_position():
    with pytest.raises(ParseError) as info:
        read_sexpr("(add (var x)\n  (const 1)", 1, 1)
    assert info.value.code == "SYNTAX_ERROR"
    with pytest.raises(ParseError) as info:
        parse(None, HEADER + "kind: term\nexpr: (add (var x) (bogus 1))\n")
    assert info.value.line == 3
    assert info.value.col > 1


def test_header_required():
    with pytest.raises(ParseError):
        parse(None, "kind: term\nexpr: (var x)\n")


def test_kind_mismatch_is_reported():
    with pytest.raises(ParseError):
        parse("qbf", HEADER + "kind: term\nexpr: (var x)\n")


def test_distribution_canonical_order():
    d = Distribution(("X", "Y"), 2, {(1, 1): Fraction(1, 2), (0, 0): Fraction(1, 2)})
    text = render(Witness("distribution", d))
    rows = [line for line in text.splitlines() if ":" in line and line[0].isdigit()]
    assert rows == ["0 0 : 1/2", "1 1 : 1/2"]
    assert parse(None, text).payload == d


def test_fmt():
    assert fmt(Fraction(-3, 4)) == "-3/4"
    assert fmt(Fraction(2)) == "2"


def test_qbf_image_round_trip(rng):
    for _ in range(50):
        target = qbf_to_pietr(random_qbf(rng)).target
        assert parse(None, render(target)) == target


@pytest.mark.parametrize("kind", sorted(FUZZERS))
def test_fuzzed_round_trip(kind, rng):
    for _ in range(50):
        obj = FUZZERS[kind](rng)
        text = render(obj)
        again = parse(None, text)
        assert render(again) == text
