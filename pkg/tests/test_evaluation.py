from fractions import Fraction

import pytest

from etrforge.core import (
    Atom,
    Const,
    Distribution,
    EvAnd,
    EvEq,
    EvTrue,
    ExpansionCapExceeded,
    Not,
    Or,
    Prob,
    QbfInstance,
    TooLarge,
    UnboundVariable,
    UnknownVariable,
    Var,
)
from etrforge.evaluation import (
    check_small_model,
    eval_formula,
    eval_prob_formula,
    eval_prob_term,
    eval_qbf,
    eval_term,
    support_size,
)
from etrforge.fixtures import prop
from etrforge.textio import parse_expr

COSAT = parse_expr(
    "(sum x1 2 (sum x2 2 (mul (mul (add (var x1) (var x2)) (add (var x1) (add (const 1) (neg (var x2)))))"
    " (add (const 1) (neg (var x1))))))"
)


def uniform(names, c=2):
    import itertools

    keys = list(itertools.product(range(c), repeat=len(names)))
    return Distribution(tuple(names), c, {k: Fraction(1, len(keys)) for k in keys})


def test_cosat_sum_is_zero():
    assert eval_term(COSAT) == 0
    assert eval_formula(Atom("=", COSAT, Const(0)))


def test_sum_and_product_of_constants():
    assert eval_term(parse_expr("(sum e 2 (const 1))")) == 2
    assert eval_term(parse_expr("(prod e 2 (add (const 1) (var e)))")) == 2


def test_strict_comparison():
    assert not eval_formula(parse_expr("(lt (const 1) (const 0))"))


def test_unit_vector():
    f = parse_expr("(eq (sum e1 2 (sum e2 2 (mul (ivar x (var e1) (var e2)) (ivar x (var e1) (var e2))))) (const 1))")
    values = {"x[00]": Fraction(1), "x[01]": Fraction(0), "x[10]": Fraction(0), "x[11]": Fraction(0)}
    assert eval_formula(f, values)
    values["x[11]"] = Fraction(1)
    assert not eval_formula(f, values)


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        eval_term(Var("x"), {})


def test_expansion_cap():
    t = parse_expr("(sum a 2 (sum b 2 (sum c 2 (var a))))")
    assert eval_term(t, cap=100) == 4
    with pytest.raises(ExpansionCapExceeded):
        eval_term(t, cap=4)


def test_qbf_examples():
    x, y = prop("x"), prop("y")
    assert eval_qbf(QbfInstance((("A", "x"),), Or(x, Not(x))))
    assert not eval_qbf(QbfInstance((("A", "x"),), x))
    assert eval_qbf(QbfInstance((("E", "x"), ("A", "y")), Or(x, y)))


def test_qbf_too_large():
    names = [f"v{i}" for i in range(30)]
    q = QbfInstance(tuple(("E", n) for n in names), prop("v0"))
    with pytest.raises(TooLarge):
        eval_qbf(q)


def test_total_mass_is_one():
    d = Distribution(("X",), 3, {(0,): Fraction(1, 3), (2,): Fraction(2, 3)})
    assert eval_prob_formula(Atom("=", Prob(EvTrue()), Const(1)), d)


def test_inconsistent_event_has_zero_mass():
    d = uniform(["X"], 3)
    assert eval_prob_formula(Atom("=", Prob(EvAnd(EvEq("X", 1), EvEq("X", 2))), Const(0)), d)


def test_marginalization_sum():
    d = uniform(["X", "Y"])
    t = parse_expr("(sum w 2 (P (and (eq Y 1) (eq X w))))")
    assert eval_prob_term(t, d) == Fraction(1, 2)
    assert eval_prob_term(Prob(EvEq("Y", 1)), d) == Fraction(1, 2)


def test_unknown_random_variable():
    with pytest.raises(UnknownVariable):
        eval_prob_term(Prob(EvEq("Z", 0)), uniform(["X"]))


def test_small_model_check():
    d = uniform(["X", "Y"])
    assert support_size(d) == 4
    assert check_small_model(d, 4)
    assert not check_small_model(d, 3)
