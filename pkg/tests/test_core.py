from fractions import Fraction

import pytest

from etrforge.core import (
    Add,
    Const,
    Dialect,
    DialectViolation,
    Distribution,
    EtrInstance,
    IVar,
    Mul,
    Neg,
    NonIntegerConstant,
    Prod,
    Sum,
    Var,
    Witness,
    check_dialect,
    free_vars,
    integer_chain,
    lower_constants_term,
    substitute,
    validate_dialect,
)
from etrforge.evaluation import eval_term
from etrforge.fixtures import rational
from etrforge.textio import parse_expr


def test_const_is_exact_and_normalized():
    c = Const(Fraction(6, 4))
    assert c.value == Fraction(3, 2)
    assert Const(2).value == Fraction(2)


def test_rational_round_trip(rng):
    for _ in range(200):
        a, b = rational(rng), rational(rng)
        assert (a + b) - b == a
        assert Fraction(a.numerator, a.denominator) == a


def test_substitute_direct():
    assert substitute(Add(Var("x"), Var("e")), "e", 1) == Add(Var("x"), Const(1))


def test_substitute_unused_binder_is_identity():
    assert substitute(Var("x"), "e", 0) == Var("x")


def test_substitute_inside_index():
    assert substitute(IVar("x", (Var("e"),)), "e", 1) == IVar("x", (Const(1),))


def test_substitutions_commute():
    t = parse_expr("(add (mul (var a) (var b)) (ivar x (var a) (var b)))")
    one = substitute(substitute(t, "a", 1), "b", 0)
    two = substitute(substitute(t, "b", 0), "a", 1)
    assert one == two


def test_free_vars_skips_bound():
    assert free_vars(Sum("e", 2, Add(Var("x"), Var("e")))) == {"x"}
    assert free_vars(Const(1)) == frozenset()


def test_free_vars_resolves_indices():
    t = Sum("e1", 2, Sum("e2", 2, IVar("x", (Var("e1"), Var("e2")))))
    assert free_vars(t) == {"x[00]", "x[01]", "x[10]", "x[11]"}


def test_prod_rejected_in_sigma_dialect():
    f = parse_expr("(eq (prod e 2 (var e)) (const 0))")
    inst = EtrInstance(Dialect.SIGMA, f)
    assert validate_dialect(inst)
    with pytest.raises(DialectViolation):
        check_dialect(inst)


def test_cosat_formula_is_sigma_etr():
    # x1 or not x2 has 3 satisfying assignments, so the count of falsifying ones is 1
    body = "(add (var e1) (add (neg (mul (var e1) (var e2))) (const 0)))"
    f = parse_expr(f"(eq (sum e1 2 (sum e2 2 (add (const 1) (neg {body})))) (const 1))")
    assert validate_dialect(EtrInstance(Dialect.SIGMA, f)) == []


def test_unbound_index_rejected():
    f = parse_expr("(eq (sum e 2 (ivar x (var y))) (const 0))")
    assert validate_dialect(EtrInstance(Dialect.SIGMA_VI, f))


def test_indexed_variable_rejected_outside_vi_dialect():
    f = parse_expr("(eq (sum e 2 (ivar x (var e))) (const 0))")
    assert validate_dialect(EtrInstance(Dialect.SIGMA, f))
    assert validate_dialect(EtrInstance(Dialect.SIGMA_VI, f)) == []


def test_l1_bounds_are_part_of_the_tag():
    assert Dialect.SIGMA_VI_1.l1_bound == 1
    assert Dialect.SIGMA_HALF.l1_bound == Fraction(1, 2)
    assert Dialect.ETR.l1_bound is None


def test_integer_chain_uses_only_zero_and_one():
    for k in range(-9, 20):
        t = integer_chain(k)
        assert eval_term(t) == k
        assert all(c.value in (0, 1) for c in _consts(t))


def test_lower_constants_preserves_value():
    t = Mul(Const(-7), Var("x"))
    low = lower_constants_term(t)
    assert eval_term(low, {"x": Fraction(3)}) == -21


def test_lower_constants_rejects_fractions():
    with pytest.raises(NonIntegerConstant):
        lower_constants_term(Const(Fraction(1, 3)))


def _consts(t):
    from etrforge.core import walk

    return [n for n in walk(t) if isinstance(n, Const)]


def test_distribution_validates_mass():
    Distribution(("X",), 2, {(0,): Fraction(1, 2), (1,): Fraction(1, 2)})
    with pytest.raises(ValueError):
        Distribution(("X",), 2, {(0,): Fraction(1, 2)})
    with pytest.raises(ValueError):
        Distribution(("X",), 2, {(2,): Fraction(1)})
    with pytest.raises(ValueError):
        Distribution(("X",), 2, {(0,): Fraction(3, 2), (1,): Fraction(-1, 2)})


def test_distribution_drops_zero_mass_and_reorders():
    d = Distribution(("X", "Y"), 2, {(0, 1): 1, (1, 0): 0})
    assert d.support == [(0, 1)]
    assert d.reordered(("Y", "X")).support == [(1, 0)]


def test_witness_payload_must_match_kind():
    with pytest.raises(TypeError):
        Witness("distribution", {"x": 1})
    with pytest.raises(ValueError):
        Witness("tables", {})


def test_neg_has_no_subtraction_node():
    t = parse_expr("(add (var a) (neg (var b)))")
    assert isinstance(t.right, Neg)
    assert all(isinstance(n, (Add, Var, Neg)) for n in [t, t.left, t.right, t.right.arg])
    assert not isinstance(t, Prod)
