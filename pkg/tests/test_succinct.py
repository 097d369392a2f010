from fractions import Fraction

import pytest

from etrforge.circuits import constant_circuit
from etrforge.core import (
    Add,
    And,
    Atom,
    Const,
    Dialect,
    EtrInstance,
    IllFormed,
    MalformedOpcode,
    Not,
    Or,
    Var,
)
from etrforge.evaluation import eval_formula, eval_term
from etrforge.fixtures import random_assignment, tree_fixture
from etrforge.succinct import (
    OPCODES,
    SuccCircuit,
    compile_sigma_pi,
    encode_tree,
    eval_node,
    expand_subtree,
    expand_succ,
    labels,
    minus_index,
    plus_index,
    remove_negations,
)
from etrforge.textio import parse_expr


def record_circuit(n, records, names=()):
    """Node circuit from an explicit list of (opcode, parent, child0, child1, payload) rows."""
    rows = []
    for op, parent, c0, c1, payload in records:
        bits = [(op >> (7 - k)) & 1 for k in range(8)]
        for value in (parent, c0, c1, payload):
            bits += [(value >> (n - 1 - k)) & 1 for k in range(n)]
        rows.append(bits)
    return SuccCircuit(constant_circuit(n, rows), False, tuple(names))


EQ, C1, VAR, OFF = OPCODES["eq"], OPCODES["const1"], OPCODES["var"], OPCODES["disabled"]


def test_eval_node_decodes_root():
    s = record_circuit(2, [(EQ, 0, 1, 2, 0), (C1, 0, 1, 1, 0), (C1, 0, 2, 2, 0), (OFF, 0, 0, 0, 0)])
    root = eval_node(s, 0)
    assert root.name == "eq"
    assert eval_node(s, [1, 1]).opcode == 255
    assert eval_node(s, root.child0).parent == 0
    assert expand_succ(s).formula == Atom("=", Const(1), Const(1))


def test_malformed_opcode():
    s = record_circuit(1, [(EQ, 0, 1, 1, 0), (200, 0, 1, 1, 0)])
    with pytest.raises(MalformedOpcode):
        eval_node(s, 1)


def test_variable_fixture_expands():
    s = record_circuit(2, [(EQ, 0, 1, 2, 0), (VAR, 0, 1, 1, 0), (C1, 0, 2, 2, 0), (OFF, 0, 0, 0, 0)], ("x0",))
    assert expand_succ(s).formula == Atom("=", Var("x0"), Const(1))


def test_dangling_parent_is_ill_formed():
    s = record_circuit(2, [(EQ, 0, 1, 2, 0), (C1, 3, 1, 1, 0), (C1, 0, 2, 2, 0), (OFF, 0, 0, 0, 0)])
    with pytest.raises(IllFormed):
        expand_succ(s)


def test_encode_tree_round_trip(rng):
    for _ in range(30):
        s = tree_fixture(rng, 6)
        inst = expand_succ(s)
        again = expand_succ(encode_tree(inst))
        assert again.formula == inst.formula


def test_root_parent_consistency(rng):
    for _ in range(20):
        s = tree_fixture(rng, 6)
        root = eval_node(s, 0)
        if root.name in ("and", "or", "lt", "le", "eq"):
            assert eval_node(s, root.child0).parent == 0
            assert eval_node(s, root.child1).parent == 0


def _tree(formula, names):
    return encode_tree(EtrInstance(Dialect.ETR, formula, tuple(names)))


def _shape(f):
    if isinstance(f, Atom):
        return f.op
    return (type(f).__name__, _shape(f.left), _shape(f.right)) if hasattr(f, "left") else (type(f).__name__, _shape(f.arg))


def test_negated_equality_gadget():
    s = _tree(parse_expr("(eq (var x) (var y))"), ["x", "y"])
    t = remove_negations(s)
    assert _shape(expand_subtree(t, minus_index(0, s.width))) == ("Or", "<", "<")


def test_leq_gadget():
    s = _tree(parse_expr("(le (var x) (var y))"), ["x", "y"])
    t = remove_negations(s)
    assert _shape(expand_subtree(t, plus_index(0, s.width))) == ("Or", "<", "=")


def test_negation_gadget():
    s = _tree(parse_expr("(not (lt (var x) (var y)))"), ["x", "y"])
    t = remove_negations(s)
    plus = expand_subtree(t, plus_index(0, s.width))
    assert isinstance(plus, And)
    assert plus.right == Atom("=", Const(0), Const(0))


def test_negation_removal_preserves_truth(rng):
    for _ in range(20):
        s = tree_fixture(rng, 5)
        t = remove_negations(s)
        assert not {"not", "le"} & labels(t)
        src, dst = expand_succ(s), expand_succ(t)
        for _ in range(10):
            values = random_assignment(rng, s.var_names)
            assert eval_formula(src.formula, values) == eval_formula(dst.formula, values)


def test_compile_sum_of_variable():
    inst = EtrInstance(Dialect.SIGMA_PI, Atom("=", parse_expr("(sum e 2 (var x))"), Const(0)))
    out = expand_succ(compile_sigma_pi(inst)).formula
    assert out.lhs == Add(Var("x"), Var("x"))
    assert compile_sigma_pi(inst).unary


def test_compile_product_of_binder():
    inst = EtrInstance(Dialect.SIGMA_PI, Atom("=", parse_expr("(prod e 2 (var e))"), Const(0)))
    out = expand_succ(compile_sigma_pi(inst)).formula
    assert eval_term(out.lhs) == 0
    assert eval_formula(out)


def test_compile_without_binders_is_structural():
    f = Or(Atom("<", Var("x"), Const(1)), Not(Atom("=", Var("y"), Const(0))))
    out = expand_succ(compile_sigma_pi(EtrInstance(Dialect.SIGMA_PI, f)))
    assert out.formula == f


def test_cosat_compiles_to_four_summands():
    t = parse_expr(
        "(sum x1 2 (sum x2 2 (mul (mul (add (var x1) (var x2)) (add (var x1) (add (const 1) (neg (var x2)))))"
        " (add (const 1) (neg (var x1))))))"
    )
    out = expand_succ(compile_sigma_pi(EtrInstance(Dialect.SIGMA_PI, Atom("=", t, Const(0))))).formula
    assert isinstance(out.lhs, Add) and isinstance(out.lhs.left, Add) and isinstance(out.lhs.right, Add)
    assert eval_term(out.lhs) == 0


def test_compile_scales_fractional_constants():
    t = parse_expr("(mul (const 1/2) (var x))")
    out = expand_succ(compile_sigma_pi(EtrInstance(Dialect.SIGMA_PI, Atom("=", t, Const(0)))))
    assert eval_term(out.formula.lhs, {"x": Fraction(3)}) == 3
