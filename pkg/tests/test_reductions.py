import itertools
import random
from fractions import Fraction

import pytest

from etrforge.acceptance import _flattened_feasible
from etrforge.core import (
    And,
    Atom,
    BoundParameters,
    Const,
    Dialect,
    Distribution,
    EMajSatInstance,
    EtrInstance,
    EvEq,
    EvNot,
    NonPropositionalAtom,
    Not,
    NotNormalized,
    Or,
    Prob,
    ProbInstance,
    QbfInstance,
    UnsupportedAtom,
    Var,
    Witness,
    assignment_witness,
    conjuncts,
    validate_dialect,
)
from etrforge.decide import check_witness
from etrforge.evaluation import (
    eval_emajsat,
    eval_formula,
    eval_prob_formula,
    eval_prob_term,
    eval_qbf,
    eval_term,
)
from etrforge.fixtures import (
    boolean_constrained_instance,
    half_fixture,
    prop,
    random_distribution,
    random_emajsat,
    random_qbf,
    random_sigma_term,
    smsat_fixture,
    sumvi1_fixture,
)
from etrforge.reductions import PASSES, run_pass
from etrforge.reductions.arith import arithmetize_bool, compute_solution_bound
from etrforge.reductions.emajsat import emajsat_to_sigmaetr
from etrforge.reductions.normal_forms import (
    flatten_single_poly,
    four_squares,
    is_sum_prenex,
    prenex_sums,
    push_negations,
)
from etrforge.reductions.permanent import (
    brute_force_permanent,
    entry_name,
    permanent_term,
    permutation_indicator,
)
from etrforge.reductions.probabilistic import (
    arithmetize_event,
    encode_integer,
    encode_zero,
    normalize_prob_primitives,
    sigmaetr_half_to_smsat,
    smsat_to_sigmaetr,
    sumvi1_to_probsat,
)
from etrforge.reductions.qbf import qbf_to_pietr
from etrforge.reductions.scaling import (
    chain_values,
    successor_indicator,
    sumvi_to_sumvi1,
)
from etrforge.textio import parse_expr


def uniform(names, c=2):
    keys = list(itertools.product(range(c), repeat=len(names)))
    return Distribution(tuple(names), c, {k: Fraction(1, len(keys)) for k in keys})


# Boolean arithmetization and QBF


def test_arithmetize_connectives():
    x, y = prop("x"), prop("y")
    assert arithmetize_bool(And(x, y)) == parse_expr("(mul (var x) (var y))")
    assert eval_term(arithmetize_bool(Not(x)), {"x": Fraction(0)}) == 1
    t = arithmetize_bool(Or(x, y))
    for a, b in itertools.product((0, 1), repeat=2):
        assert eval_term(t, {"x": Fraction(a), "y": Fraction(b)}) == (a | b)


def test_arithmetize_rejects_comparisons():
    with pytest.raises(NonPropositionalAtom):
        arithmetize_bool(Atom("<", Var("x"), Const(1)))


@pytest.mark.parametrize("prefix,matrix,expected", [
    ((("A", "x"),), Or(prop("x"), Not(prop("x"))), True),
    ((("A", "x"),), prop("x"), False),
    ((("E", "x"),), prop("x"), True),
])
def test_qbf_to_pietr_examples(prefix, matrix, expected):
    target = qbf_to_pietr(QbfInstance(prefix, matrix)).target
    assert target.dialect is Dialect.PI
    assert not target.free_variables()
    assert eval_formula(target.formula) is expected


def test_qbf_to_pietr_random(rng):
    for _ in range(100):
        q = random_qbf(rng)
        target = qbf_to_pietr(q).target
        assert validate_dialect(target) == []
        assert eval_formula(target.formula) == eval_qbf(q)


# E-MajSat


@pytest.mark.parametrize("matrix,expected", [
    (prop("y"), True),
    (And(prop("x"), prop("y")), True),
    (And(And(prop("x"), Not(prop("x"))), prop("y")), False),
])
def test_emajsat_examples(matrix, expected):
    inst = EMajSatInstance(("x",), ("y",), matrix)
    assert eval_emajsat(inst) is expected
    target = emajsat_to_sigmaetr(inst).target
    verdicts = [eval_formula(target.formula, {"x": Fraction(v)}) for v in (0, 1)]
    assert any(verdicts) is expected


def test_emajsat_needs_x_one():
    target = emajsat_to_sigmaetr(EMajSatInstance(("x",), ("y",), And(prop("x"), prop("y")))).target
    assert eval_formula(target.formula, {"x": Fraction(1)})
    assert not eval_formula(target.formula, {"x": Fraction(0)})


# solution bound


def test_solution_bound():
    assert compute_solution_bound(BoundParameters(1, 2, 1, 1)).value() == 4
    assert compute_solution_bound(BoundParameters(2, 2, 2, 1)).value() == 256
    base = compute_solution_bound(BoundParameters(2, 2, 2, 1)).exponent
    for bumped in (BoundParameters(3, 2, 2, 1), BoundParameters(2, 3, 2, 1), BoundParameters(2, 2, 3, 1),
                   BoundParameters(2, 2, 2, 2)):
        assert compute_solution_bound(bumped).exponent >= base


# variable rescaling


@pytest.mark.parametrize("m", [1, 2, 3])
def test_successor_indicator_matches_table(m):
    e = [Var(f"e{i}") for i in range(m)]
    f = [Var(f"f{i}") for i in range(m)]
    t = successor_indicator(e, f)
    for a, b in itertools.product(range(2 ** m), repeat=2):
        values = {}
        for i in range(m):
            values[f"e{i}"] = Fraction((a >> (m - 1 - i)) & 1)
            values[f"f{i}"] = Fraction((b >> (m - 1 - i)) & 1)
        assert eval_term(t, values) == (1 if b == a + 1 else 0)


def test_chain_start_value():
    t = chain_values(1, 3)
    assert t[0] == Fraction(1, 2 + 8)
    assert t[1] == t[0] ** 2


def test_sumvi_to_sumvi1_transport(rng):
    f = parse_expr("(eq (sum e 2 (ivar x (var e))) (const 3))")
    inst = EtrInstance(Dialect.SIGMA_VI, f, ("x[0]", "x[1]"))
    for m in (1, 2):
        result = sumvi_to_sumvi1(inst, m)
        assert validate_dialect(result.target) == []
        w = assignment_witness({"x[0]": 1, "x[1]": 2})
        tw = result.transport(w)
        assert check_witness(result.target, tw)
        assert result.pull_back(tw).payload == w.payload


def test_sumvi_to_sumvi1_zero_witness():
    f = parse_expr("(eq (sum e 2 (ivar x (var e))) (const 0))")
    result = sumvi_to_sumvi1(EtrInstance(Dialect.SIGMA_VI, f, ("x[0]", "x[1]")))
    tw = result.transport(assignment_witness({"x[0]": 0, "x[1]": 0}))
    assert tw.payload["x[0]"] == 0 and tw.payload["x[1]"] == 0
    assert check_witness(result.target, tw)


# indexed sums to probabilistic satisfiability


def _sumvi1_simple():
    f = parse_expr("(eq (sum e 2 (ivar x (var e))) (const 1/4))")
    return EtrInstance(Dialect.SIGMA_VI_1, f, ("x[0]", "x[1]"))


def test_sumvi1_zero_witness_is_uniform():
    result = sumvi1_to_probsat(EtrInstance(Dialect.SIGMA_VI_1, parse_expr("(eq (ivar x (const 0)) (const 0))"),
                                           ("x[0]", "x[1]")))
    d = result.transport(assignment_witness({"x[0]": 0, "x[1]": 0})).payload
    assert d.entries == {(0, 0): Fraction(1, 2), (0, 1): Fraction(1, 2)}


def test_sumvi1_signed_witness():
    result = sumvi1_to_probsat(_sumvi1_simple())
    w = assignment_witness({"x[0]": Fraction(1, 2), "x[1]": Fraction(-1, 4)})
    tw = result.transport(w)
    d = tw.payload
    # value 2 of the ternary sign variable stands for -1
    assert d.mass((1, 0)) == Fraction(1, 2)
    assert d.mass((2, 1)) == Fraction(1, 4)
    assert d.mass((0, 0)) == d.mass((0, 1)) == Fraction(1, 8)
    assert check_witness(result.target, tw)
    assert result.pull_back(tw).payload == w.payload


def test_sumvi1_rejects_large_norm():
    result = sumvi1_to_probsat(_sumvi1_simple())
    assert result.transport(assignment_witness({"x[0]": 1, "x[1]": -1})) is None


def test_sumvi1_fixtures(rng):
    for _ in range(20):
        inst, w = sumvi1_fixture(rng)
        result = sumvi1_to_probsat(inst)
        tw = result.transport(w)
        assert check_witness(result.target, tw)
        back = result.pull_back(tw).payload
        assert all(back[k] == v for k, v in w.payload.items())


# events and integer encodings


def test_event_polynomials():
    t = arithmetize_event(EvEq("X", 1), ["X"], 2)
    assert [eval_term(t, {"X": Fraction(v)}) for v in (0, 1)] == [0, 1]
    t = arithmetize_event(EvNot(EvEq("X", 0)), ["X"], 2)
    assert [eval_term(t, {"X": Fraction(v)}) for v in (0, 1)] == [0, 1]
    t = arithmetize_event(EvEq("X", 2), ["X"], 3)
    assert [eval_term(t, {"X": Fraction(v)}) for v in (0, 1, 2)] == [0, 0, 1]


def test_integer_encodings(rng):
    assert eval_prob_term(encode_integer(4), uniform(["X", "Y"])) == 4
    assert encode_integer(0) == encode_zero()
    for _ in range(5):
        d = random_distribution(rng, ("X", "Y"), 3, 3)
        assert eval_prob_term(encode_zero(), d) == 0
        for k in range(9):
            assert eval_prob_term(encode_integer(k), d) == k


def test_normalize_preserves_values(rng):
    f = Atom("=", Prob(EvEq("X1", 1)), Const(Fraction(1, 2)))
    inst = ProbInstance(f, ("X1", "X2"), 2)
    norm = normalize_prob_primitives(inst)
    for _ in range(5):
        d = random_distribution(rng, ("X1", "X2"), 2, rng.randint(1, 4))
        assert eval_prob_formula(norm.formula, d) == eval_prob_formula(f, d)
    top = normalize_prob_primitives(ProbInstance(Atom("=", parse_expr("(P true)"), Const(1)), ("X1",), 2))
    assert eval_prob_formula(top.formula, uniform(["X1"]))


def test_normalize_keeps_full_primitives():
    f = Atom("=", parse_expr("(P (and (eq X1 1) (eq X2 0)))"), Const(0))
    inst = ProbInstance(f, ("X1", "X2"), 2)
    assert normalize_prob_primitives(inst).formula == f


def test_smsat_single_point():
    f = Atom("=", Prob(EvEq("X", 1)), Const(1))
    result = smsat_to_sigmaetr(ProbInstance(f, ("X",), 2, 1))
    d = Distribution(("X",), 2, {(1,): 1})
    tw = result.transport(Witness("distribution", d))
    assert tw.payload["m1"] == 1 and tw.payload["s1_1"] == 1
    assert check_witness(result.target, tw)


def test_smsat_round_trip():
    f = Atom("=", Prob(EvEq("X", 1)), Const(Fraction(1, 2)))
    result = smsat_to_sigmaetr(ProbInstance(f, ("X",), 2, 2))
    d = Distribution(("X",), 2, {(0,): Fraction(1, 2), (1,): Fraction(1, 2)})
    tw = result.transport(Witness("distribution", d))
    assert check_witness(result.target, tw)
    assert result.pull_back(tw).payload == d


def test_smsat_without_mass_is_unsatisfiable():
    f = Atom("=", Prob(EvEq("X", 1)), Const(0))
    target = smsat_to_sigmaetr(ProbInstance(f, ("X",), 2, 0)).target
    assert not eval_formula(target.formula, {})


def test_smsat_needs_normalized_primitives():
    f = Atom("=", Prob(EvEq("X", 1)), Const(0))
    with pytest.raises(NotNormalized):
        smsat_to_sigmaetr(ProbInstance(f, ("X", "Y"), 2, 1))


def test_smsat_fixtures(rng):
    for _ in range(10):
        inst, w = smsat_fixture(rng)
        result = smsat_to_sigmaetr(normalize_prob_primitives(inst))
        tw = result.transport(w)
        assert check_witness(result.target, tw)


def test_half_norm_binder_sum():
    f = Atom("=", parse_expr("(sum e 2 (var e))"), Const(1))
    result = sigmaetr_half_to_smsat(EtrInstance(Dialect.SIGMA_HALF, f, ("x",)))
    tw = result.transport(assignment_witness({"x": 0}))
    assert check_witness(result.target, tw)
    assert result.notes["support_bound"] == 3


def test_half_norm_quarter_witness():
    f = Atom("=", Var("x"), Const(Fraction(1, 4)))
    result = sigmaetr_half_to_smsat(EtrInstance(Dialect.SIGMA_HALF, f, ("x",)))
    tw = result.transport(assignment_witness({"x": Fraction(1, 4)}))
    d = tw.payload
    assert Fraction(1, 4) in d.entries.values()
    assert Fraction(1, 2) in d.entries.values()
    assert len(d.support) <= 3
    assert check_witness(result.target, tw)
    assert result.pull_back(tw).payload == {"x": Fraction(1, 4)}


def test_half_norm_fixtures(rng):
    for _ in range(20):
        inst, w = half_fixture(rng)
        result = sigmaetr_half_to_smsat(inst)
        tw = result.transport(w)
        assert len(tw.payload.support) <= len(inst.free_variables()) + 2
        assert check_witness(result.target, tw)


# normal forms


def _atom_instance(t):
    return EtrInstance(Dialect.SIGMA, Atom("=", t, Const(0)), ("a", "b"))


def test_prenex_product_of_sums(rng):
    t = parse_expr("(mul (sum e 2 (mul (var a) (var e))) (sum f 2 (add (var b) (var f))))")
    result = prenex_sums(_atom_instance(t))
    lhs = result.target.formula.lhs
    assert is_sum_prenex(lhs)
    for _ in range(10):
        values = {"a": Fraction(rng.randint(-5, 5), 3), "b": Fraction(rng.randint(-5, 5), 2)}
        tw = result.transport(assignment_witness(values))
        assert eval_term(lhs, tw.payload) == eval_term(t, values)


def test_prenex_sum_of_sums():
    t = parse_expr("(add (sum e 2 (mul (var a) (var e))) (sum f 2 (mul (var b) (var f))))")
    result = prenex_sums(_atom_instance(t))
    values = {"a": Fraction(3), "b": Fraction(-1, 2)}
    tw = result.transport(assignment_witness(values))
    assert list(result.notes["Z"].values()) == [Fraction(1, 2)]
    main = conjuncts(result.target.formula)[0]
    assert eval_term(main.lhs, tw.payload) == eval_term(t, values)


def test_prenex_sum_free_unchanged():
    t = parse_expr("(mul (var a) (add (var b) (const 1)))")
    assert prenex_sums(_atom_instance(t)).target.formula == Atom("=", t, Const(0))


def test_prenex_random(rng):
    for _ in range(50):
        t = random_sigma_term(rng, ("a", "b"))
        result = prenex_sums(_atom_instance(t))
        assert is_sum_prenex(conjuncts(result.target.formula)[0].lhs)


def test_push_negations():
    f = Not(And(Atom("<", Var("a"), Const(1)), Atom("=", Var("a"), Var("b"))))
    g = push_negations(f)
    assert not any(isinstance(n, Not) for n in _formula_nodes(g))
    for a, b in itertools.product([Fraction(k, 2) for k in range(-2, 4)], repeat=2):
        assert eval_formula(g, {"a": a, "b": b}) == eval_formula(f, {"a": a, "b": b})


def _formula_nodes(f):
    yield f
    if isinstance(f, (And, Or)):
        yield from _formula_nodes(f.left)
        yield from _formula_nodes(f.right)
    elif isinstance(f, Not):
        yield from _formula_nodes(f.arg)


def test_four_squares(rng):
    for _ in range(100):
        r = Fraction(rng.randint(0, 200), rng.randint(1, 30))
        parts = four_squares(r)
        assert len(parts) == 4
        assert sum(p * p for p in parts) == r


def test_flatten_equality():
    inst = EtrInstance(Dialect.ETR, Atom("=", Var("a"), Var("b")), ("a", "b"))
    result = flatten_single_poly(inst)
    for a, b in [(1, 1), (2, 2), (1, 2)]:
        tw = result.transport(assignment_witness({"a": a, "b": b}))
        truth = a == b
        assert (tw is not None and check_witness(result.target, tw)) is truth
        assert _flattened_feasible(result.notes["plan"], result.notes["root"],
                                   {"a": Fraction(a), "b": Fraction(b)}) is truth


def test_flatten_strict_constants():
    sat = flatten_single_poly(EtrInstance(Dialect.ETR, Atom("<", Const(0), Const(1)), ()))
    tw = sat.transport(assignment_witness({}))
    assert check_witness(sat.target, tw)
    unsat = flatten_single_poly(EtrInstance(Dialect.ETR, Atom("<", Const(1), Const(0)), ()))
    assert not _flattened_feasible(unsat.notes["plan"], unsat.notes["root"], {})


def test_flatten_rejects_negation():
    with pytest.raises(UnsupportedAtom):
        flatten_single_poly(EtrInstance(Dialect.ETR, Not(Atom("=", Var("a"), Const(0))), ("a",)))


def test_flatten_target_shape(rng):
    for _ in range(10):
        src = boolean_constrained_instance(rng, 2, 2)
        src = EtrInstance(src.dialect, push_negations(src.formula), src.variables)
        target = flatten_single_poly(src).target.formula
        assert isinstance(target, Atom) and target.op == "=" and target.rhs == Const(0)


# permanent


def test_permanent_small():
    t1 = permanent_term(1)
    assert eval_term(t1, {entry_name(1, 1): Fraction(7, 3)}) == Fraction(7, 3)
    rng = random.Random(5)
    t2 = permanent_term(2)
    for _ in range(10):
        m = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
        values = {entry_name(i + 1, j + 1): m[i][j] for i in range(2) for j in range(2)}
        assert eval_term(t2, values) == m[0][0] * m[1][1] + m[0][1] * m[1][0] == brute_force_permanent(m)


def test_permutation_indicator():
    delta = permutation_indicator(2)
    ident = {entry_name(1, 1): 1, entry_name(1, 2): 0, entry_name(2, 1): 0, entry_name(2, 2): 1}
    ones = {k: 1 for k in ident}
    assert eval_term(delta, {k: Fraction(v) for k, v in ident.items()}) == 1
    assert eval_term(delta, {k: Fraction(v) for k, v in ones.items()}) == 0


# registry


def test_registry_names():
    assert {"qbf-to-pietr", "emajsat-to-sigmaetr", "sumvi-to-sumvi1", "sumvi1-to-probsat", "normalize-prob",
            "smsat-to-sigmaetr", "sigmaetr-half-to-smsat", "prenex-sums", "push-negations",
            "flatten-single-poly", "succ18-to-leso", "leso-leq-rewrite"} == set(PASSES)


def test_run_pass_with_params():
    f = parse_expr("(eq (sum e 2 (ivar x (var e))) (const 1))")
    inst = EtrInstance(Dialect.SIGMA_VI, f, ("x[0]", "x[1]"))
    result = run_pass("sumvi-to-sumvi1", inst, {"m": "2"})
    assert result.target.dialect is Dialect.SIGMA_VI_1
    with pytest.raises(KeyError):
        run_pass("no-such-pass", inst)


def test_pass_outputs_validate(rng):
    for _ in range(20):
        q = random_qbf(rng)
        assert validate_dialect(run_pass("qbf-to-pietr", q).target) == []
        e = random_emajsat(rng, 1, 2)
        assert validate_dialect(run_pass("emajsat-to-sigmaetr", e).target) == []
