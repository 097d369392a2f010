import itertools
from fractions import Fraction

import pytest

from etrforge.circuits import CircuitBuilder
from etrforge.core import MissingTable, UnsupportedAtom, WidthMismatch, Witness
from etrforge.eso import (
    Cmp,
    EsoInstance,
    EsoSentence,
    Exists,
    ExistsF,
    FAdd,
    FApp,
    FConst,
    FiniteStructure,
    Forall,
    FSum,
    eval_eso,
)
from etrforge.fixtures import (
    random_eso_instance,
    succ18_consistent,
    succ18_inconsistent,
)
from etrforge.reductions.eso_passes import (
    Succ18Instance,
    binary_structure,
    eval_succ18,
    leso_leq_rewrite,
    succ18_to_leso,
    succ18_variable,
)

TWO = FiniteStructure((0, 1))
EIGHTH = Fraction(1, 8)


def test_reflexive_equality_holds_for_any_table():
    s = EsoSentence(ExistsF("f", 1, Forall("x", Cmp("=", FApp("f", ("x",)), FApp("f", ("x",))))))
    assert eval_eso(s, TWO, {"f": {(0,): Fraction(5), (1,): Fraction(-2)}})


def test_minus_one_plus_one():
    s = EsoSentence(ExistsF("f", 0, Cmp("=", FAdd(FApp("f"), FConst(1)), FConst(0))))
    assert eval_eso(s, TWO, {"f": {(): Fraction(-1)}})
    assert not eval_eso(s, TWO, {"f": {(): Fraction(1)}})


def test_eighth_as_eight_fold_sum():
    body = FApp("f")
    for _ in range(7):
        body = FAdd(body, FApp("f"))
    s = EsoSentence(ExistsF("f", 0, Cmp("=", body, FConst(1))))
    assert eval_eso(s, TWO, {"f": {(): EIGHTH}})


def test_domain_sum():
    structure = FiniteStructure((0, 1, 2))
    s = EsoSentence(ExistsF("f", 1, Cmp("=", FSum("x", FApp("f", ("x",))), FConst(3))))
    assert eval_eso(s, structure, {"f": {(k,): Fraction(1) for k in range(3)}})


def test_missing_table():
    s = EsoSentence(ExistsF("f", 0, Cmp("=", FApp("f"), FConst(0))))
    with pytest.raises(MissingTable):
        eval_eso(s, TWO, {})


def test_range_is_enforced():
    s = EsoSentence(ExistsF("f", 0, Cmp("=", FApp("f"), FConst(2))), (Fraction(-1), Fraction(1)))
    assert not eval_eso(s, TWO, {"f": {(): Fraction(2)}})


# succ18 equations


def test_width_mismatch():
    b = CircuitBuilder(2)
    wide = b.build([b.const(0)])
    base = succ18_consistent().circuits
    with pytest.raises(WidthMismatch):
        Succ18Instance(base[:6])
    with pytest.raises(WidthMismatch):
        Succ18Instance(base[:6] + (wide,))


def test_consistent_fixture_transports():
    inst = succ18_consistent()
    w = Witness("assignment", {succ18_variable((0,)): EIGHTH, succ18_variable((1,)): Fraction(0)})
    assert eval_succ18(inst, w.payload)
    result = succ18_to_leso(inst)
    tw = result.transport(w)
    assert tw.payload["id"] == {(0,): Fraction(0), (1,): Fraction(1)}
    assert eval_eso(result.target.sentence, result.target.structure, tw)
    assert result.pull_back(tw).payload == w.payload


def test_identity_table_is_pinned():
    inst = succ18_consistent()
    result = succ18_to_leso(inst)
    w = Witness("assignment", {succ18_variable((0,)): EIGHTH, succ18_variable((1,)): Fraction(0)})
    tables = result.transport(w).payload
    tables["id"] = {(0,): Fraction(1), (1,): Fraction(0)}
    assert not eval_eso(result.target.sentence, result.target.structure, tables)


def test_inconsistent_fixture_rejected_on_grid():
    inst = succ18_inconsistent()
    result = succ18_to_leso(inst)
    grid = [Fraction(k, 16) for k in range(-2, 3)]
    for a, b in itertools.product(grid, repeat=2):
        w = Witness("assignment", {succ18_variable((0,)): a, succ18_variable((1,)): b})
        assert not eval_succ18(inst, w.payload)
        assert not eval_eso(result.target.sentence, result.target.structure, result.transport(w))


def test_binary_structure():
    s = binary_structure()
    assert s.domain == (0, 1)


# ≤ rewrite


def _leq(lhs, rhs):
    return EsoInstance(EsoSentence(ExistsF("f", 0, Cmp("<=", lhs, rhs)), (Fraction(0), Fraction(1))), TWO)


@pytest.mark.parametrize("lhs,rhs,value,expected", [
    (FConst(0), FConst(1), Fraction(0), True),
    (FApp("f"), FApp("f"), Fraction(1, 2), True),
    (FConst(1), FConst(0), Fraction(0), False),
    (FApp("f"), FConst(Fraction(1, 3)), Fraction(1, 4), True),
    (FApp("f"), FConst(Fraction(1, 3)), Fraction(1, 2), False),
])
def test_leq_rewrite_cases(lhs, rhs, value, expected):
    inst = _leq(lhs, rhs)
    w = Witness("eso-tables", {"f": {(): value}})
    assert eval_eso(inst.sentence, inst.structure, w) is expected
    result = leso_leq_rewrite(inst)
    tw = result.transport(w)
    assert eval_eso(result.target.sentence, result.target.structure, tw) is expected


def test_leq_rewrite_slack_grid():
    # 1 <= 0: no slack value in [0, 1] works once eps is pinned
    result = leso_leq_rewrite(_leq(FConst(1), FConst(0)))
    sentence, structure = result.target.sentence, result.target.structure
    for slack in [Fraction(k, 8) for k in range(9)]:
        tables = {"f": {(): Fraction(0)}, "eps1": {(): Fraction(1)}, "slack1": {(): slack}}
        assert not eval_eso(sentence, structure, tables)


def test_leq_rewrite_rejects_negated():
    inst = EsoInstance(EsoSentence(ExistsF("f", 0, Cmp("<=", FApp("f"), FConst(0), negated=True)),
                                   (Fraction(0), Fraction(1))), TWO)
    with pytest.raises(UnsupportedAtom):
        leso_leq_rewrite(inst)


def test_leq_rewrite_preserves_semantics(rng):
    grid = [Fraction(k, 4) for k in range(5)]
    checked = 0
    for _ in range(60):
        inst = random_eso_instance(rng)
        inst = EsoInstance(EsoSentence(inst.sentence.formula, (Fraction(0), Fraction(1))), inst.structure)
        result = leso_leq_rewrite(inst)
        for _ in range(5):
            tables = {name: {key: rng.choice(grid) for key in itertools.product(inst.structure.domain, repeat=arity)}
                      for name, arity in _quantified(inst.sentence.formula)}
            w = Witness("eso-tables", tables)
            truth = eval_eso(inst.sentence, inst.structure, w)
            tw = result.transport(w)
            assert eval_eso(result.target.sentence, result.target.structure, tw) == truth
            checked += 1
    assert checked == 300


def test_leq_rewrite_needs_a_range():
    inst = EsoInstance(EsoSentence(ExistsF("f", 0, Cmp("<=", FApp("f"), FConst(0)))), TWO)
    with pytest.raises(UnsupportedAtom):
        leso_leq_rewrite(inst)


def _quantified(f):
    from etrforge.eso import second_order_prefix

    return second_order_prefix(f)


def test_exists_first_order():
    s = EsoSentence(ExistsF("f", 1, Exists("x", Cmp("=", FApp("f", ("x",)), FConst(1)))))
    assert eval_eso(s, TWO, {"f": {(0,): Fraction(0), (1,): Fraction(1)}})
    assert not eval_eso(s, TWO, {"f": {(0,): Fraction(0), (1,): Fraction(0)}})
