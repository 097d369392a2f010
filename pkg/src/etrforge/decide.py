"""Witness checking for every instance kind and brute-force decision over finite candidate sets."""
from __future__ import annotations

import itertools
from fractions import Fraction

from .core import (
    Add,
    Atom,
    Const,
    EtrInstance,
    KindMismatch,
    Mul,
    Neg,
    Or,
    ProbInstance,
    TooLarge,
    Undecidable,
    Var,
    Witness,
    check_dialect,
    conjuncts,
)
from .eso import EsoInstance, eval_eso
from .evaluation import DEFAULT_CAP, eval_formula, eval_prob_formula

SEARCH_LIMIT = 1 << 20
BOOLEAN = (Fraction(0), Fraction(1))


def l1_norm(values) -> Fraction:
    return sum((abs(Fraction(v)) for v in values), Fraction(0))


def check_witness(instance, w: Witness, cap: int = DEFAULT_CAP) -> bool:
    """True iff ``w`` satisfies ``instance``; norm and support gates apply first."""
    if isinstance(instance, EtrInstance):
        if w.kind != "assignment":
            raise KindMismatch(f"{instance.dialect.value} instances take assignment witnesses, not {w.kind}")
        check_dialect(instance)
        bound = instance.dialect.l1_bound
        if bound is not None and l1_norm(w.payload.values()) > bound:
            return False
        return eval_formula(instance.formula, w.payload, cap)
    if isinstance(instance, ProbInstance):
        if w.kind != "distribution":
            raise KindMismatch(f"probabilistic instances take distribution witnesses, not {w.kind}")
        dist = w.payload
        if sorted(dist.variables) != sorted(instance.variables) or dist.c != instance.c:
            raise KindMismatch("distribution variables or domain do not match the instance")
        if tuple(dist.variables) != tuple(instance.variables):
            dist = dist.reordered(instance.variables)
        if instance.support_bound is not None and len(dist.support) > instance.support_bound:
            return False
        return eval_prob_formula(instance.formula, dist, cap)
    if isinstance(instance, EsoInstance):
        if w.kind != "eso-tables":
            raise KindMismatch(f"ESO instances take table witnesses, not {w.kind}")
        return eval_eso(instance.sentence, instance.structure, w, cap)
    raise KindMismatch(f"no witness semantics for {type(instance).__name__}")


def _is_const(t, value) -> bool:
    return isinstance(t, Const) and t.value == value


def _eq_var_const(f):
    """(name, value) when ``f`` is ``x = k`` or ``k = x``."""
    if not isinstance(f, Atom) or f.op != "=":
        return None
    if isinstance(f.lhs, Var) and isinstance(f.rhs, Const):
        return f.lhs.name, f.rhs.value
    if isinstance(f.rhs, Var) and isinstance(f.lhs, Const):
        return f.rhs.name, f.lhs.value
    return None


def _minus_one(t, name) -> bool:
    if not isinstance(t, Add) or not (isinstance(t.left, Var) and t.left.name == name):
        return False
    r = t.right
    return _is_const(r, -1) or (isinstance(r, Neg) and _is_const(r.arg, 1))


def boolean_pattern(f):
    """Variable forced into {0, 1} by ``x = 0 ∨ x = 1`` or ``x·(x - 1) = 0``, else None."""
    if isinstance(f, Or):
        a, b = _eq_var_const(f.left), _eq_var_const(f.right)
        if a and b and a[0] == b[0] and {a[1], b[1]} == {0, 1}:
            return a[0]
        return None
    if isinstance(f, Atom) and f.op == "=":
        for prod, zero in ((f.lhs, f.rhs), (f.rhs, f.lhs)):
            if _is_const(zero, 0) and isinstance(prod, Mul):
                for x, y in ((prod.left, prod.right), (prod.right, prod.left)):
                    if isinstance(x, Var) and _minus_one(y, x.name):
                        return x.name
    return None


def candidate_sets(inst: EtrInstance) -> dict:
    """Finite candidate values per free variable; raises Undecidable for an unconstrained one."""
    detected = {boolean_pattern(c) for c in conjuncts(inst.formula)} - {None}
    out = {}
    for name in sorted(inst.free_variables()):
        if name in inst.candidates:
            out[name] = tuple(Fraction(v) for v in inst.candidates[name])
        elif name in detected:
            out[name] = BOOLEAN
        else:
            raise Undecidable(f"variable {name!r} is not confined to a finite candidate set")
    return out


def _grid_size(cands: dict) -> int:
    size = 1
    for values in cands.values():
        size *= len(values)
    return size


def search_space(inst: EtrInstance) -> int:
    return _grid_size(candidate_sets(inst))


def brute_force_decide(inst: EtrInstance, cap: int = DEFAULT_CAP, limit: int = SEARCH_LIMIT) -> bool:
    """Exhaustive search over the candidate grid with exact evaluation."""
    return find_witness(inst, cap, limit) is not None


def find_witness(inst: EtrInstance, cap: int = DEFAULT_CAP, limit: int = SEARCH_LIMIT):
    """First satisfying candidate assignment, or None."""
    check_dialect(inst)
    cands = candidate_sets(inst)
    names = list(cands)
    size = _grid_size(cands)
    if size > limit:
        raise TooLarge(f"search space {size} exceeds {limit}")
    bound = inst.dialect.l1_bound
    for combo in itertools.product(*(cands[n] for n in names)):
        if bound is not None and l1_norm(combo) > bound:
            continue
        values = dict(zip(names, combo))
        if eval_formula(inst.formula, values, cap):
            return Witness("assignment", values, "brute force")
    return None
