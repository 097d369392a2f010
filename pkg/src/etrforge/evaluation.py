"""Exact evaluation of terms, formulas, QBFs and probabilistic formulas."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .core import (
    Add,
    And,
    Atom,
    Const,
    Distribution,
    EvAnd,
    EvEq,
    EvNot,
    EvTrue,
    ExpansionCapExceeded,
    IVar,
    Mul,
    Neg,
    NonPropositionalAtom,
    Not,
    Or,
    Prob,
    Prod,
    QbfInstance,
    Sum,
    TooLarge,
    UnboundVariable,
    UnknownVariable,
    Var,
    children,
    resolve_index,
)

DEFAULT_CAP = 1 << 20
QBF_LIMIT = 24


def expansion_cost(node, _memo=None) -> int:
    """Upper estimate of binder-body evaluations needed without memoization."""
    memo = {} if _memo is None else _memo
    key = id(node)
    if key in memo:
        return memo[key]
    if isinstance(node, (Sum, Prod)):
        cost = node.size * (1 + expansion_cost(node.body, memo))
    else:
        cost = sum(expansion_cost(c, memo) for c in children(node))
    memo[key] = cost
    return cost


def _check_cap(node, cap):
    cost = expansion_cost(node)
    if cost > cap:
        raise ExpansionCapExceeded(f"estimated {cost} binder expansions exceed cap {cap}")


class _Evaluator:
    def __init__(self, assignment: Mapping, dist: Distribution | None):
        self.assignment = assignment
        self.dist = dist
        self.memo: dict = {}
        self.names: dict = {}
        self.event_cache: dict = {}

    def referenced(self, node) -> frozenset:
        key = id(node)
        got = self.names.get(key)
        if got is None:
            if isinstance(node, Var):
                got = frozenset([node.name])
            elif isinstance(node, EvEq):
                got = frozenset([node.value]) if isinstance(node.value, str) else frozenset()
            else:
                got = frozenset().union(*[self.referenced(c) for c in children(node)]) if children(node) else frozenset()
            self.names[key] = got
        return got

    def lookup(self, name: str, env: dict) -> Fraction:
        if name in env:
            return Fraction(env[name])
        try:
            return Fraction(self.assignment[name])
        except KeyError:
            raise UnboundVariable(f"no value for variable {name!r}") from None

    def term(self, t, env: dict) -> Fraction:
        if isinstance(t, Const):
            return t.value
        if isinstance(t, Var):
            return self.lookup(t.name, env)
        if isinstance(t, Add):
            return self.term(t.left, env) + self.term(t.right, env)
        if isinstance(t, Mul):
            left = self.term(t.left, env)
            if left == 0:
                return left
            return left * self.term(t.right, env)
        if isinstance(t, Neg):
            return -self.term(t.arg, env)
        if isinstance(t, (Sum, Prod)):
            used = self.referenced(t)
            key = (id(t), tuple(sorted((b, v) for b, v in env.items() if b in used)))
            if key in self.memo:
                return self.memo[key]
            inner = dict(env)
            if isinstance(t, Sum):
                acc = Fraction(0)
                for v in range(t.size):
                    inner[t.binder] = v
                    acc += self.term(t.body, inner)
            else:
                acc = Fraction(1)
                for v in range(t.size):
                    inner[t.binder] = v
                    acc *= self.term(t.body, inner)
                    if acc == 0:
                        break
            self.memo[key] = acc
            return acc
        if isinstance(t, IVar):
            try:
                name = resolve_index(t, env)
            except ValueError as exc:
                raise UnboundVariable(str(exc)) from None
            return self.lookup(name, {})
        if isinstance(t, Prob):
            return self.prob(t.event, env)
        raise TypeError(f"not a term: {type(t).__name__}")

    def prob(self, event, env) -> Fraction:
        if self.dist is None:
            raise UnknownVariable("probability term evaluated without a distribution")
        pred = self.compile_event(event, env)
        return sum((m for key, m in self.dist.entries.items() if pred(key)), Fraction(0))

    def compile_event(self, e, env):
        dist = self.dist
        if isinstance(e, EvTrue):
            return lambda key: True
        if isinstance(e, EvEq):
            if e.var not in dist.variables:
                raise UnknownVariable(f"event variable {e.var!r} not in the distribution")
            pos = dist.variables.index(e.var)
            if isinstance(e.value, str):
                if e.value not in env:
                    raise UnboundVariable(f"event value {e.value!r} is not a bound summation variable")
                value = env[e.value]
            else:
                value = e.value
            return lambda key: key[pos] == value
        if isinstance(e, EvNot):
            inner = self.compile_event(e.arg, env)
            return lambda key: not inner(key)
        if isinstance(e, EvAnd):
            left = self.compile_event(e.left, env)
            right = self.compile_event(e.right, env)
            return lambda key: left(key) and right(key)
        raise TypeError(f"not an event: {type(e).__name__}")

    def formula(self, f, env: dict) -> bool:
        if isinstance(f, Atom):
            lhs = self.term(f.lhs, env)
            rhs = self.term(f.rhs, env)
            if f.op == "<":
                return lhs < rhs
            if f.op == "<=":
                return lhs <= rhs
            return lhs == rhs
        if isinstance(f, Not):
            return not self.formula(f.arg, env)
        if isinstance(f, And):
            return self.formula(f.left, env) and self.formula(f.right, env)
        if isinstance(f, Or):
            return self.formula(f.left, env) or self.formula(f.right, env)
        raise TypeError(f"not a formula: {type(f).__name__}")


def eval_term(t, assignment: Mapping | None = None, cap: int = DEFAULT_CAP, dist: Distribution | None = None) -> Fraction:
    _check_cap(t, cap)
    return _Evaluator(assignment or {}, dist).term(t, {})


def eval_formula(f, assignment: Mapping | None = None, cap: int = DEFAULT_CAP) -> bool:
    _check_cap(f, cap)
    return _Evaluator(assignment or {}, None).formula(f, {})


def eval_prob_term(t, dist: Distribution, cap: int = DEFAULT_CAP) -> Fraction:
    _check_cap(t, cap)
    return _Evaluator({}, dist).term(t, {})


def eval_prob_formula(f, dist: Distribution, cap: int = DEFAULT_CAP) -> bool:
    _check_cap(f, cap)
    return _Evaluator({}, dist).formula(f, {})


def _qbf_matrix(f, values: dict) -> bool:
    if isinstance(f, Atom):
        if (
            f.op == "="
            and isinstance(f.lhs, Var)
            and isinstance(f.rhs, Const)
            and f.rhs.value == 1
        ):
            return values[f.lhs.name] == 1
        raise NonPropositionalAtom(f"matrix atom is not of the form x = 1: {f}")
    if isinstance(f, Not):
        return not _qbf_matrix(f.arg, values)
    if isinstance(f, And):
        return _qbf_matrix(f.left, values) and _qbf_matrix(f.right, values)
    if isinstance(f, Or):
        return _qbf_matrix(f.left, values) or _qbf_matrix(f.right, values)
    raise TypeError(f"not a formula: {type(f).__name__}")


def eval_qbf(q: QbfInstance) -> bool:
    """Truth of a QBF by recursion over the prefix."""
    if len(q.prefix) > QBF_LIMIT:
        raise TooLarge(f"{len(q.prefix)} quantifiers exceed the limit of {QBF_LIMIT}")

    def go(i: int, values: dict) -> bool:
        if i == len(q.prefix):
            return _qbf_matrix(q.matrix, values)
        quant, name = q.prefix[i]
        results = []
        for bit in (0, 1):
            values[name] = bit
            results.append(go(i + 1, values))
        del values[name]
        return all(results) if quant == "A" else any(results)

    return go(0, {})


def support_size(dist: Distribution) -> int:
    return sum(1 for m in dist.entries.values() if m > 0)


def check_small_model(dist: Distribution, p: int) -> bool:
    return support_size(dist) <= p


def eval_emajsat(inst) -> bool:
    """Direct count: some x makes at least half of the y assignments satisfy the matrix."""
    nx, ny = len(inst.x_vars), len(inst.y_vars)
    if nx + ny > QBF_LIMIT:
        raise TooLarge(f"{nx + ny} variables exceed the limit of {QBF_LIMIT}")
    for xs in itertools.product((0, 1), repeat=nx):
        values = dict(zip(inst.x_vars, xs))
        count = 0
        for ys in itertools.product((0, 1), repeat=ny):
            values.update(zip(inst.y_vars, ys))
            count += _qbf_matrix(inst.matrix, values)
        if 2 * count >= 2 ** ny:
            return True
    return False
