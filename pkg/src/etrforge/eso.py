"""Existential second-order sentences over finite structures with real-valued functions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .core import MissingTable, TooLarge, UnboundVariable

# real terms


@dataclass(frozen=True)
class FConst:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class FApp:
    fn: str
    args: tuple = ()


@dataclass(frozen=True)
class FAdd:
    left: "RealTerm"
    right: "RealTerm"


@dataclass(frozen=True)
class FSub:
    left: "RealTerm"
    right: "RealTerm"


@dataclass(frozen=True)
class FMul:
    left: "RealTerm"
    right: "RealTerm"


@dataclass(frozen=True)
class FSum:
    var: str
    body: "RealTerm"


RealTerm = Union[FConst, FApp, FAdd, FSub, FMul, FSum]

# formulas


@dataclass(frozen=True)
class VarEq:
    left: str
    right: str
    negated: bool = False


@dataclass(frozen=True)
class Cmp:
    op: str
    lhs: RealTerm
    rhs: RealTerm
    negated: bool = False

    def __post_init__(self):
        if self.op not in ("<", "<=", "="):
            raise ValueError(f"unknown comparison {self.op!r}")


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple
    negated: bool = False


@dataclass(frozen=True)
class EAnd:
    left: "EsoFormula"
    right: "EsoFormula"


@dataclass(frozen=True)
class EOr:
    left: "EsoFormula"
    right: "EsoFormula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "EsoFormula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "EsoFormula"


@dataclass(frozen=True)
class ExistsF:
    fn: str
    arity: int
    body: "EsoFormula"


EsoFormula = Union[VarEq, Cmp, Rel, EAnd, EOr, Exists, Forall, ExistsF]


@dataclass(frozen=True)
class EsoSentence:
    """A sentence plus the closed range [lo, hi] of quantified functions (None: all reals)."""

    formula: EsoFormula
    range: tuple | None = None


@dataclass(frozen=True)
class FiniteStructure:
    domain: tuple
    functions: Mapping[str, tuple] = field(default_factory=dict)
    relations: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise ValueError("the domain must be non-empty")
        for name, (arity, table) in self.functions.items():
            for key in itertools.product(self.domain, repeat=arity):
                if key not in table:
                    raise ValueError(f"function {name} has no value at {key}")
        for name, (arity, rows) in self.relations.items():
            for row in rows:
                if len(row) != arity:
                    raise ValueError(f"relation {name} has a tuple of the wrong arity")


@dataclass(frozen=True)
class EsoInstance:
    """Model-checking instance: does the structure satisfy the sentence?"""

    sentence: EsoSentence
    structure: FiniteStructure


def and_chain(parts):
    parts = list(parts)
    acc = parts[0]
    for p in parts[1:]:
        acc = EAnd(acc, p)
    return acc


def forall_chain(names, body):
    for v in reversed(list(names)):
        body = Forall(v, body)
    return body


def second_order_prefix(formula) -> list:
    """(name, arity) of every ∃f in the sentence."""
    out = []
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, ExistsF):
            out.append((f.fn, f.arity))
            stack.append(f.body)
        elif isinstance(f, (EAnd, EOr)):
            stack.extend([f.right, f.left])
        elif isinstance(f, (Exists, Forall)):
            stack.append(f.body)
    return out


def max_arity(formula) -> int:
    best = 0
    stack = [formula]
    while stack:
        f = stack.pop()
        if isinstance(f, ExistsF):
            best = max(best, f.arity)
            stack.append(f.body)
        elif isinstance(f, (EAnd, EOr)):
            stack.extend([f.left, f.right])
        elif isinstance(f, (Exists, Forall)):
            stack.append(f.body)
    return best


def quantifier_depth(f) -> int:
    if isinstance(f, (Exists, Forall)):
        return 1 + quantifier_depth(f.body)
    if isinstance(f, ExistsF):
        return quantifier_depth(f.body)
    if isinstance(f, (EAnd, EOr)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 0


class _Checker:
    def __init__(self, structure: FiniteStructure, tables: Mapping):
        self.structure = structure
        self.tables = tables

    def fn(self, name, key):
        if name in self.tables:
            table = self.tables[name]
        elif name in self.structure.functions:
            table = self.structure.functions[name][1]
        else:
            raise MissingTable(f"no table for function {name!r}")
        try:
            return Fraction(table[key])
        except KeyError:
            raise MissingTable(f"function {name!r} has no value at {key}") from None

    def term(self, t, s):
        if isinstance(t, FConst):
            return t.value
        if isinstance(t, FApp):
            try:
                key = tuple(s[a] for a in t.args)
            except KeyError as exc:
                raise UnboundVariable(f"first-order variable {exc.args[0]!r} is unbound") from None
            return self.fn(t.fn, key)
        if isinstance(t, FAdd):
            return self.term(t.left, s) + self.term(t.right, s)
        if isinstance(t, FSub):
            return self.term(t.left, s) - self.term(t.right, s)
        if isinstance(t, FMul):
            return self.term(t.left, s) * self.term(t.right, s)
        if isinstance(t, FSum):
            total = Fraction(0)
            for a in self.structure.domain:
                total += self.term(t.body, {**s, t.var: a})
            return total
        raise TypeError(f"not a real term: {type(t).__name__}")

    def holds(self, f, s) -> bool:
        if isinstance(f, VarEq):
            return (s[f.left] == s[f.right]) != f.negated
        if isinstance(f, Cmp):
            a, b = self.term(f.lhs, s), self.term(f.rhs, s)
            value = a < b if f.op == "<" else a <= b if f.op == "<=" else a == b
            return value != f.negated
        if isinstance(f, Rel):
            if f.name not in self.structure.relations:
                raise MissingTable(f"structure has no relation {f.name!r}")
            rows = self.structure.relations[f.name][1]
            return (tuple(s[a] for a in f.args) in rows) != f.negated
        if isinstance(f, EAnd):
            return self.holds(f.left, s) and self.holds(f.right, s)
        if isinstance(f, EOr):
            return self.holds(f.left, s) or self.holds(f.right, s)
        if isinstance(f, Exists):
            return any(self.holds(f.body, {**s, f.var: a}) for a in self.structure.domain)
        if isinstance(f, Forall):
            return all(self.holds(f.body, {**s, f.var: a}) for a in self.structure.domain)
        if isinstance(f, ExistsF):
            return self.holds(f.body, s)
        raise TypeError(f"not an ESO formula: {type(f).__name__}")


def eval_eso(sentence: EsoSentence, structure: FiniteStructure, witness, cap: int = 1 << 20) -> bool:
    """Check the sentence with every ∃f symbol interpreted by the witness tables."""
    tables = witness.payload if hasattr(witness, "payload") else witness
    size = len(structure.domain)
    width = max(max_arity(sentence.formula), quantifier_depth(sentence.formula))
    if size ** width > cap:
        raise TooLarge(f"{size}^{width} evaluations exceed the cap {cap}")
    for name, arity in second_order_prefix(sentence.formula):
        if name not in tables:
            raise MissingTable(f"witness has no table for {name!r}")
        table = tables[name]
        for key in itertools.product(structure.domain, repeat=arity):
            if key not in table:
                raise MissingTable(f"table {name!r} has no value at {key}")
            if sentence.range is not None:
                lo, hi = sentence.range
                if not lo <= Fraction(table[key]) <= hi:
                    return False
    return _Checker(structure, tables).holds(sentence.formula, {})
