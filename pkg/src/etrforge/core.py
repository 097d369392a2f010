"""Shared ASTs, exact values, instances and substitution machinery.

Every value here is immutable.  Rationals are :class:`fractions.Fraction`;
arithmetic terms, Boolean formulas and probabilistic terms share one node
family so that passes can move between dialects without converting trees.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Rational = Fraction
Assignment = Mapping[str, Fraction]


# ---------------------------------------------------------------------------
# errors


class EtrError(Exception):
    code = "ERROR"


class DialectViolation(EtrError):
    code = "DIALECT_VIOLATION"

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "dialect violation")


class ExpansionCapExceeded(EtrError):
    code = "EXPANSION_CAP_EXCEEDED"


class UnboundVariable(EtrError):
    code = "UNBOUND_VARIABLE"


class UnknownVariable(EtrError):
    code = "UNKNOWN_VARIABLE"


class TooLarge(EtrError):
    code = "TOO_LARGE"


class IllFormed(EtrError):
    code = "ILL_FORMED"


class MalformedOpcode(EtrError):
    code = "MALFORMED_OPCODE"


class MissingTable(EtrError):
    code = "MISSING_TABLE"


class KindMismatch(EtrError):
    code = "KIND_MISMATCH"


class Undecidable(EtrError):
    code = "UNDECIDABLE_BY_THIS_BACKEND"


class NotNormalized(EtrError):
    code = "NOT_NORMALIZED"


class UnsupportedAtom(EtrError):
    code = "UNSUPPORTED_ATOM"


class NonPropositionalAtom(EtrError):
    code = "NON_PROPOSITIONAL_ATOM"


class ValueOutOfDomain(EtrError):
    code = "VALUE_OUT_OF_DOMAIN"


class WidthMismatch(EtrError):
    code = "WIDTH_MISMATCH"


class NonIntegerConstant(EtrError):
    code = "NON_INTEGER_CONSTANT"


# ---------------------------------------------------------------------------
# arithmetic terms


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class IVar:
    """Indexed variable ``base<index...>``; each index term must be 0 or 1."""

    base: str
    index: tuple


@dataclass(frozen=True)
class Neg:
    arg: "Term"


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Mul:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sum:
    binder: str
    size: int
    body: "Term"


@dataclass(frozen=True)
class Prod:
    binder: str
    size: int
    body: "Term"


# events and basic probability terms


@dataclass(frozen=True)
class EvTrue:
    pass


@dataclass(frozen=True)
class EvEq:
    """Atomic event ``var = value``; value is an int or a Σ-binder name."""

    var: str
    value: Union[int, str]


@dataclass(frozen=True)
class EvNot:
    arg: "Event"


@dataclass(frozen=True)
class EvAnd:
    left: "Event"
    right: "Event"


@dataclass(frozen=True)
class Prob:
    event: "Event"


Term = Union[Const, Var, IVar, Neg, Add, Mul, Sum, Prod, Prob]
Event = Union[EvTrue, EvEq, EvNot, EvAnd]
TERM_TYPES = (Const, Var, IVar, Neg, Add, Mul, Sum, Prod, Prob)
EVENT_TYPES = (EvTrue, EvEq, EvNot, EvAnd)


# Boolean formulas

COMPARISONS = ("<", "<=", "=")


@dataclass(frozen=True)
class Atom:
    op: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.op not in COMPARISONS:
            raise ValueError(f"unknown comparison {self.op!r}")


@dataclass(frozen=True)
class Not:
    arg: "BoolFormula"


@dataclass(frozen=True)
class And:
    left: "BoolFormula"
    right: "BoolFormula"


@dataclass(frozen=True)
class Or:
    left: "BoolFormula"
    right: "BoolFormula"


BoolFormula = Union[Atom, Not, And, Or]
FORMULA_TYPES = (Atom, Not, And, Or)

ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def const(value) -> Const:
    return Const(Fraction(value))


def sub(a: Term, b: Term) -> Term:
    return Add(a, Neg(b))


def one_minus(t: Term) -> Term:
    return Add(ONE, Neg(t))


def square(t: Term) -> Term:
    return Mul(t, t)


def add_all(terms: Iterable[Term]) -> Term:
    terms = list(terms)
    if not terms:
        return ZERO
    acc = terms[0]
    for t in terms[1:]:
        acc = Add(acc, t)
    return acc


def mul_all(terms: Iterable[Term]) -> Term:
    terms = list(terms)
    if not terms:
        return ONE
    acc = terms[0]
    for t in terms[1:]:
        acc = Mul(acc, t)
    return acc


def and_all(formulas: Iterable[BoolFormula]) -> BoolFormula:
    formulas = list(formulas)
    if not formulas:
        return Atom("=", ZERO, ZERO)
    acc = formulas[0]
    for f in formulas[1:]:
        acc = And(acc, f)
    return acc


def or_all(formulas: Iterable[BoolFormula]) -> BoolFormula:
    formulas = list(formulas)
    if not formulas:
        return Atom("<", ONE, ZERO)
    acc = formulas[0]
    for f in formulas[1:]:
        acc = Or(acc, f)
    return acc


def conjuncts(f: BoolFormula) -> list:
    """Flatten the top-level And spine."""
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out


def ivar_name(base: str, bits: Iterable[int]) -> str:
    """Canonical direct name of an indexed variable, e.g. ``x[01]``."""
    return f"{base}[{''.join(str(int(b)) for b in bits)}]"


def children(node) -> tuple:
    if isinstance(node, (Neg, Not, EvNot)):
        return (node.arg,)
    if isinstance(node, (Add, Mul, And, Or, EvAnd)):
        return (node.left, node.right)
    if isinstance(node, Atom):
        return (node.lhs, node.rhs)
    if isinstance(node, (Sum, Prod)):
        return (node.body,)
    if isinstance(node, IVar):
        return node.index
    if isinstance(node, Prob):
        return (node.event,)
    return ()


def walk(node) -> Iterator:
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))


def node_count(node) -> int:
    return sum(1 for _ in walk(node))


# ---------------------------------------------------------------------------
# dialects and instances


class Dialect(enum.Enum):
    ETR = "etr"
    SIGMA = "sigma-etr"
    PI = "pi-etr"
    SIGMA_PI = "sigma-pi-etr"
    SIGMA_VI = "sigma-vi-etr"
    SIGMA_VI_1 = "sigma-vi-etr-1"
    SIGMA_HALF = "sigma-etr-half"

    @property
    def allows_sum(self) -> bool:
        return self not in (Dialect.ETR, Dialect.PI)

    @property
    def allows_prod(self) -> bool:
        return self in (Dialect.PI, Dialect.SIGMA_PI)

    @property
    def allows_indexing(self) -> bool:
        return self in (Dialect.SIGMA_VI, Dialect.SIGMA_VI_1)

    @property
    def l1_bound(self):
        if self is Dialect.SIGMA_VI_1:
            return Fraction(1)
        if self is Dialect.SIGMA_HALF:
            return Fraction(1, 2)
        return None


@dataclass(frozen=True)
class EtrInstance:
    dialect: Dialect
    formula: BoolFormula
    variables: tuple | None = None
    candidates: Mapping[str, tuple] = field(default_factory=dict)

    def free_variables(self) -> frozenset:
        names = free_vars(self.formula)
        if self.variables is not None:
            names = names | frozenset(self.variables)
        return names


@dataclass(frozen=True)
class QbfInstance:
    """Prenex QBF; quantifiers are ``"A"`` (for all) or ``"E"`` (exists)."""

    prefix: tuple
    matrix: BoolFormula

    def __post_init__(self):
        bound = [v for _, v in self.prefix]
        if len(bound) != len(set(bound)):
            raise ValueError("variable quantified twice")
        for q, _ in self.prefix:
            if q not in ("A", "E"):
                raise ValueError(f"unknown quantifier {q!r}")
        missing = free_vars(self.matrix) - set(bound)
        if missing:
            raise ValueError(f"unbound matrix variables: {sorted(missing)}")


@dataclass(frozen=True)
class EMajSatInstance:
    """∃x: #{y : φ(x, y)} ≥ 2^(|y|-1)."""

    x_vars: tuple
    y_vars: tuple
    matrix: BoolFormula


@dataclass(frozen=True)
class ProbInstance:
    """A probabilistic formula with its random variables and value domain.

    ``support_bound`` is the unary parameter of the small-model problem;
    ``None`` means no support restriction.
    """

    formula: BoolFormula
    variables: tuple
    c: int
    support_bound: int | None = None


@dataclass(frozen=True)
class Distribution:
    variables: tuple
    c: int
    entries: Mapping[tuple, Fraction]

    def __post_init__(self):
        if self.c < 2:
            raise ValueError("domain size must be at least 2")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate distribution variables")
        clean = {}
        total = Fraction(0)
        for key, mass in self.entries.items():
            key = tuple(int(v) for v in key)
            mass = Fraction(mass)
            if len(key) != len(self.variables):
                raise ValueError(f"tuple {key} has wrong length")
            if any(v < 0 or v >= self.c for v in key):
                raise ValueError(f"tuple {key} outside the value domain")
            if mass < 0:
                raise ValueError(f"negative mass at {key}")
            if key in clean:
                raise ValueError(f"duplicate tuple {key}")
            total += mass
            if mass:
                clean[key] = mass
        if total != 1:
            raise ValueError(f"masses sum to {total}, not 1")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def mass(self, key) -> Fraction:
        return self.entries.get(tuple(key), Fraction(0))

    @property
    def support(self) -> list:
        return list(self.entries)

    def reordered(self, order) -> "Distribution":
        order = tuple(order)
        if sorted(order) != sorted(self.variables):
            raise ValueError("order must permute the distribution variables")
        pos = [self.variables.index(v) for v in order]
        return Distribution(order, self.c, {tuple(k[p] for p in pos): m for k, m in self.entries.items()})


WITNESS_KINDS = ("assignment", "distribution", "eso-tables")


@dataclass(frozen=True)
class Witness:
    kind: str
    payload: object
    note: str = ""

    def __post_init__(self):
        if self.kind not in WITNESS_KINDS:
            raise ValueError(f"unknown witness kind {self.kind!r}")
        if self.kind == "distribution" and not isinstance(self.payload, Distribution):
            raise TypeError("distribution witness needs a Distribution payload")
        if self.kind in ("assignment", "eso-tables") and not isinstance(self.payload, Mapping):
            raise TypeError(f"{self.kind} witness needs a mapping payload")


def assignment_witness(values: Mapping, note: str = "") -> Witness:
    return Witness("assignment", {k: Fraction(v) for k, v in values.items()}, note)


@dataclass(frozen=True)
class BoundParameters:
    """Parameters of the solution-distance bound.

    ``c`` is an absolute constant with no known explicit value; the
    default of 1 is a placeholder and does not yield a sound bound.
    """

    L: int
    d: int
    n: int
    c: int = 1


# ---------------------------------------------------------------------------
# substitution


def substitute(t, binder: str, value: int):
    """Replace every occurrence of ``binder`` (also inside indices and events) by ``value``."""
    if isinstance(t, Var):
        return Const(Fraction(value)) if t.name == binder else t
    if isinstance(t, Const):
        return t
    if isinstance(t, IVar):
        return IVar(t.base, tuple(substitute(i, binder, value) for i in t.index))
    if isinstance(t, Neg):
        return Neg(substitute(t.arg, binder, value))
    if isinstance(t, Add):
        return Add(substitute(t.left, binder, value), substitute(t.right, binder, value))
    if isinstance(t, Mul):
        return Mul(substitute(t.left, binder, value), substitute(t.right, binder, value))
    if isinstance(t, (Sum, Prod)):
        if t.binder == binder:
            return t
        return type(t)(t.binder, t.size, substitute(t.body, binder, value))
    if isinstance(t, Prob):
        return Prob(_substitute_event(t.event, binder, value))
    if isinstance(t, Atom):
        return Atom(t.op, substitute(t.lhs, binder, value), substitute(t.rhs, binder, value))
    if isinstance(t, Not):
        return Not(substitute(t.arg, binder, value))
    if isinstance(t, (And, Or)):
        return type(t)(substitute(t.left, binder, value), substitute(t.right, binder, value))
    raise TypeError(f"cannot substitute into {type(t).__name__}")


def _substitute_event(e, binder, value):
    if isinstance(e, EvEq):
        return EvEq(e.var, int(value)) if e.value == binder else e
    if isinstance(e, EvNot):
        return EvNot(_substitute_event(e.arg, binder, value))
    if isinstance(e, EvAnd):
        return EvAnd(_substitute_event(e.left, binder, value), _substitute_event(e.right, binder, value))
    return e


def rename_var(t, old: str, new_term):
    """Replace the free variable ``old`` by ``new_term`` (capture-avoiding by construction)."""
    if isinstance(t, Var):
        return new_term if t.name == old else t
    if isinstance(t, (Const, Prob)):
        return t
    if isinstance(t, IVar):
        return IVar(t.base, tuple(rename_var(i, old, new_term) for i in t.index))
    if isinstance(t, Neg):
        return Neg(rename_var(t.arg, old, new_term))
    if isinstance(t, (Add, Mul)):
        return type(t)(rename_var(t.left, old, new_term), rename_var(t.right, old, new_term))
    if isinstance(t, (Sum, Prod)):
        if t.binder == old:
            return t
        return type(t)(t.binder, t.size, rename_var(t.body, old, new_term))
    raise TypeError(f"cannot rename inside {type(t).__name__}")


def map_atoms(f: BoolFormula, fn) -> BoolFormula:
    """Rebuild ``f`` with every Atom replaced by ``fn(atom)`` (which may return any formula)."""
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, (And, Or)):
        return type(f)(map_atoms(f.left, fn), map_atoms(f.right, fn))
    raise TypeError(f"not a formula: {type(f).__name__}")


def atoms(f: BoolFormula) -> list:
    return [n for n in walk(f) if isinstance(n, Atom)]


# ---------------------------------------------------------------------------
# free variables


def _index_value(t, env: Mapping[str, int]) -> Fraction:
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        if t.name not in env:
            raise UnboundVariable(f"index refers to unbound {t.name!r}")
        return Fraction(env[t.name])
    if isinstance(t, Neg):
        return -_index_value(t.arg, env)
    if isinstance(t, Add):
        return _index_value(t.left, env) + _index_value(t.right, env)
    if isinstance(t, Mul):
        return _index_value(t.left, env) * _index_value(t.right, env)
    raise UnboundVariable(f"unsupported index term {type(t).__name__}")


def resolve_index(iv: IVar, env: Mapping[str, int]) -> str:
    bits = []
    for term in iv.index:
        value = _index_value(term, env)
        if value not in (0, 1):
            raise ValueError(f"index of {iv.base} evaluates to {value}, not a bit")
        bits.append(int(value))
    return ivar_name(iv.base, bits)


def _names_in(t) -> set:
    return {n.name for n in walk(t) if isinstance(n, Var)}


def free_vars(expr) -> frozenset:
    """Names of variables not captured by any binder; indexed ones are resolved."""
    out: set = set()
    _free(expr, {}, out)
    return frozenset(out)


def _free(node, bound: dict, out: set):
    if isinstance(node, Var):
        if node.name not in bound:
            out.add(node.name)
    elif isinstance(node, IVar):
        used = sorted(n for n in set().union(*[_names_in(i) for i in node.index]) if n in bound) if node.index else []
        unbound = set().union(*[_names_in(i) for i in node.index]) - set(bound) if node.index else set()
        if unbound:
            raise UnboundVariable(f"index of {node.base} refers to free {sorted(unbound)}")
        for values in itertools.product(*[range(bound[n]) for n in used]):
            out.add(resolve_index(node, dict(zip(used, values))))
    elif isinstance(node, (Sum, Prod)):
        inner = dict(bound)
        inner[node.binder] = node.size
        _free(node.body, inner, out)
    elif isinstance(node, Prob):
        pass
    else:
        for c in children(node):
            _free(c, bound, out)


def binders_in(expr) -> set:
    return {n.binder for n in walk(expr) if isinstance(n, (Sum, Prod))}


def all_names(expr) -> set:
    """Every identifier used anywhere (variables, bases, binders, event variables)."""
    names = set()
    for n in walk(expr):
        if isinstance(n, Var):
            names.add(n.name)
        elif isinstance(n, IVar):
            names.add(n.base)
        elif isinstance(n, (Sum, Prod)):
            names.add(n.binder)
        elif isinstance(n, EvEq):
            names.add(n.var)
            if isinstance(n.value, str):
                names.add(n.value)
    return names


def fresh_name(prefix: str, used: set) -> str:
    if prefix not in used:
        used.add(prefix)
        return prefix
    for k in itertools.count(1):
        name = f"{prefix}{k}"
        if name not in used:
            used.add(name)
            return name
    raise AssertionError


# ---------------------------------------------------------------------------
# dialect validation


@dataclass(frozen=True)
class Violation:
    path: str
    rule: str

    def __str__(self):
        return f"{self.path}: {self.rule}"


def validate_dialect(inst: EtrInstance) -> list:
    """Return the list of dialect violations of ``inst`` (empty means ok)."""
    dialect = inst.dialect
    found: list = []

    def visit(node, path, sums: dict, binders: set):
        if isinstance(node, Atom):
            visit(node.lhs, path + ".lhs", sums, binders)
            visit(node.rhs, path + ".rhs", sums, binders)
        elif isinstance(node, Not):
            visit(node.arg, path + ".arg", sums, binders)
        elif isinstance(node, (And, Or)):
            visit(node.left, path + ".left", sums, binders)
            visit(node.right, path + ".right", sums, binders)
        elif isinstance(node, (Const, Var)):
            pass
        elif isinstance(node, Neg):
            visit(node.arg, path + ".arg", sums, binders)
        elif isinstance(node, (Add, Mul)):
            visit(node.left, path + ".left", sums, binders)
            visit(node.right, path + ".right", sums, binders)
        elif isinstance(node, (Sum, Prod)):
            kind = "sum" if isinstance(node, Sum) else "prod"
            if kind == "sum" and not dialect.allows_sum:
                found.append(Violation(path, f"summation not allowed in {dialect.value}"))
            if kind == "prod" and not dialect.allows_prod:
                found.append(Violation(path, f"product not allowed in {dialect.value}"))
            if node.size != 2:
                found.append(Violation(path, f"binder range must be {{0,1}}, got size {node.size}"))
            if node.binder in binders:
                found.append(Violation(path, f"binder {node.binder!r} shadows an enclosing binder"))
            inner_sums = dict(sums)
            if kind == "sum":
                inner_sums[node.binder] = node.size
            else:
                inner_sums.pop(node.binder, None)
            visit(node.body, path + ".body", inner_sums, binders | {node.binder})
        elif isinstance(node, IVar):
            if not dialect.allows_indexing:
                found.append(Violation(path, f"indexed variable {node.base} not allowed in {dialect.value}"))
                return
            names = set().union(*[_names_in(i) for i in node.index]) if node.index else set()
            loose = sorted(n for n in names if n not in sums)
            if loose:
                found.append(Violation(path, f"index of {node.base} uses {loose}, not bound by a summation"))
                return
            used = sorted(names)
            try:
                for values in itertools.product(*[range(sums[n]) for n in used]):
                    resolve_index(node, dict(zip(used, values)))
            except (ValueError, UnboundVariable) as exc:
                found.append(Violation(path, str(exc)))
        elif isinstance(node, Prob):
            found.append(Violation(path, "probability term in a real-arithmetic instance"))
        else:
            found.append(Violation(path, f"unexpected node {type(node).__name__}"))

    visit(inst.formula, "formula", {}, set())
    return found


def check_dialect(inst: EtrInstance) -> EtrInstance:
    violations = validate_dialect(inst)
    if violations:
        raise DialectViolation(violations)
    return inst


# ---------------------------------------------------------------------------
# constant lowering


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def clear_denominators_term(t: Term):
    """Return ``(t2, s)`` with ``s`` a positive integer and ``t2 = s*t`` free of fractional constants."""
    if isinstance(t, Const):
        return Const(Fraction(t.value.numerator)), t.value.denominator
    if isinstance(t, (Var, IVar)):
        return t, 1
    if isinstance(t, Neg):
        a, s = clear_denominators_term(t.arg)
        return Neg(a), s
    if isinstance(t, Add):
        a, sa = clear_denominators_term(t.left)
        b, sb = clear_denominators_term(t.right)
        if sa == sb:
            return Add(a, b), sa
        return Add(_scale(a, sb), _scale(b, sa)), sa * sb
    if isinstance(t, Mul):
        a, sa = clear_denominators_term(t.left)
        b, sb = clear_denominators_term(t.right)
        return Mul(a, b), sa * sb
    if isinstance(t, Sum):
        a, s = clear_denominators_term(t.body)
        return Sum(t.binder, t.size, a), s
    if isinstance(t, Prod):
        a, s = clear_denominators_term(t.body)
        return Prod(t.binder, t.size, a), s ** t.size
    raise TypeError(f"cannot clear denominators in {type(t).__name__}")


def _scale(t: Term, k: int) -> Term:
    return t if k == 1 else Mul(Const(Fraction(k)), t)


def clear_denominators(f: BoolFormula) -> BoolFormula:
    """Multiply each atom through by positive integers so all constants are integers."""

    def fix(atom: Atom):
        lhs, sl = clear_denominators_term(atom.lhs)
        rhs, sr = clear_denominators_term(atom.rhs)
        if sl == 1 and sr == 1:
            return Atom(atom.op, lhs, rhs)
        return Atom(atom.op, _scale(lhs, sr), _scale(rhs, sl))

    return map_atoms(f, fix)


def integer_chain(k: int) -> Term:
    """Term over the constants 0 and 1 only, of size O(log k), evaluating to ``k``."""
    if k < 0:
        return Neg(integer_chain(-k))
    if k == 0:
        return ZERO
    acc: Term = ONE
    two = Add(ONE, ONE)
    for bit in bin(k)[3:]:
        acc = Mul(two, acc)
        if bit == "1":
            acc = Add(acc, ONE)
    return acc


def lower_constants_term(t: Term) -> Term:
    """Replace integer constants other than 0 and 1 by doubling chains."""
    if isinstance(t, Const):
        if t.value.denominator != 1:
            raise NonIntegerConstant(f"constant {t.value} is not an integer")
        if t.value in (0, 1):
            return t
        return integer_chain(int(t.value))
    if isinstance(t, (Var, IVar, Prob)):
        return t
    if isinstance(t, Neg):
        return Neg(lower_constants_term(t.arg))
    if isinstance(t, (Add, Mul)):
        return type(t)(lower_constants_term(t.left), lower_constants_term(t.right))
    if isinstance(t, (Sum, Prod)):
        return type(t)(t.binder, t.size, lower_constants_term(t.body))
    raise TypeError(type(t).__name__)


def lower_constants(f: BoolFormula) -> BoolFormula:
    """Rewrite ``f`` so that its only constants are 0 and 1."""
    f = clear_denominators(f)
    return map_atoms(f, lambda a: Atom(a.op, lower_constants_term(a.lhs), lower_constants_term(a.rhs)))


def validate_prob(inst: ProbInstance, mixed: bool = False) -> list:
    """Violations of the probabilistic term language.

    With ``mixed`` the normalized intermediate form is accepted too: rational
    constants and summation variables may appear as arithmetic leaves.
    """
    found: list = []
    names = set(inst.variables)

    def event(e, path, binders):
        if isinstance(e, EvTrue):
            return
        if isinstance(e, EvEq):
            if e.var not in names:
                found.append(Violation(path, f"unknown random variable {e.var!r}"))
            if isinstance(e.value, str):
                if e.value not in binders:
                    found.append(Violation(path, f"event value {e.value!r} is not a bound summation variable"))
            elif not 0 <= e.value < inst.c:
                found.append(Violation(path, f"value {e.value} outside 0..{inst.c - 1}"))
        elif isinstance(e, EvNot):
            event(e.arg, path + ".arg", binders)
        elif isinstance(e, EvAnd):
            event(e.left, path + ".left", binders)
            event(e.right, path + ".right", binders)
        else:
            found.append(Violation(path, f"unexpected event node {type(e).__name__}"))

    def term(t, path, binders):
        if isinstance(t, Prob):
            event(t.event, path + ".event", binders)
        elif isinstance(t, (Add, Mul)):
            term(t.left, path + ".left", binders)
            term(t.right, path + ".right", binders)
        elif isinstance(t, Neg):
            term(t.arg, path + ".arg", binders)
        elif isinstance(t, Sum):
            if not 2 <= t.size <= inst.c:
                found.append(Violation(path, f"summation range {t.size} outside 2..{inst.c}"))
            if t.binder in binders:
                found.append(Violation(path, f"binder {t.binder!r} shadows an enclosing binder"))
            term(t.body, path + ".body", binders | {t.binder})
        elif mixed and isinstance(t, Const):
            pass
        elif mixed and isinstance(t, Var) and t.name in binders:
            pass
        else:
            found.append(Violation(path, f"{type(t).__name__} not allowed in a probabilistic term"))

    def formula(f, path):
        if isinstance(f, Atom):
            term(f.lhs, path + ".lhs", frozenset())
            term(f.rhs, path + ".rhs", frozenset())
        elif isinstance(f, Not):
            formula(f.arg, path + ".arg")
        elif isinstance(f, (And, Or)):
            formula(f.left, path + ".left")
            formula(f.right, path + ".right")
        else:
            found.append(Violation(path, f"unexpected node {type(f).__name__}"))

    formula(inst.formula, "formula")
    return found


def check_prob(inst: ProbInstance, mixed: bool = False) -> ProbInstance:
    violations = validate_prob(inst, mixed)
    if violations:
        raise DialectViolation(violations)
    return inst
