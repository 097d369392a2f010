"""Passes between real-arithmetic and probabilistic satisfiability."""
from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction

from ..core import (
    ONE,
    ZERO,
    Add,
    Atom,
    Const,
    Dialect,
    Distribution,
    EtrInstance,
    EvAnd,
    EvEq,
    EvNot,
    EvTrue,
    IVar,
    Mul,
    Neg,
    NonIntegerConstant,
    NotNormalized,
    Prob,
    ProbInstance,
    Sum,
    UnsupportedAtom,
    ValueOutOfDomain,
    Var,
    Witness,
    add_all,
    all_names,
    and_all,
    check_dialect,
    check_prob,
    children,
    clear_denominators,
    fresh_name,
    map_atoms,
    mul_all,
    one_minus,
    rename_var,
    square,
    sub,
)
from .base import PassResult

TOP = Prob(EvTrue())
MINUS_ONE = 2  # ternary domain value standing for -1
_CANON = re.compile(r"^(.*)\[([01]*)\]$")


def encode_zero():
    return Prob(EvNot(EvTrue()))


def encode_integer(k: int):
    """Double-and-add over P(⊤); size O(log k)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return encode_zero()
    acc = TOP
    for bit in bin(k)[3:]:
        acc = Mul(Add(TOP, TOP), acc)
        if bit == "1":
            acc = Add(acc, TOP)
    return acc


def _encode_const(value: Fraction):
    if value.denominator != 1:
        raise NonIntegerConstant(f"constant {value} is not an integer")
    k = int(value)
    return Neg(encode_integer(-k)) if k < 0 else encode_integer(k)


def conj(events) -> object:
    events = list(events)
    if not events:
        return EvTrue()
    acc = events[0]
    for e in events[1:]:
        acc = EvAnd(acc, e)
    return acc


def event_conjuncts(e) -> list:
    if isinstance(e, EvAnd):
        return event_conjuncts(e.left) + event_conjuncts(e.right)
    return [e]


# ---------------------------------------------------------------------------
# event arithmetization


def point_indicator(z, c: int):
    """Polynomial in ``z`` that is 1 at z = 0 and 0 at every other integer in -(c-1)..c-1."""
    if c == 2:
        return one_minus(square(z))
    factors = []
    for k in range(-(c - 1), c):
        if k:
            factors.append(Mul(Const(Fraction(-1, k)), Add(z, Const(Fraction(-k)))))
    return mul_all(factors)


def value_indicator(x, v: int, c: int):
    """Polynomial in ``x`` that is 1 at x = v and 0 on the rest of 0..c-1."""
    if not 0 <= v < c:
        raise ValueOutOfDomain(f"value {v} outside 0..{c - 1}")
    if c == 2:
        return one_minus(square(sub(x, Const(v))))
    factors = []
    for u in range(c):
        if u != v:
            factors.append(Mul(Const(Fraction(1, v - u)), Add(x, Const(-u))))
    return mul_all(factors)


def arithmetize_event(event, variables, c: int):
    """0/1 polynomial over Var(X) for each random variable X, equal to the event's indicator."""
    names = set(variables)
    if isinstance(event, EvTrue):
        return ONE
    if isinstance(event, EvEq):
        if event.var not in names:
            raise ValueOutOfDomain(f"unknown random variable {event.var!r}")
        if isinstance(event.value, str):
            return point_indicator(sub(Var(event.var), Var(event.value)), c)
        return value_indicator(Var(event.var), event.value, c)
    if isinstance(event, EvNot):
        return one_minus(arithmetize_event(event.arg, variables, c))
    if isinstance(event, EvAnd):
        return Mul(arithmetize_event(event.left, variables, c), arithmetize_event(event.right, variables, c))
    raise TypeError(f"not an event: {type(event).__name__}")


# ---------------------------------------------------------------------------
# normalization


def _map_terms(f, fn):
    return map_atoms(f, lambda a: Atom(a.op, fn(a.lhs), fn(a.rhs)))


def _rebuild(t, fn):
    """Apply ``fn`` to every Prob leaf of a term."""
    if isinstance(t, Prob):
        return fn(t)
    if isinstance(t, (Add, Mul)):
        return type(t)(_rebuild(t.left, fn), _rebuild(t.right, fn))
    if isinstance(t, Neg):
        return Neg(_rebuild(t.arg, fn))
    if isinstance(t, Sum):
        return Sum(t.binder, t.size, _rebuild(t.body, fn))
    return t


def full_primitive(event, variables):
    """Values per variable if ``event`` is a conjunction of one equality per variable, else None."""
    parts = event_conjuncts(event)
    if len(parts) != len(variables) or not all(isinstance(p, EvEq) for p in parts):
        return None
    values = {}
    for p in parts:
        if p.var in values:
            return None
        values[p.var] = p.value
    if set(values) != set(variables):
        return None
    return tuple(values[v] for v in variables)


def normalize_prob_primitives(inst: ProbInstance) -> ProbInstance:
    """Rewrite every P(δ) as a sum of full-conjunction primitives."""
    check_prob(inst, mixed=True)
    variables = tuple(inst.variables)
    c = inst.c
    used = all_names(inst.formula) | set(variables)

    def full(values):
        return Prob(conj(EvEq(v, val) for v, val in zip(variables, values)))

    def normalize(prob: Prob):
        if full_primitive(prob.event, variables) is not None:
            return full(full_primitive(prob.event, variables))
        parts = [p for p in event_conjuncts(prob.event) if not isinstance(p, EvTrue)]
        if all(isinstance(p, EvEq) for p in parts):
            fixed: dict = {}
            simple = True
            for p in parts:
                if p.var not in fixed:
                    fixed[p.var] = p.value
                elif fixed[p.var] != p.value:
                    if isinstance(p.value, str) or isinstance(fixed[p.var], str):
                        simple = False
                    else:
                        return ZERO
            if simple:
                binders = {v: fresh_name("xi", used) for v in variables if v not in fixed}
                body = full(fixed[v] if v in fixed else binders[v] for v in variables)
                for v in reversed([v for v in variables if v in binders]):
                    body = Sum(binders[v], c, body)
                return body
        binders = {v: fresh_name("xi", used) for v in variables}
        weight = arithmetize_event(prob.event, variables, c)
        for v in variables:
            weight = rename_var(weight, v, Var(binders[v]))
        body = Mul(weight, full(binders[v] for v in variables))
        for v in reversed(variables):
            body = Sum(binders[v], c, body)
        return body

    formula = _map_terms(inst.formula, lambda t: _rebuild(t, normalize))
    return check_prob(ProbInstance(formula, variables, c, inst.support_bound), mixed=True)


# ---------------------------------------------------------------------------
# indexed sums with unit ℓ1 bound to probabilistic satisfiability


def _variable_codes(formula, declared):
    widths: dict = {}

    def note(base, width):
        if widths.setdefault(base, width) != width:
            raise UnsupportedAtom(f"indexed variable {base} used with two index widths")

    def visit(t, binders):
        if isinstance(t, IVar):
            note(t.base, len(t.index))
        elif isinstance(t, Var):
            if t.name not in binders:
                m = _CANON.match(t.name)
                if m:
                    note(m.group(1), len(m.group(2)))
                else:
                    note(t.name, 0)
        elif isinstance(t, Sum):
            visit(t.body, binders | {t.binder})
        else:
            for ch in children(t):
                visit(ch, binders)

    visit(formula, frozenset())
    for name in declared:
        m = _CANON.match(name)
        if m:
            note(m.group(1), len(m.group(2)))
        else:
            note(name, 0)
    bases = sorted(widths)
    base_bits = math.ceil(math.log2(len(bases))) if len(bases) > 1 else 0
    width = base_bits + max(widths.values(), default=0)
    return bases, widths, base_bits, width


def sumvi1_to_probsat(inst: EtrInstance) -> PassResult:
    """Each variable becomes P(X0 = 1, code) - P(X0 = -1, code) over a ternary X0.

    Variables of several bases share the index space via extra leading code
    bits.  A Σ-bound value used arithmetically is read as P(B = e) for an
    auxiliary variable B that is forced to 1.
    """
    check_dialect(EtrInstance(Dialect.SIGMA_VI_1, inst.formula, inst.variables))
    formula = clear_denominators(inst.formula)
    declared = tuple(inst.variables or ())
    bases, widths, base_bits, n = _variable_codes(formula, declared)
    xs = ["X0"] + [f"X{i}" for i in range(1, n + 1)]
    aux = fresh_name("B", set(xs))
    needs_aux = []

    def code_events(base, index_values):
        prefix = [(bases.index(base) >> (base_bits - 1 - k)) & 1 for k in range(base_bits)]
        pad = [0] * (n - base_bits - widths[base])
        values = prefix + pad + list(index_values)
        return [EvEq(xs[i + 1], v) for i, v in enumerate(values)]

    def diff(base, index_values):
        rest = code_events(base, index_values)
        pos = Prob(conj([EvEq("X0", 1)] + rest))
        neg = Prob(conj([EvEq("X0", MINUS_ONE)] + rest))
        return Add(pos, Neg(neg))

    def translate(t, binders):
        if isinstance(t, Const):
            return _encode_const(t.value)
        if isinstance(t, Var):
            if t.name in binders:
                needs_aux.append(True)
                return Prob(EvEq(aux, t.name))
            m = _CANON.match(t.name)
            if m:
                return diff(m.group(1), [int(ch) for ch in m.group(2)])
            return diff(t.name, [])
        if isinstance(t, IVar):
            index = []
            for term in t.index:
                if isinstance(term, Var) and term.name in binders:
                    index.append(term.name)
                elif isinstance(term, Const) and term.value in (0, 1):
                    index.append(int(term.value))
                else:
                    raise UnsupportedAtom(f"index of {t.base} must be a summation variable or a bit constant")
            return diff(t.base, index)
        if isinstance(t, (Add, Mul)):
            return type(t)(translate(t.left, binders), translate(t.right, binders))
        if isinstance(t, Neg):
            return Neg(translate(t.arg, binders))
        if isinstance(t, Sum):
            return Sum(t.binder, t.size, translate(t.body, binders | {t.binder}))
        raise UnsupportedAtom(f"cannot translate {type(t).__name__}")

    target_formula = _map_terms(formula, lambda t: translate(t, frozenset()))
    variables = tuple(xs)
    if needs_aux:
        variables = variables + (aux,)
        target_formula = and_all([target_formula, Atom("=", Prob(EvEq(aux, 1)), TOP)])
    target = check_prob(ProbInstance(target_formula, variables, 3))
    source_vars = tuple(sorted(inst.free_variables()))

    def code_of(name):
        m = _CANON.match(name)
        base, bits = (m.group(1), [int(ch) for ch in m.group(2)]) if m else (name, [])
        return tuple(e.value for e in code_events(base, bits))

    codes = {v: code_of(v) for v in source_vars}
    tail = (1,) if needs_aux else ()

    def forward(w: Witness):
        values = {v: Fraction(w.payload[v]) for v in source_vars}
        alpha = sum(abs(x) for x in values.values())
        if alpha > 1:
            return None
        entries: dict = {}
        fill = (1 - alpha) / 2 ** n
        for bits in itertools.product((0, 1), repeat=n):
            entries[(0,) + bits + tail] = fill
        for v, x in values.items():
            if x > 0:
                entries[(1,) + codes[v] + tail] = x
            elif x < 0:
                entries[(MINUS_ONE,) + codes[v] + tail] = -x
        return Witness("distribution", Distribution(variables, 3, entries), "sumvi1-to-probsat forward")

    def backward(w: Witness):
        dist = w.payload.reordered(variables) if set(w.payload.variables) == set(variables) else None
        if dist is None:
            return None
        out = {}
        for v in source_vars:
            pos = sum((m for k, m in dist.entries.items() if k[0] == 1 and k[1:n + 1] == codes[v]), Fraction(0))
            neg = sum((m for k, m in dist.entries.items() if k[0] == MINUS_ONE and k[1:n + 1] == codes[v]), Fraction(0))
            out[v] = pos - neg
        return Witness("assignment", out, "sumvi1-to-probsat backward")

    notes = {"pass": "sumvi1-to-probsat", "codes": codes, "width": n}
    return PassResult(target, forward, backward, notes)


# ---------------------------------------------------------------------------
# half-norm sums to small-model probabilistic satisfiability


def sigmaetr_half_to_smsat(inst: EtrInstance) -> PassResult:
    """Ternary X1..Xn and E; x_i is a signed unit-tuple difference, a binder e is 2·P(0..0, E = e)."""
    check_dialect(EtrInstance(Dialect.SIGMA, inst.formula, inst.variables))
    formula = clear_denominators(inst.formula)
    source_vars = tuple(sorted(inst.free_variables()))
    n = len(source_vars)
    xs = [f"X{i}" for i in range(1, n + 1)]
    evar = fresh_name("E", set(xs))
    variables = tuple(xs) + (evar,)
    index = {v: i for i, v in enumerate(source_vars)}

    def unit_tuple(i, value):
        return tuple(value if j == i else 0 for j in range(n))

    def prim(values, e_value):
        return Prob(conj([EvEq(x, v) for x, v in zip(xs, values)] + [EvEq(evar, e_value)]))

    def p_term(i):
        return Add(prim(unit_tuple(i, 1), 0), Neg(prim(unit_tuple(i, MINUS_ONE), 0)))

    def q_term(e_value):
        return prim((0,) * n, e_value)

    def translate(t, binders):
        if isinstance(t, Const):
            return _encode_const(t.value)
        if isinstance(t, Var):
            if t.name in binders:
                q = q_term(t.name)
                return Add(q, q)
            return p_term(index[t.name])
        if isinstance(t, (Add, Mul)):
            return type(t)(translate(t.left, binders), translate(t.right, binders))
        if isinstance(t, Neg):
            return Neg(translate(t.arg, binders))
        if isinstance(t, Sum):
            return Sum(t.binder, t.size, translate(t.body, binders | {t.binder}))
        raise UnsupportedAtom(f"cannot translate {type(t).__name__}")

    body = _map_terms(formula, lambda t: translate(t, frozenset()))
    q1 = q_term(1)
    pins = [Atom("=", q_term(0), encode_zero()), Atom("=", Add(q1, q1), TOP)]
    target = check_prob(ProbInstance(and_all(pins + [body]), variables, 3, n + 2))

    def forward(w: Witness):
        values = [Fraction(w.payload[v]) for v in source_vars]
        alpha = sum(abs(x) for x in values)
        if alpha > Fraction(1, 2):
            return None
        entries = {(0,) * n + (1,): Fraction(1, 2), (0,) * n + (2,): Fraction(1, 2) - alpha}
        for i, x in enumerate(values):
            if x > 0:
                entries[unit_tuple(i, 1) + (0,)] = x
            elif x < 0:
                entries[unit_tuple(i, MINUS_ONE) + (0,)] = -x
        return Witness("distribution", Distribution(variables, 3, entries), "sigmaetr-half-to-smsat forward")

    def backward(w: Witness):
        dist = w.payload.reordered(variables)
        out = {}
        for i, v in enumerate(source_vars):
            out[v] = dist.mass(unit_tuple(i, 1) + (0,)) - dist.mass(unit_tuple(i, MINUS_ONE) + (0,))
        return Witness("assignment", out, "sigmaetr-half-to-smsat backward")

    return PassResult(target, forward, backward, {"pass": "sigmaetr-half-to-smsat", "support_bound": n + 2})


# ---------------------------------------------------------------------------
# small-model probabilistic satisfiability to sum-ETR


def smsat_to_sigmaetr(inst: ProbInstance, p: int | None = None) -> PassResult:
    """Store the ≤ p support tuples in masses m_i and selector rows s_i_j."""
    p = inst.support_bound if p is None else p
    if p is None or p < 0:
        raise ValueError("a nonnegative support bound p is required")
    check_prob(inst, mixed=True)
    variables = tuple(inst.variables)
    n, c = len(variables), inst.c
    masses = [Var(f"m{i}") for i in range(1, p + 1)]
    selectors = [[Var(f"s{i}_{j}") for j in range(1, n + 1)] for i in range(1, p + 1)]
    used = all_names(inst.formula) | {v.name for v in masses} | {s.name for row in selectors for s in row}

    def value_term(v, env):
        if isinstance(v, str):
            return env[v]
        return Const(v)

    def array_entry(values, env):
        terms = []
        for i in range(p):
            factors = [point_indicator(sub(value_term(v, env), selectors[i][j]), c) for j, v in enumerate(values)]
            terms.append(Mul(masses[i], mul_all(factors)))
        return add_all(terms)

    def translate(t, env):
        if isinstance(t, Prob):
            values = full_primitive(t.event, variables)
            if values is None:
                raise NotNormalized("primitive does not mention every variable exactly once")
            return array_entry(values, env)
        if isinstance(t, Const):
            return t
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, (Add, Mul)):
            return type(t)(translate(t.left, env), translate(t.right, env))
        if isinstance(t, Neg):
            return Neg(translate(t.arg, env))
        if isinstance(t, Sum):
            k = max(1, math.ceil(math.log2(t.size)))
            bits = [fresh_name(f"{t.binder}_b", used) for _ in range(k)]
            value = add_all(Mul(Const(2 ** (k - 1 - i)), Var(b)) if k - 1 - i else Var(b) for i, b in enumerate(bits))
            inner = dict(env)
            inner[t.binder] = value
            body = translate(t.body, inner)
            if t.size != 2 ** k:
                outside = []
                for w in range(t.size, 2 ** k):
                    lits = [Var(b) if (w >> (k - 1 - i)) & 1 else one_minus(Var(b)) for i, b in enumerate(bits)]
                    outside.append(mul_all(lits))
                body = Mul(one_minus(add_all(outside)), body)
            for b in reversed(bits):
                body = Sum(b, 2, body)
            return body
        raise NotNormalized(f"unexpected {type(t).__name__}")

    body = _map_terms(inst.formula, lambda t: translate(t, {}))
    constraints = []
    for row in selectors:
        for s in row:
            constraints.append(Atom("=", mul_all(Add(s, Const(-d)) if d else s for d in range(c)), ZERO))
    for m in masses:
        constraints.append(Atom("<=", ZERO, m))
    constraints.append(Atom("=", add_all(masses), ONE))
    names = tuple(v.name for v in masses) + tuple(s.name for row in selectors for s in row)
    target = check_dialect(EtrInstance(Dialect.SIGMA, and_all(constraints + [body]), names))

    def forward(w: Witness):
        dist = w.payload.reordered(variables)
        support = dist.support
        if len(support) > p or dist.c != c:
            return None
        out = {}
        for i in range(p):
            key = support[i] if i < len(support) else (0,) * n
            out[masses[i].name] = dist.mass(key) if i < len(support) else Fraction(0)
            for j in range(n):
                out[selectors[i][j].name] = Fraction(key[j])
        return Witness("assignment", out, "smsat-to-sigmaetr forward")

    def backward(w: Witness):
        entries: dict = {}
        for i in range(p):
            key = []
            for j in range(n):
                v = Fraction(w.payload[selectors[i][j].name])
                if v.denominator != 1 or not 0 <= v < c:
                    return None
                key.append(int(v))
            key = tuple(key)
            entries[key] = entries.get(key, Fraction(0)) + Fraction(w.payload[masses[i].name])
        try:
            dist = Distribution(variables, c, entries)
        except ValueError:
            return None
        return Witness("distribution", dist, "smsat-to-sigmaetr backward")

    return PassResult(target, forward, backward, {"pass": "smsat-to-sigmaetr", "p": p})
