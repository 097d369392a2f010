"""Circuit-indexed 1/8 equation systems to loose ESO, and the ≤-to-= rewrite."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..core import UnsupportedAtom, WidthMismatch, Witness, ivar_name
from ..eso import (
    Cmp,
    EAnd,
    EOr,
    EsoInstance,
    EsoSentence,
    Exists,
    ExistsF,
    FAdd,
    FApp,
    FConst,
    FiniteStructure,
    FMul,
    Forall,
    FSub,
    FSum,
    Rel,
    _Checker,
    and_chain,
    forall_chain,
)
from .base import PassResult

EIGHTH = Fraction(1, 8)


@dataclass(frozen=True)
class Succ18Instance:
    """Seven circuits {0,1}^M -> {0,1}^N naming the variables of three equation families.

    Equation j reads x[C0(j)] = 1/8, x[C1(j)] + x[C2(j)] = x[C3(j)] and
    x[C4(j)] · x[C5(j)] = x[C6(j)].
    """

    circuits: tuple

    def __post_init__(self):
        if len(self.circuits) != 7:
            raise WidthMismatch("exactly seven circuits are required")
        m, n = self.circuits[0].n_inputs, self.circuits[0].n_outputs
        for c in self.circuits:
            if c.n_inputs != m or c.n_outputs != n:
                raise WidthMismatch("all circuits must share input and output widths")

    @property
    def M(self) -> int:
        return self.circuits[0].n_inputs

    @property
    def N(self) -> int:
        return self.circuits[0].n_outputs


def succ18_variable(bits) -> str:
    return ivar_name("x", bits)


def eval_succ18(inst: Succ18Instance, values) -> bool:
    """Whether the assignment (keyed by x[bits]) satisfies every equation and the range."""
    x = {k: Fraction(v) for k, v in values.items()}
    for bits in itertools.product((0, 1), repeat=inst.N):
        if abs(x.get(succ18_variable(bits), Fraction(0))) > EIGHTH:
            return False
    for b in itertools.product((0, 1), repeat=inst.M):
        idx = [succ18_variable(c.evaluate(b)) for c in inst.circuits]
        v = [x.get(i, Fraction(0)) for i in idx]
        if v[0] != EIGHTH or v[1] + v[2] != v[3] or v[4] * v[5] != v[6]:
            return False
    return True


ONE_RELATION = "one"


def binary_structure() -> FiniteStructure:
    """Domain {0, 1} with the unary relation marking 1."""
    return FiniteStructure((0, 1), {}, {ONE_RELATION: (1, frozenset({(1,)}))})


def succ18_to_leso(inst: Succ18Instance) -> PassResult:
    m, n = inst.M, inst.N
    bs = [f"b{k}" for k in range(1, m + 1)]
    es = [f"e{k}" for k in range(1, n + 1)]
    one, zero = FConst(1), FConst(0)

    def app(name, args):
        return FApp(name, tuple(args))

    def ident(v):
        return app("id", [v])

    def gate_fn(i, g):
        return f"c{i}_{g}"

    clauses = [
        forall_chain(es, EAnd(
            Cmp("<=", FSub(zero, FConst(EIGHTH)), app("q", es)),
            Cmp("<=", app("q", es), FConst(EIGHTH)),
        )),
        Forall("x", EAnd(
            EOr(Rel(ONE_RELATION, ("x",), negated=True), Cmp("=", ident("x"), one)),
            EOr(Rel(ONE_RELATION, ("x",)), Cmp("=", ident("x"), zero)),
        )),
    ]
    symbols = [("q", n), ("id", 1)]
    for i, circuit in enumerate(inst.circuits):
        for g, (op, args) in enumerate(circuit.gates):
            symbols.append((gate_fn(i, g), m))
            lhs = app(gate_fn(i, g), bs)
            if op == "INPUT":
                rhs = ident(bs[args[0]])
            elif op == "NOT":
                rhs = FSub(one, app(gate_fn(i, args[0]), bs))
            elif op == "AND":
                rhs = FMul(app(gate_fn(i, args[0]), bs), app(gate_fn(i, args[1]), bs))
            elif op == "OR":
                rhs = FSub(one, FMul(FSub(one, app(gate_fn(i, args[0]), bs)), FSub(one, app(gate_fn(i, args[1]), bs))))
            else:
                rhs = one if op == "CONST1" else zero
            clauses.append(forall_chain(bs, Cmp("=", lhs, rhs)))
        factors = []
        for k, out in enumerate(circuit.outputs):
            c = app(gate_fn(i, out), bs)
            factors.append(FAdd(FMul(c, ident(es[k])), FMul(FSub(one, c), FSub(one, ident(es[k])))))
        product = factors[0]
        for f in factors[1:]:
            product = FMul(product, f)
        sel = app(f"s{i}", bs + es)
        symbols += [(f"s{i}", m + n), (f"y{i}", m)]
        clauses.append(forall_chain(bs + es, Cmp("=", sel, product)))
        clauses.append(forall_chain(bs + es, Cmp("=", FMul(app(f"y{i}", bs), sel), FMul(app("q", es), sel))))
    y = [app(f"y{i}", bs) for i in range(7)]
    clauses.append(forall_chain(bs, and_chain([
        Cmp("=", y[0], FConst(EIGHTH)),
        Cmp("=", FAdd(y[1], y[2]), y[3]),
        Cmp("=", FMul(y[4], y[5]), y[6]),
    ])))
    formula = and_chain(clauses)
    for name, arity in reversed(symbols):
        formula = ExistsF(name, arity, formula)
    sentence = EsoSentence(formula, (Fraction(-1), Fraction(1)))
    target = EsoInstance(sentence, binary_structure())

    def forward(w: Witness):
        x = {k: Fraction(v) for k, v in w.payload.items()}
        get = lambda bits: x.get(succ18_variable(bits), Fraction(0))  # noqa: E731
        tables = {"q": {}, "id": {(0,): Fraction(0), (1,): Fraction(1)}}
        for e in itertools.product((0, 1), repeat=n):
            tables["q"][e] = get(e)
        for i, circuit in enumerate(inst.circuits):
            for g in range(len(circuit.gates)):
                tables[gate_fn(i, g)] = {}
            tables[f"s{i}"] = {}
            tables[f"y{i}"] = {}
            for b in itertools.product((0, 1), repeat=m):
                values = circuit.gate_values(b)
                for g, v in enumerate(values):
                    tables[gate_fn(i, g)][b] = Fraction(v)
                out = tuple(values[o] for o in circuit.outputs)
                tables[f"y{i}"][b] = get(out)
                for e in itertools.product((0, 1), repeat=n):
                    tables[f"s{i}"][b + e] = Fraction(int(e == out))
        return Witness("eso-tables", tables, "succ18-to-leso forward")

    def backward(w: Witness):
        q = w.payload["q"]
        return Witness("assignment", {succ18_variable(e): Fraction(q[e]) for e in itertools.product((0, 1), repeat=n)},
                       "succ18-to-leso backward")

    return PassResult(target, forward, backward, {"pass": "succ18-to-leso", "symbols": len(symbols)})


# ---------------------------------------------------------------------------
# a ≤ b  ->  a·ε + x = b·ε


def _magnitude(t, size: int, fn_bound) -> Fraction:
    if isinstance(t, FConst):
        return abs(t.value)
    if isinstance(t, FApp):
        return fn_bound(t.fn)
    if isinstance(t, (FAdd, FSub)):
        return _magnitude(t.left, size, fn_bound) + _magnitude(t.right, size, fn_bound)
    if isinstance(t, FMul):
        return _magnitude(t.left, size, fn_bound) * _magnitude(t.right, size, fn_bound)
    if isinstance(t, FSum):
        return size * _magnitude(t.body, size, fn_bound)
    raise TypeError(type(t).__name__)


def leso_leq_rewrite(inst: EsoInstance) -> PassResult:
    """Replace each a ≤ b by a·ε + x(scope) = b·ε with ε pinned to 1/B.

    B bounds |b - a| syntactically, so x = (b - a)/B lies in [0, 1] exactly when a ≤ b.
    """
    sentence, structure = inst.sentence, inst.structure
    if sentence.range is None:
        raise UnsupportedAtom("the rewrite needs a bounded function range")
    lo, hi = sentence.range
    if lo < 0:
        raise UnsupportedAtom("the rewrite needs a nonnegative function range")
    quantified = {}

    def collect(f):
        if isinstance(f, ExistsF):
            quantified[f.fn] = f.arity
            collect(f.body)
        elif isinstance(f, (EAnd, EOr)):
            collect(f.left)
            collect(f.right)
        elif isinstance(f, (Exists, Forall)):
            collect(f.body)

    collect(sentence.formula)

    def fn_bound(name):
        if name in quantified:
            return max(abs(lo), abs(hi))
        if name in structure.functions:
            return max((abs(Fraction(v)) for v in structure.functions[name][1].values()), default=Fraction(0))
        return max(abs(lo), abs(hi))

    size = len(structure.domain)
    taken = set(quantified) | set(structure.functions)
    fresh: list = []
    pins: list = []
    plan: list = []

    def new_symbol(prefix):
        k = 1
        while f"{prefix}{k}" in taken:
            k += 1
        taken.add(f"{prefix}{k}")
        return f"{prefix}{k}"

    def rewrite(f, scope):
        if isinstance(f, Cmp) and f.op == "<=":
            if f.negated:
                raise UnsupportedAtom("negated comparisons are outside the loose fragment")
            eps, slack = new_symbol("eps"), new_symbol("slack")
            bound = max(Fraction(1), _magnitude(f.lhs, size, fn_bound) + _magnitude(f.rhs, size, fn_bound))
            fresh.extend([(eps, 0), (slack, len(scope))])
            pins.append(Cmp("=", FMul(FApp(eps, ()), FConst(bound)), FConst(1)))
            plan.append((eps, slack, tuple(scope), f.lhs, f.rhs, bound))
            e = FApp(eps, ())
            return Cmp("=", FAdd(FMul(f.lhs, e), FApp(slack, tuple(scope))), FMul(f.rhs, e))
        if isinstance(f, EAnd):
            return EAnd(rewrite(f.left, scope), rewrite(f.right, scope))
        if isinstance(f, EOr):
            return EOr(rewrite(f.left, scope), rewrite(f.right, scope))
        if isinstance(f, Exists):
            return Exists(f.var, rewrite(f.body, scope + [f.var]))
        if isinstance(f, Forall):
            return Forall(f.var, rewrite(f.body, scope + [f.var]))
        if isinstance(f, ExistsF):
            return ExistsF(f.fn, f.arity, rewrite(f.body, scope))
        return f

    body = rewrite(sentence.formula, [])
    if pins:
        body = and_chain(pins + [body])
    for name, arity in reversed(fresh):
        body = ExistsF(name, arity, body)
    target = EsoInstance(EsoSentence(body, (lo, hi)), structure)

    def forward(w: Witness):
        tables = {k: dict(v) for k, v in w.payload.items()}
        checker = _Checker(structure, tables)
        for eps, slack, scope, a, b, bound in plan:
            tables[eps] = {(): 1 / bound}
            tables[slack] = {}
            for values in itertools.product(structure.domain, repeat=len(scope)):
                s = dict(zip(scope, values))
                gap = (checker.term(b, s) - checker.term(a, s)) / bound
                tables[slack][values] = gap if 0 <= gap <= 1 else Fraction(0)
        return Witness("eso-tables", tables, "leso-leq-rewrite forward")

    def backward(w: Witness):
        new = {name for name, _ in fresh}
        return Witness("eso-tables", {k: v for k, v in w.payload.items() if k not in new}, "leso-leq-rewrite backward")

    return PassResult(target, forward, backward, {"pass": "leso-leq-rewrite", "rewritten": len(plan)})


__all__ = [
    "Succ18Instance",
    "binary_structure",
    "eval_succ18",
    "leso_leq_rewrite",
    "succ18_to_leso",
    "succ18_variable",
]
