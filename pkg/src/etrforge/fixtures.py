"""Seeded generators for instances, witnesses and fuzzed ASTs."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .circuits import BoolCircuit, CircuitBuilder
from .core import (
    ONE,
    Add,
    And,
    Atom,
    Const,
    Dialect,
    Distribution,
    EMajSatInstance,
    EtrInstance,
    EvAnd,
    EvEq,
    EvNot,
    EvTrue,
    IVar,
    Mul,
    Neg,
    Not,
    Or,
    Prob,
    ProbInstance,
    Prod,
    QbfInstance,
    Sum,
    Var,
    Witness,
    and_all,
    ivar_name,
)
from .eso import (
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
    VarEq,
)
from .evaluation import eval_prob_term, eval_term
from .reductions.eso_passes import Succ18Instance
from .succinct import SuccCircuit, encode_tree


def rational(rng: random.Random, span: int = 3, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span * den, span * den), rng.randint(1, den))


def small_rational(rng: random.Random) -> Fraction:
    return rng.choice([Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(2), Fraction(-3, 4)])


# ---------------------------------------------------------------------------
# Boolean matrices and QBFs


def prop(name: str) -> Atom:
    return Atom("=", Var(name), ONE)


def matrices(names, depth: int):
    """Every propositional formula over ``names`` with connective depth ≤ depth."""
    layers = [[prop(n) for n in names]]
    allf = list(layers[0])
    for _ in range(depth):
        prev = list(allf)
        new = [Not(f) for f in prev]
        new += [And(a, b) for a in prev for b in prev]
        new += [Or(a, b) for a in prev for b in prev]
        seen = set(allf)
        for f in new:
            if f not in seen:
                seen.add(f)
                allf.append(f)
    return allf


def random_matrix(rng: random.Random, names, depth: int):
    if depth == 0 or rng.random() < 0.25:
        return prop(rng.choice(names))
    k = rng.randrange(3)
    if k == 0:
        return Not(random_matrix(rng, names, depth - 1))
    cls = And if k == 1 else Or
    return cls(random_matrix(rng, names, depth - 1), random_matrix(rng, names, depth - 1))


def exhaustive_qbfs(n_vars: int, depth: int):
    names = [f"p{i}" for i in range(1, n_vars + 1)]
    mats = matrices(names, depth)
    for quants in itertools.product("AE", repeat=n_vars):
        prefix = tuple(zip(quants, names))
        for m in mats:
            yield QbfInstance(prefix, m)


def random_qbf(rng: random.Random, max_vars: int = 4, depth: int = 3) -> QbfInstance:
    n = rng.randint(1, max_vars)
    names = [f"p{i}" for i in range(1, n + 1)]
    rng.shuffle(names)
    prefix = tuple((rng.choice("AE"), v) for v in names)
    return QbfInstance(prefix, random_matrix(rng, sorted(names), depth))


def random_emajsat(rng: random.Random, nx: int, ny: int = 3, depth: int = 3) -> EMajSatInstance:
    xs = tuple(f"x{i}" for i in range(1, nx + 1))
    ys = tuple(f"y{i}" for i in range(1, ny + 1))
    return EMajSatInstance(xs, ys, random_matrix(rng, list(xs + ys), depth))


# ---------------------------------------------------------------------------
# arithmetic terms


class TermGen:
    """Random terms over ``names`` with at most ``max_binders`` Σ/Π binders."""

    def __init__(self, rng, names, kinds=("sum",), max_binders=3, index_base=None, index_width=0, consts=True):
        self.rng = rng
        self.names = list(names)
        self.kinds = kinds
        self.budget = max_binders
        self.index_base = index_base
        self.index_width = index_width
        self.consts = consts
        self.counter = 0

    def leaf(self, scope, sums):
        rng = self.rng
        options = ["const"] if self.consts else []
        if self.names:
            options.append("var")
        if scope:
            options.append("bound")
        if self.index_base and len(sums) >= 1:
            options += ["ivar", "ivar"]
        choice = rng.choice(options or ["const"])
        if choice == "var":
            return Var(rng.choice(self.names))
        if choice == "bound":
            return Var(rng.choice(scope))
        if choice == "ivar":
            return IVar(self.index_base, tuple(Var(rng.choice(sums)) for _ in range(self.index_width)))
        return Const(rational(self.rng, 2, 3))

    def term(self, depth, scope=(), sums=()):
        rng = self.rng
        if depth == 0 or rng.random() < 0.2:
            return self.leaf(list(scope), list(sums))
        roll = rng.random()
        if self.budget > 0 and roll < 0.3:
            self.budget -= 1
            self.counter += 1
            kind = rng.choice(self.kinds)
            b = f"e{self.counter}"
            body = self.term(depth - 1, tuple(scope) + (b,), tuple(sums) + ((b,) if kind == "sum" else ()))
            return (Sum if kind == "sum" else Prod)(b, 2, body)
        if roll < 0.4:
            return Neg(self.term(depth - 1, scope, sums))
        cls = Add if rng.random() < 0.5 else Mul
        return cls(self.term(depth - 1, scope, sums), self.term(depth - 1, scope, sums))


def random_sigma_pi_term(rng, names=("x", "y"), max_binders=3, depth=4):
    return TermGen(rng, names, ("sum", "prod"), max_binders).term(depth)


def random_sigma_term(rng, names=("x", "y"), max_binders=3, depth=4):
    return TermGen(rng, names, ("sum",), max_binders).term(depth)


def random_assignment(rng, names) -> dict:
    return {n: rational(rng) for n in sorted(names)}


# ---------------------------------------------------------------------------
# Boolean-constrained ETR and negation-rich formulas


def booleanity(name: str):
    return Or(Atom("=", Var(name), Const(0)), Atom("=", Var(name), Const(1)))


def random_atom(rng, names, depth=2, ops=("<", "<=", "=")):
    gen = TermGen(rng, names, (), 0)
    return Atom(rng.choice(ops), gen.term(depth), gen.term(depth))


def random_bool_formula(rng, names, depth=2, ops=("<", "<=", "="), negations=True):
    if depth == 0 or rng.random() < 0.3:
        return random_atom(rng, names, 2, ops)
    k = rng.randrange(3 if negations else 2)
    if k == 2:
        return Not(random_bool_formula(rng, names, depth - 1, ops, negations))
    cls = And if k == 0 else Or
    return cls(random_bool_formula(rng, names, depth - 1, ops, negations),
               random_bool_formula(rng, names, depth - 1, ops, negations))


def boolean_constrained_instance(rng, n_vars=2, depth=2) -> EtrInstance:
    names = [f"x{i}" for i in range(1, n_vars + 1)]
    parts = [booleanity(n) for n in names] + [random_bool_formula(rng, names, depth)]
    return EtrInstance(Dialect.ETR, and_all(parts), tuple(names))


def tree_fixture(rng, max_index_bits=6) -> SuccCircuit:
    """Node circuit of a random binder-free formula whose tree fits in 2^max_index_bits nodes."""
    while True:
        names = ["x", "y", "z"][: rng.randint(1, 3)]
        f = random_bool_formula(rng, names, rng.randint(1, 3))
        inst = EtrInstance(Dialect.ETR, f, tuple(names))
        s = encode_tree(inst)
        if s.width <= max_index_bits:
            return s


# ---------------------------------------------------------------------------
# events and distributions


def random_event(rng, variables, c, depth, binders=()):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return EvTrue()
        value = rng.choice(list(binders)) if binders and rng.random() < 0.3 else rng.randrange(c)
        return EvEq(rng.choice(list(variables)), value)
    k = rng.randrange(2)
    if k == 0:
        return EvNot(random_event(rng, variables, c, depth - 1, binders))
    return EvAnd(random_event(rng, variables, c, depth - 1, binders), random_event(rng, variables, c, depth - 1, binders))


def events(variables, c, depth):
    """Every event over the atoms up to the given connective depth."""
    found = [EvTrue()] + [EvEq(v, k) for v in variables for k in range(c)]
    for _ in range(depth):
        prev = list(found)
        seen = set(found)
        for e in [EvNot(a) for a in prev] + [EvAnd(a, b) for a in prev for b in prev]:
            if e not in seen:
                seen.add(e)
                found.append(e)
    return found


def random_distribution(rng, variables, c, support) -> Distribution:
    keys = list(itertools.product(range(c), repeat=len(variables)))
    chosen = rng.sample(keys, min(support, len(keys)))
    weights = [rng.randint(1, 6) for _ in chosen]
    total = sum(weights)
    return Distribution(tuple(variables), c, {k: Fraction(w, total) for k, w in zip(chosen, weights)})


def random_prob_term(rng, variables, c, depth, binders=(), budget=None):
    budget = [1] if budget is None else budget
    if depth == 0 or rng.random() < 0.3:
        return Prob(random_event(rng, variables, c, 2, binders))
    roll = rng.random()
    if roll < 0.2 and budget[0] > 0:
        budget[0] -= 1
        b = f"w{len(binders) + 1}"
        return Sum(b, rng.randint(2, c), random_prob_term(rng, variables, c, depth - 1, tuple(binders) + (b,), budget))
    if roll < 0.3:
        return Neg(random_prob_term(rng, variables, c, depth - 1, binders, budget))
    cls = Add if rng.random() < 0.5 else Mul
    return cls(random_prob_term(rng, variables, c, depth - 1, binders, budget),
               random_prob_term(rng, variables, c, depth - 1, binders, budget))


def satisfied_atom(rng, lhs, rhs_value, make_const):
    """An atom about ``lhs`` that holds because lhs evaluates to ``rhs_value``."""
    op = rng.choice(["=", "<=", "<"])
    if op == "=":
        return Atom("=", lhs, make_const(rhs_value))
    if op == "<=":
        return Atom("<=", lhs, make_const(rhs_value + rng.randint(0, 1)))
    return Atom("<", lhs, make_const(rhs_value + 1))


def smsat_fixture(rng, n=None, c=None, p=None):
    """Small-model instance with a known satisfying distribution."""
    n = n or rng.randint(1, 2)
    c = c or rng.randint(2, 3)
    p = p or rng.randint(1, 3)
    variables = tuple(f"X{i}" for i in range(1, n + 1))
    dist = random_distribution(rng, variables, c, rng.randint(1, p))
    atoms = []
    for _ in range(rng.randint(1, 2)):
        t = random_prob_term(rng, variables, c, 2)
        atoms.append(satisfied_atom(rng, t, eval_prob_term(t, dist), Const))
    return ProbInstance(and_all(atoms), variables, c, p), Witness("distribution", dist, "fixture")


# ---------------------------------------------------------------------------
# ℓ1-bounded witnesses and instances built around them


def bounded_values(rng, names, bound: Fraction) -> dict:
    raw = [rational(rng, 2, 5) for _ in names]
    norm = sum(abs(v) for v in raw)
    scale = Fraction(1) if norm == 0 else bound / norm * Fraction(rng.randint(1, 4), 4)
    return {n: v * scale for n, v in zip(names, raw)}


def sumvi1_fixture(rng, width=2):
    """Unit-ℓ1 indexed-sum instance with a known witness."""
    names = [ivar_name("x", bits) for bits in itertools.product((0, 1), repeat=width)] + ["y"]
    values = bounded_values(rng, names, Fraction(1))
    atoms = []
    for _ in range(rng.randint(1, 3)):
        gen = TermGen(rng, ["y"], ("sum",), 2, "x", width)
        t = gen.term(4)
        atoms.append(satisfied_atom(rng, t, eval_term(t, values), Const))
    inst = EtrInstance(Dialect.SIGMA_VI_1, and_all(atoms), tuple(names))
    return inst, Witness("assignment", values, "fixture")


def half_fixture(rng, n_vars=None):
    """Half-ℓ1 summation instance with a known witness."""
    names = [f"v{i}" for i in range(1, (n_vars or rng.randint(1, 3)) + 1)]
    values = bounded_values(rng, names, Fraction(1, 2))
    atoms = []
    for _ in range(rng.randint(1, 3)):
        t = TermGen(rng, names, ("sum",), 2).term(4)
        atoms.append(satisfied_atom(rng, t, eval_term(t, values), Const))
    inst = EtrInstance(Dialect.SIGMA_HALF, and_all(atoms), tuple(names))
    return inst, Witness("assignment", values, "fixture")


# ---------------------------------------------------------------------------
# circuits and ESO


def random_circuit(rng, n_inputs, n_outputs, n_gates=6) -> BoolCircuit:
    b = CircuitBuilder(n_inputs)
    pool = [b.input(k) for k in range(n_inputs)] or [b.const(rng.randrange(2))]
    for _ in range(n_gates):
        op = rng.choice(["not", "and", "or", "const"])
        if op == "not":
            pool.append(b.not_(rng.choice(pool)))
        elif op == "const":
            pool.append(b.const(rng.randrange(2)))
        else:
            f = b.and_ if op == "and" else b.or_
            pool.append(f(rng.choice(pool), rng.choice(pool)))
    return b.build([rng.choice(pool) for _ in range(n_outputs)])


def raw_circuit(rng, n_inputs, n_outputs, n_gates=6) -> BoolCircuit:
    """Circuit with arbitrary (possibly redundant) gates, for serialization tests."""
    gates = []
    for i in range(n_gates):
        options = ["CONST0", "CONST1"] + (["INPUT"] if n_inputs else []) + (["NOT", "AND", "OR"] if i else [])
        op = rng.choice(options)
        if op == "INPUT":
            gates.append((op, (rng.randrange(n_inputs),)))
        elif op == "NOT":
            gates.append((op, (rng.randrange(i),)))
        elif op in ("AND", "OR"):
            gates.append((op, (rng.randrange(i), rng.randrange(i))))
        else:
            gates.append((op, ()))
    return BoolCircuit(n_inputs, tuple(gates), tuple(rng.randrange(n_gates) for _ in range(n_outputs)))


def const_circuit(bit: int, m: int = 1, n: int = 1) -> BoolCircuit:
    b = CircuitBuilder(m)
    return b.build([b.const(bit)] * n)


def succ18_consistent() -> Succ18Instance:
    """x0 = 1/8 and every sum/product equation reads x1 + x1 = x1, x1·x1 = x1."""
    return Succ18Instance((const_circuit(0),) + (const_circuit(1),) * 6)


def succ18_inconsistent() -> Succ18Instance:
    """x0 = 1/8 together with x0 + x0 = x0."""
    return Succ18Instance((const_circuit(0),) * 4 + (const_circuit(1),) * 3)


def random_real_term(rng, fns, vars_, depth):
    if depth == 0 or rng.random() < 0.3:
        if not fns or rng.random() < 0.3:
            return FConst(rational(rng, 2, 3))
        name, arity = rng.choice(fns)
        return FApp(name, tuple(rng.choice(vars_) for _ in range(arity))) if vars_ or arity == 0 else FConst(1)
    k = rng.randrange(4)
    if k == 3 and vars_:
        v = f"u{depth}"
        return FSum(v, random_real_term(rng, fns, vars_ + [v], depth - 1))
    cls = (FAdd, FSub, FMul, FAdd)[k]
    return cls(random_real_term(rng, fns, vars_, depth - 1), random_real_term(rng, fns, vars_, depth - 1))


def random_eso_formula(rng, fns, rels, vars_, depth):
    if depth == 0 or rng.random() < 0.25:
        k = rng.randrange(3)
        if k == 0 and len(vars_) >= 1:
            return VarEq(rng.choice(vars_), rng.choice(vars_), rng.random() < 0.3)
        if k == 1 and rels and vars_:
            name, arity = rng.choice(rels)
            return Rel(name, tuple(rng.choice(vars_) for _ in range(arity)), rng.random() < 0.3)
        return Cmp(rng.choice(["<", "<=", "="]), random_real_term(rng, fns, vars_, 2), random_real_term(rng, fns, vars_, 2))
    k = rng.randrange(4)
    if k == 0:
        return EAnd(random_eso_formula(rng, fns, rels, vars_, depth - 1), random_eso_formula(rng, fns, rels, vars_, depth - 1))
    if k == 1:
        return EOr(random_eso_formula(rng, fns, rels, vars_, depth - 1), random_eso_formula(rng, fns, rels, vars_, depth - 1))
    v = f"z{len(vars_) + 1}"
    cls = Forall if k == 2 else Exists
    return cls(v, random_eso_formula(rng, fns, rels, vars_ + [v], depth - 1))


def random_structure(rng, size=2) -> FiniteStructure:
    domain = tuple(range(size))
    functions = {}
    for k in range(rng.randint(0, 2)):
        arity = rng.randint(0, 2)
        functions[f"g{k}"] = (arity, {key: rational(rng) for key in itertools.product(domain, repeat=arity)})
    relations = {}
    for k in range(rng.randint(0, 2)):
        arity = rng.randint(0, 2)
        rows = [key for key in itertools.product(domain, repeat=arity) if rng.random() < 0.5]
        relations[f"R{k}"] = (arity, frozenset(rows))
    return FiniteStructure(domain, functions, relations)


def random_eso_instance(rng) -> EsoInstance:
    structure = random_structure(rng)
    quantified = [(f"f{k}", rng.randint(0, 2)) for k in range(rng.randint(0, 2))]
    fns = quantified + [(n, a) for n, (a, _) in structure.functions.items()]
    rels = [(n, a) for n, (a, _) in structure.relations.items()]
    body = random_eso_formula(rng, fns, rels, [], 3)
    for name, arity in reversed(quantified):
        body = ExistsF(name, arity, body)
    rng_range = None if rng.random() < 0.3 else (Fraction(-1), Fraction(rng.randint(1, 2)))
    return EsoInstance(EsoSentence(body, rng_range), structure)


def random_tables(rng, symbols, domain) -> Witness:
    tables = {}
    for name, arity in symbols:
        tables[name] = {key: rational(rng) for key in itertools.product(domain, repeat=max(arity, 0))}
    return Witness("eso-tables", tables, "fuzz")


# ---------------------------------------------------------------------------
# fuzz corpus per artifact type


def _names(rng, k, prefix="v"):
    return tuple(f"{prefix}{i}" for i in range(1, k + 1))


def fuzz_term(rng):
    return TermGen(rng, ["a", "b", "x[01]"], ("sum", "prod"), 3, "X", rng.randint(1, 2)).term(5)


def fuzz_prob_term(rng):
    return random_prob_term(rng, ("X1", "X2"), 3, 4)


def fuzz_formula(rng):
    f = random_bool_formula(rng, ["a", "b", "c"], 3)
    return f


def _fuzz_etr(rng):
    dialect = rng.choice(list(Dialect))
    kinds = tuple(k for k, ok in (("sum", dialect.allows_sum), ("prod", dialect.allows_prod)) if ok)
    base = "X" if dialect.allows_indexing else None
    atoms = []
    for _ in range(rng.randint(1, 3)):
        gen = TermGen(rng, ["a", "b"], kinds, 2 if kinds else 0, base, 2)
        atoms.append(Atom(rng.choice(["<", "<=", "="]), gen.term(4), gen.term(3)))
    f = atoms[0]
    for a in atoms[1:]:
        f = rng.choice([And, Or])(f, a)
    if rng.random() < 0.3:
        f = Not(f)
    variables = None if rng.random() < 0.3 else tuple(rng.sample(["a", "b", "c"], rng.randint(0, 3)))
    candidates = {}
    if rng.random() < 0.5:
        candidates["a"] = tuple(small_rational(rng) for _ in range(rng.randint(0, 3)))
    return EtrInstance(dialect, f, variables, candidates)


def _fuzz_prob(rng):
    c = rng.randint(2, 3)
    variables = ("X1", "X2")
    atoms = [Atom(rng.choice(["<", "<=", "="]), random_prob_term(rng, variables, c, 3), random_prob_term(rng, variables, c, 2))
             for _ in range(rng.randint(1, 2))]
    return ProbInstance(and_all(atoms), variables, c, rng.choice([None, 1, 3]))


def _fuzz_witness(rng):
    k = rng.randrange(3)
    note = rng.choice(["", "fuzz", "forward map"])
    if k == 0:
        return Witness("assignment", {n: rational(rng) for n in _names(rng, rng.randint(0, 4), "w")}, note)
    if k == 1:
        return Witness("distribution", random_distribution(rng, _names(rng, rng.randint(1, 3), "X"), 3, 4), note)
    return Witness("eso-tables", random_tables(rng, [("q", 1), ("h", 0), ("s", 2)], (0, 1)).payload, note)


def _fuzz_succ(rng):
    n = rng.randint(1, 2)
    return SuccCircuit(raw_circuit(rng, n, 8 + 4 * n, rng.randint(1, 10)), rng.random() < 0.5,
                       _names(rng, rng.randint(0, 3), "x"))


FUZZERS = {
    "term": fuzz_term,
    "prob-term": fuzz_prob_term,
    "formula": fuzz_formula,
    "etr": _fuzz_etr,
    "qbf": lambda rng: random_qbf(rng),
    "emajsat": lambda rng: random_emajsat(rng, rng.randint(0, 3), rng.randint(1, 3)),
    "prob": _fuzz_prob,
    "distribution": lambda rng: random_distribution(rng, _names(rng, rng.randint(1, 3), "X"), rng.randint(2, 3), 5),
    "circuit": lambda rng: raw_circuit(rng, rng.randint(0, 3), rng.randint(0, 3), rng.randint(1, 8)),
    "succ": _fuzz_succ,
    "succ18": lambda rng: Succ18Instance(tuple(raw_circuit(rng, 1, 1, rng.randint(1, 3)) for _ in range(7))),
    "structure": random_structure,
    "eso": random_eso_instance,
    "witness": _fuzz_witness,
}
