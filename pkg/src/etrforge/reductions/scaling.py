"""Scaling an indexed-sum instance into the unit ℓ1 ball."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from ..core import (
    ONE,
    ZERO,
    Add,
    And,
    Atom,
    Const,
    Dialect,
    EtrInstance,
    IVar,
    Mul,
    Neg,
    Prod,
    Sum,
    Var,
    Witness,
    add_all,
    all_names,
    check_dialect,
    fresh_name,
    ivar_name,
    map_atoms,
    mul_all,
    one_minus,
    square,
    sub,
)
from .base import PassResult


def _eq_bit(a, b):
    return Add(Mul(a, b), Mul(one_minus(a), one_minus(b)))


def successor_indicator(e: list, f: list):
    """Polynomial in bit terms that is 1 iff f = e + 1 (both most significant bit first)."""
    m = len(e)
    terms = []
    for k in range(m):
        factors = [_eq_bit(e[j], f[j]) for j in range(k)]
        factors.append(Mul(one_minus(e[k]), f[k]))
        for j in range(k + 1, m):
            factors.append(Mul(e[j], one_minus(f[j])))
        terms.append(mul_all(factors))
    return add_all(terms)


def _degree(t, binders: frozenset) -> int:
    if isinstance(t, Const):
        return 0
    if isinstance(t, Var):
        return 0 if t.name in binders else 1
    if isinstance(t, IVar):
        return 1
    if isinstance(t, Neg):
        return _degree(t.arg, binders)
    if isinstance(t, Add):
        return max(_degree(t.left, binders), _degree(t.right, binders))
    if isinstance(t, Mul):
        return _degree(t.left, binders) + _degree(t.right, binders)
    if isinstance(t, Sum):
        return _degree(t.body, binders | {t.binder})
    if isinstance(t, Prod):
        raise TypeError("products are not part of the indexed-sum dialect")
    raise TypeError(type(t).__name__)


def _power(d, k: int):
    return mul_all([d] * k) if k else ONE


def _homogenize(t, k: int, d, binders: frozenset):
    """d^k * t(x / d), assuming ``_degree(t) <= k``."""
    if isinstance(t, Const) or (isinstance(t, Var) and t.name in binders):
        return t if k == 0 else Mul(t, _power(d, k))
    if isinstance(t, (Var, IVar)):
        return t if k == 1 else Mul(t, _power(d, k - 1))
    if isinstance(t, Neg):
        return Neg(_homogenize(t.arg, k, d, binders))
    if isinstance(t, Add):
        return Add(_homogenize(t.left, k, d, binders), _homogenize(t.right, k, d, binders))
    if isinstance(t, Mul):
        dl = _degree(t.left, binders)
        return Mul(_homogenize(t.left, dl, d, binders), _homogenize(t.right, k - dl, d, binders))
    if isinstance(t, Sum):
        return Sum(t.binder, t.size, _homogenize(t.body, k, d, binders | {t.binder}))
    raise TypeError(type(t).__name__)


def chain_values(m: int, s_bits: int) -> list:
    """Values of t_1 .. t_{2^m}: t_1 = 1/(2^m + 2^S), t_{i+1} = t_i^2."""
    t = Fraction(1, 2 ** m + 2 ** s_bits)
    out = []
    for _ in range(2 ** m):
        out.append(t)
        t = t * t
    return out


def sumvi_to_sumvi1(inst: EtrInstance, m: int = 1, s_bits: int | None = None) -> PassResult:
    """Rescale every variable by a tiny constant d built from a squaring chain.

    ``m`` sets the chain length 2^m; ``s_bits`` is the second summand exponent
    of the first chain equation (default: enough bits to count the variables).
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    check_dialect(EtrInstance(Dialect.SIGMA_VI, inst.formula, inst.variables))
    source_vars = tuple(sorted(inst.free_variables()))
    if s_bits is None:
        s_bits = max(1, math.ceil(math.log2(len(source_vars) + 1)))
    used = all_names(inst.formula) | set(source_vars)
    base = fresh_name("t", used)
    if any(v.startswith(base + "[") for v in source_vars):
        base = fresh_name("t_chain", used)
    e = [fresh_name("e", used) for _ in range(m)]
    f = [fresh_name("f", used) for _ in range(m)]
    g = [fresh_name("g", used) for _ in range(s_bits)]

    def nest(binders, body):
        for b in reversed(binders):
            body = Sum(b, 2, body)
        return body

    first = IVar(base, tuple(ZERO for _ in range(m)))
    d = IVar(base, tuple(ONE for _ in range(m)))
    count = Add(nest(e, ONE), nest(g, ONE))
    eq_first = Atom("=", Mul(count, first), ONE)
    te = IVar(base, tuple(Var(b) for b in e))
    tf = IVar(base, tuple(Var(b) for b in f))
    chain = nest(e + f, Mul(square(sub(square(te), tf)), successor_indicator([Var(b) for b in e], [Var(b) for b in f])))
    eq_chain = Atom("=", chain, ZERO)

    def scale(atom: Atom):
        k = max(_degree(atom.lhs, frozenset()), _degree(atom.rhs, frozenset()))
        return Atom(atom.op, _homogenize(atom.lhs, k, d, frozenset()), _homogenize(atom.rhs, k, d, frozenset()))

    body = map_atoms(inst.formula, scale)
    formula = And(And(eq_first, eq_chain), body)
    chain_names = [ivar_name(base, bits) for bits in itertools.product((0, 1), repeat=m)]
    target = EtrInstance(Dialect.SIGMA_VI_1, formula, tuple(sorted(set(source_vars) | set(chain_names))))
    target = check_dialect(target)
    values = chain_values(m, s_bits)
    d_value = values[-1]
    d_name = chain_names[-1]

    def forward(w: Witness):
        out = {name: v for name, v in zip(chain_names, values)}
        for v in source_vars:
            out[v] = Fraction(w.payload[v]) * d_value
        if sum(abs(v) for v in out.values()) > 1:
            return None
        return Witness("assignment", out, "sumvi-to-sumvi1 forward")

    def backward(w: Witness):
        dv = Fraction(w.payload[d_name])
        if dv == 0:
            return None
        return Witness("assignment", {v: Fraction(w.payload[v]) / dv for v in source_vars}, "sumvi-to-sumvi1 backward")

    notes = {"pass": "sumvi-to-sumvi1", "m": m, "S": s_bits, "d": d_value, "chain": base}
    return PassResult(target, forward, backward, notes)
