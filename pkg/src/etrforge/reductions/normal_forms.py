"""Sum-prenex form, negation-free comparisons, and flattening to one polynomial equation."""
from __future__ import annotations

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
    Not,
    Or,
    Prod,
    Sum,
    UnsupportedAtom,
    Var,
    Witness,
    add_all,
    all_names,
    and_all,
    check_dialect,
    const,
    fresh_name,
    map_atoms,
    one_minus,
    rename_var,
    walk,
    square,
    sub,
)
from ..evaluation import DEFAULT_CAP, eval_term
from .base import PassResult


# ---------------------------------------------------------------------------
# prenexing


def sum_prefix(t):
    """Split ``Σ_Y p`` into (binders, p)."""
    binders = []
    while isinstance(t, Sum):
        binders.append(t.binder)
        t = t.body
    return binders, t


def is_sum_free(t) -> bool:
    return not any(isinstance(n, (Sum, Prod)) for n in walk(t))


def is_sum_prenex(t) -> bool:
    return is_sum_free(sum_prefix(t)[1])


def prenex_sums(inst: EtrInstance) -> PassResult:
    """Move every sum of each atom side to the front, weighting additions by Z_i = 1/2^i."""
    check_dialect(EtrInstance(Dialect.SIGMA, inst.formula, inst.variables))
    used = all_names(inst.formula) | set(inst.free_variables())
    z_names: dict = {}

    def z(i):
        if i == 0:
            return ONE
        if i not in z_names:
            z_names[i] = fresh_name(f"Z{i}", used)
        return Var(z_names[i])

    def prenex(t):
        if isinstance(t, (Const, Var, IVar)):
            return [], t
        if isinstance(t, Neg):
            ys, p = prenex(t.arg)
            return ys, Neg(p)
        if isinstance(t, Mul):
            ys, p = prenex(t.left)
            ys2, p2 = prenex(t.right)
            return ys + ys2, Mul(p, p2)
        if isinstance(t, Add):
            ys, p = prenex(t.left)
            ys2, p2 = prenex(t.right)
            left = p if not ys2 else Mul(p, z(len(ys2)))
            right = p2 if not ys else Mul(p2, z(len(ys)))
            return ys + ys2, Add(left, right)
        if isinstance(t, Sum):
            ys, p = prenex(t.body)
            new = fresh_name(t.binder, used)
            return [new] + ys, rename_var(p, t.binder, Var(new))
        raise UnsupportedAtom(f"cannot prenex {type(t).__name__}")

    def side(t):
        ys, p = prenex(t)
        for y in reversed(ys):
            p = Sum(y, 2, p)
        return p

    body = map_atoms(inst.formula, lambda a: Atom(a.op, side(a.lhs), side(a.rhs)))
    # the Z chain must be contiguous from Z1
    top = max(z_names, default=0)
    for i in range(1, top + 1):
        z(i)
    constraints = []
    for i in range(1, top + 1):
        if i == 1:
            constraints.append(Atom("=", Mul(const(2), z(1)), ONE))
        else:
            constraints.append(Atom("=", Mul(z(i), const(2)), z(i - 1)))
    formula = and_all([body] + constraints) if constraints else body
    source_vars = tuple(sorted(inst.free_variables()))
    z_values = {z_names[i]: Fraction(1, 2 ** i) for i in range(1, top + 1)}
    target = check_dialect(EtrInstance(Dialect.SIGMA, formula, source_vars + tuple(z_values)))

    def forward(w: Witness):
        out = {v: Fraction(w.payload[v]) for v in source_vars}
        out.update(z_values)
        return Witness("assignment", out, "prenex-sums forward")

    def backward(w: Witness):
        return Witness("assignment", {v: Fraction(w.payload[v]) for v in source_vars}, "prenex-sums backward")

    return PassResult(target, forward, backward, {"pass": "prenex-sums", "Z": dict(z_values)})


# ---------------------------------------------------------------------------
# negation-free comparisons


def push_negations(f, negate: bool = False):
    """Equivalent formula without Not and without ≤, using only < and =."""
    if isinstance(f, Not):
        return push_negations(f.arg, not negate)
    if isinstance(f, And):
        l, r = push_negations(f.left, negate), push_negations(f.right, negate)
        return Or(l, r) if negate else And(l, r)
    if isinstance(f, Or):
        l, r = push_negations(f.left, negate), push_negations(f.right, negate)
        return And(l, r) if negate else Or(l, r)
    if isinstance(f, Atom):
        s, t = f.lhs, f.rhs
        if f.op == "<":
            return Or(Atom("<", t, s), Atom("=", s, t)) if negate else f
        if f.op == "<=":
            return Atom("<", t, s) if negate else Or(Atom("<", s, t), Atom("=", s, t))
        return Or(Atom("<", s, t), Atom("<", t, s)) if negate else f
    raise TypeError(f"not a formula: {type(f).__name__}")


# ---------------------------------------------------------------------------
# flattening


def _isqrt_exact(n: int):
    r = math.isqrt(n)
    return r if r * r == n else None


def four_squares_int(n: int) -> tuple:
    """Integers (a, b, c, d) with a²+b²+c²+d² = n."""
    if n < 0:
        raise ValueError("negative")
    a = math.isqrt(n)
    while a >= 0:
        r = n - a * a
        b = math.isqrt(r)
        while b >= 0 and 3 * b * b >= r:
            r2 = r - b * b
            c = math.isqrt(r2)
            while c >= 0 and 2 * c * c >= r2:
                d = _isqrt_exact(r2 - c * c)
                if d is not None:
                    return a, b, c, d
                c -= 1
            b -= 1
        a -= 1
    raise AssertionError("unreachable by Lagrange's theorem")


def four_squares(r: Fraction) -> tuple:
    """Rationals whose squares sum to ``r`` (r ≥ 0)."""
    r = Fraction(r)
    num, den = r.numerator, r.denominator
    parts = four_squares_int(num * den)
    return tuple(Fraction(p, den) for p in parts)


def flatten_single_poly(inst: EtrInstance, cap: int = DEFAULT_CAP) -> PassResult:
    """One equation Σ g² = 0 with a variable ξ per Boolean node; ξ = 0 means the node holds.

    Gadgets: ξ - (p1 - p2) for equality; (p2 - p1)(a²+b²+c²+d²) - (1 - ξ) for <;
    ξ - ξu·ξw for or; ξ - (ξu² + ξw²) for and; finally ξ_root itself.
    """
    check_dialect(EtrInstance(Dialect.SIGMA, inst.formula, inst.variables))
    used = all_names(inst.formula) | set(inst.free_variables())
    gadgets: list = []
    plan: list = []

    def visit(f):
        xi = Var(fresh_name("xi", used))
        if isinstance(f, Atom):
            if f.op == "=":
                gadgets.append(sub(xi, sub(f.lhs, f.rhs)))
                plan.append(("eq", xi.name, f.lhs, f.rhs, ()))
            elif f.op == "<":
                aux = [Var(fresh_name(f"{xi.name}_s", used)) for _ in range(4)]
                total = add_all(square(a) for a in aux)
                gadgets.append(sub(Mul(sub(f.rhs, f.lhs), total), one_minus(xi)))
                plan.append(("lt", xi.name, f.lhs, f.rhs, tuple(a.name for a in aux)))
            else:
                raise UnsupportedAtom("flattening needs < and = atoms only; push negations first")
        elif isinstance(f, Or):
            u, w = visit(f.left), visit(f.right)
            gadgets.append(sub(xi, Mul(Var(u), Var(w))))
            plan.append(("or", xi.name, u, w, ()))
        elif isinstance(f, And):
            u, w = visit(f.left), visit(f.right)
            gadgets.append(sub(xi, Add(square(Var(u)), square(Var(w)))))
            plan.append(("and", xi.name, u, w, ()))
        else:
            raise UnsupportedAtom("flattening needs a negation-free formula; push negations first")
        return xi.name

    root = visit(inst.formula)
    gadgets.append(Var(root))
    formula = Atom("=", add_all(square(g) for g in gadgets), ZERO)
    source_vars = tuple(sorted(inst.free_variables()))
    new_vars = []
    for kind, xi, _, _, aux in plan:
        new_vars.append(xi)
        new_vars.extend(aux)
    target = check_dialect(EtrInstance(Dialect.SIGMA, formula, source_vars + tuple(new_vars)))

    def forward(w: Witness):
        values = {v: Fraction(w.payload[v]) for v in source_vars}
        out = dict(values)
        for kind, xi, a, b, aux in plan:
            if kind == "eq":
                out[xi] = eval_term(a, values, cap) - eval_term(b, values, cap)
            elif kind == "lt":
                gap = eval_term(b, values, cap) - eval_term(a, values, cap)
                if gap > 0:
                    out[xi] = Fraction(0)
                    out.update(zip(aux, four_squares(1 / gap)))
                else:
                    out[xi] = Fraction(1)
                    out.update({s: Fraction(0) for s in aux})
            elif kind == "or":
                out[xi] = out[a] * out[b]
            else:
                out[xi] = out[a] ** 2 + out[b] ** 2
        if out[root] != 0:
            return None
        return Witness("assignment", out, "flatten-single-poly forward")

    def backward(w: Witness):
        return Witness("assignment", {v: Fraction(w.payload[v]) for v in source_vars}, "flatten-single-poly backward")

    return PassResult(target, forward, backward, {"pass": "flatten-single-poly", "root": root, "gadgets": len(gadgets), "plan": tuple(plan)})
