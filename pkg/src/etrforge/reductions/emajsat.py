"""E-MajSat to sum-ETR."""
from __future__ import annotations

from fractions import Fraction

from ..core import (
    Atom,
    Const,
    Dialect,
    EMajSatInstance,
    EtrInstance,
    Or,
    Sum,
    Var,
    Witness,
    and_all,
    const,
)
from .arith import arithmetize_bool
from .base import PassResult


def emajsat_to_sigmaetr(inst: EMajSatInstance) -> PassResult:
    """Booleanity disjunctions for the x variables plus the majority threshold over y."""
    count = arithmetize_bool(inst.matrix)
    for y in reversed(inst.y_vars):
        count = Sum(y, 2, count)
    threshold = Const(Fraction(2) ** (len(inst.y_vars) - 1))
    parts = [Or(Atom("=", Var(x), const(0)), Atom("=", Var(x), const(1))) for x in inst.x_vars]
    parts.append(Atom("<=", threshold, count))
    target = EtrInstance(Dialect.SIGMA, and_all(parts), tuple(inst.x_vars))

    def forward(w: Witness):
        values = {x: Fraction(w.payload[x]) for x in inst.x_vars}
        if any(v not in (0, 1) for v in values.values()):
            return None
        return Witness("assignment", values, "emajsat-to-sigmaetr forward")

    def backward(w: Witness):
        return Witness("assignment", {x: Fraction(w.payload[x]) for x in inst.x_vars}, "emajsat-to-sigmaetr backward")

    return PassResult(target, forward, backward, {"pass": "emajsat-to-sigmaetr"})
