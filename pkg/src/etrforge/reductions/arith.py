"""Arithmetization of propositional formulas and the solution-distance bound."""
from __future__ import annotations

from dataclasses import dataclass

from ..core import (
    And,
    Atom,
    BoundParameters,
    Const,
    Mul,
    NonPropositionalAtom,
    Not,
    Or,
    Var,
    one_minus,
)


def is_propositional_atom(f) -> bool:
    return (
        isinstance(f, Atom)
        and f.op == "="
        and isinstance(f.lhs, Var)
        and isinstance(f.rhs, Const)
        and f.rhs.value == 1
    )


def arithmetize_bool(f):
    """0/1-valued polynomial term equal to the truth value of ``f`` on Boolean inputs."""
    if isinstance(f, Atom):
        if not is_propositional_atom(f):
            raise NonPropositionalAtom(f"atom is not of the form x = 1: {f}")
        return f.lhs
    if isinstance(f, Not):
        return one_minus(arithmetize_bool(f.arg))
    if isinstance(f, And):
        return Mul(arithmetize_bool(f.left), arithmetize_bool(f.right))
    if isinstance(f, Or):
        return one_minus(Mul(one_minus(arithmetize_bool(f.left)), one_minus(arithmetize_bool(f.right))))
    raise TypeError(f"not a formula: {type(f).__name__}")


@dataclass(frozen=True)
class SolutionBound:
    """The bound 2^(L * d^(c*n)) kept symbolic."""

    L: int
    d: int
    cn: int

    @property
    def exponent(self) -> int:
        return self.L * self.d ** self.cn

    def value(self) -> int:
        return 2 ** self.exponent


def compute_solution_bound(b: BoundParameters) -> SolutionBound:
    if min(b.L, b.d, b.n, b.c) < 1:
        raise ValueError("bound parameters must be positive")
    return SolutionBound(b.L, b.d, b.c * b.n)
