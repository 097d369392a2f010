"""Permutation-matrix indicator and the permanent as a sum over 0/1 matrices."""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from ..core import Add, Const, Mul, Sum, Var, add_all, mul_all


def entry_name(i: int, j: int) -> str:
    return f"x{i}_{j}"


def one_indicator(t, m: int):
    """Lagrange polynomial of degree m: 1 at t = 1, 0 on {0..m} minus {1}."""
    factors = [Mul(Const(Fraction(1, 1 - k)), Add(t, Const(-k))) for k in range(m + 1) if k != 1]
    return mul_all(factors)


def permutation_indicator(m: int, entry=None):
    """δ(M): 1 iff the 0/1 matrix M is a permutation matrix, else 0.

    ``entry(i, j)`` gives the term for M_ij (1-based); default Var(x{i}_{j}).
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    entry = entry or (lambda i, j: Var(entry_name(i, j)))
    rows = [one_indicator(add_all(entry(i, j) for j in range(1, m + 1)), m) for i in range(1, m + 1)]
    cols = [one_indicator(add_all(entry(i, j) for i in range(1, m + 1)), m) for j in range(1, m + 1)]
    return mul_all(rows + cols)


def permanent_term(m: int):
    """Σ over bit matrices B of δ(B) · Π_i Σ_j B_ij x_ij; free variables x{i}_{j}."""
    bit = lambda i, j: Var(f"b{i}_{j}")  # noqa: E731
    product = mul_all(
        add_all(Mul(bit(i, j), Var(entry_name(i, j))) for j in range(1, m + 1)) for i in range(1, m + 1)
    )
    body = Mul(permutation_indicator(m, bit), product)
    for i in reversed(range(1, m + 1)):
        for j in reversed(range(1, m + 1)):
            body = Sum(f"b{i}_{j}", 2, body)
    return body


def brute_force_permanent(matrix) -> Fraction:
    m = len(matrix)
    total = Fraction(0)
    for perm in permutations(range(m)):
        prod = Fraction(1)
        for i, j in enumerate(perm):
            prod *= Fraction(matrix[i][j])
        total += prod
    return total
