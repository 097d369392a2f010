"""Exact toolkit for the existential theory of the reals, its summation and product
dialects, succinctly encoded instances and probabilistic satisfiability."""
from .core import (
    Dialect,
    Distribution,
    EMajSatInstance,
    EtrError,
    EtrInstance,
    ProbInstance,
    QbfInstance,
    Witness,
    check_dialect,
    validate_dialect,
)
from .decide import brute_force_decide, check_witness
from .evaluation import eval_formula, eval_prob_formula, eval_qbf, eval_term
from .textio import parse, render

__version__ = "0.1.0"

__all__ = [
    "Dialect",
    "Distribution",
    "EMajSatInstance",
    "EtrError",
    "EtrInstance",
    "ProbInstance",
    "QbfInstance",
    "Witness",
    "brute_force_decide",
    "check_dialect",
    "check_witness",
    "eval_formula",
    "eval_prob_formula",
    "eval_qbf",
    "eval_term",
    "parse",
    "render",
    "validate_dialect",
]
