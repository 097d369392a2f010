"""Reduction passes and a name registry for batch use."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..core import EtrInstance, ProbInstance
from .base import PassResult
from .emajsat import emajsat_to_sigmaetr
from .eso_passes import Succ18Instance, leso_leq_rewrite, succ18_to_leso
from .normal_forms import flatten_single_poly, prenex_sums, push_negations
from .probabilistic import (
    normalize_prob_primitives,
    sigmaetr_half_to_smsat,
    smsat_to_sigmaetr,
    sumvi1_to_probsat,
)
from .qbf import qbf_to_pietr
from .scaling import sumvi_to_sumvi1


def _identity(w):
    return w


def _normalize_prob(inst: ProbInstance, params: dict) -> PassResult:
    return PassResult(normalize_prob_primitives(inst), _identity, _identity, {"pass": "normalize-prob"})


def _push_negations(inst: EtrInstance, params: dict) -> PassResult:
    target = EtrInstance(inst.dialect, push_negations(inst.formula), inst.variables, inst.candidates)
    return PassResult(target, _identity, _identity, {"pass": "push-negations"})


def _int_param(params: dict, key: str, default=None):
    value = params.get(key, default)
    return None if value is None else int(value)


@dataclass(frozen=True)
class PassSpec:
    name: str
    source: str
    run: Callable


PASSES = {
    p.name: p
    for p in [
        PassSpec("qbf-to-pietr", "qbf", lambda i, k: qbf_to_pietr(i)),
        PassSpec("emajsat-to-sigmaetr", "emajsat", lambda i, k: emajsat_to_sigmaetr(i)),
        PassSpec(
            "sumvi-to-sumvi1",
            "etr",
            lambda i, k: sumvi_to_sumvi1(i, _int_param(k, "m", 1), _int_param(k, "s")),
        ),
        PassSpec("sumvi1-to-probsat", "etr", lambda i, k: sumvi1_to_probsat(i)),
        PassSpec("sigmaetr-half-to-smsat", "etr", lambda i, k: sigmaetr_half_to_smsat(i)),
        PassSpec("normalize-prob", "prob", _normalize_prob),
        PassSpec("smsat-to-sigmaetr", "prob", lambda i, k: smsat_to_sigmaetr(i, _int_param(k, "p"))),
        PassSpec("prenex-sums", "etr", lambda i, k: prenex_sums(i)),
        PassSpec("push-negations", "etr", _push_negations),
        PassSpec("flatten-single-poly", "etr", lambda i, k: flatten_single_poly(i)),
        PassSpec("succ18-to-leso", "succ18", lambda i, k: succ18_to_leso(i)),
        PassSpec("leso-leq-rewrite", "eso", lambda i, k: leso_leq_rewrite(i)),
    ]
}


def run_pass(name: str, inst, params: dict | None = None) -> PassResult:
    if name not in PASSES:
        raise KeyError(f"unknown pass {name!r}; known: {', '.join(sorted(PASSES))}")
    return PASSES[name].run(inst, dict(params or {}))


__all__ = [
    "PASSES",
    "PassResult",
    "PassSpec",
    "Succ18Instance",
    "emajsat_to_sigmaetr",
    "flatten_single_poly",
    "leso_leq_rewrite",
    "normalize_prob_primitives",
    "prenex_sums",
    "push_negations",
    "qbf_to_pietr",
    "run_pass",
    "sigmaetr_half_to_smsat",
    "smsat_to_sigmaetr",
    "succ18_to_leso",
    "sumvi1_to_probsat",
    "sumvi_to_sumvi1",
]
