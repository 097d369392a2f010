"""QBF to product-ETR."""
from __future__ import annotations

from ..core import ONE, Atom, Dialect, EtrInstance, Prod, QbfInstance, one_minus
from .arith import arithmetize_bool
from .base import PassResult


def qbf_to_pietr(q: QbfInstance) -> PassResult:
    """Closed Π instance ``A(q) = 1``; ∀ becomes a product, ∃ a complemented product."""
    term = arithmetize_bool(q.matrix)
    for quant, name in reversed(q.prefix):
        if quant == "A":
            term = Prod(name, 2, term)
        else:
            term = one_minus(Prod(name, 2, one_minus(term)))
    target = EtrInstance(Dialect.PI, Atom("=", term, ONE), ())
    return PassResult(target, notes={"pass": "qbf-to-pietr"})
