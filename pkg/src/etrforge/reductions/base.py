"""Pass results with optional witness transport."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional


@dataclass(frozen=True)
class PassResult:
    """Target instance plus partial witness maps (``None`` result means not transportable)."""

    target: object
    forward: Optional[Callable] = None
    backward: Optional[Callable] = None
    notes: dict = field(default_factory=dict)

    def transport(self, witness):
        if self.forward is None:
            raise ValueError("this pass has no forward witness map")
        return self.forward(witness)

    def pull_back(self, witness):
        if self.backward is None:
            raise ValueError("this pass has no backward witness map")
        return self.backward(witness)
