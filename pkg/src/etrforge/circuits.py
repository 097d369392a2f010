"""Boolean circuits: immutable gate lists, a hash-consing builder, and vectorized evaluation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GATE_OPS = ("INPUT", "NOT", "AND", "OR", "CONST0", "CONST1")
CHUNK = 1 << 14


@dataclass(frozen=True)
class BoolCircuit:
    """Gate ``i`` is ``(op, args)``; ``INPUT k`` reads bit ``k`` of the input, most significant first."""

    n_inputs: int
    gates: tuple
    outputs: tuple

    def __post_init__(self):
        for i, (op, args) in enumerate(self.gates):
            if op not in GATE_OPS:
                raise ValueError(f"gate {i}: unknown op {op!r}")
            if op == "INPUT":
                if len(args) != 1 or not 0 <= args[0] < self.n_inputs:
                    raise ValueError(f"gate {i}: input index out of range")
            else:
                arity = {"NOT": 1, "AND": 2, "OR": 2}.get(op, 0)
                if len(args) != arity:
                    raise ValueError(f"gate {i}: {op} takes {arity} operands")
                if any(not 0 <= a < i for a in args):
                    raise ValueError(f"gate {i}: operands must precede the gate")
        for o in self.outputs:
            if not 0 <= o < len(self.gates):
                raise ValueError(f"output gate {o} does not exist")

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    def evaluate(self, bits) -> list:
        """Outputs for one input given as a bit sequence or an integer."""
        if isinstance(bits, int):
            index = bits
        else:
            bits = list(bits)
            if len(bits) != self.n_inputs:
                raise ValueError(f"expected {self.n_inputs} input bits, got {len(bits)}")
            index = 0
            for b in bits:
                index = (index << 1) | int(b)
        return [int(v) for v in self.evaluate_range(index, index + 1)[0]]

    def gate_values(self, bits) -> list:
        """Value of every gate on one input bit sequence."""
        bits = [int(b) for b in bits]
        values: list = []
        for op, args in self.gates:
            if op == "INPUT":
                values.append(bits[args[0]])
            elif op == "NOT":
                values.append(1 - values[args[0]])
            elif op == "AND":
                values.append(values[args[0]] & values[args[1]])
            elif op == "OR":
                values.append(values[args[0]] | values[args[1]])
            else:
                values.append(int(op == "CONST1"))
        return values

    def evaluate_range(self, start: int, stop: int) -> np.ndarray:
        """Boolean matrix of shape (stop - start, n_outputs) for consecutive input indices."""
        idx = np.arange(start, stop, dtype=np.int64)
        values = []
        for op, args in self.gates:
            if op == "INPUT":
                shift = self.n_inputs - 1 - args[0]
                values.append(((idx >> shift) & 1).astype(bool))
            elif op == "NOT":
                values.append(~values[args[0]])
            elif op == "AND":
                values.append(values[args[0]] & values[args[1]])
            elif op == "OR":
                values.append(values[args[0]] | values[args[1]])
            elif op == "CONST0":
                values.append(np.zeros(len(idx), dtype=bool))
            else:
                values.append(np.ones(len(idx), dtype=bool))
        if not self.outputs:
            return np.zeros((len(idx), 0), dtype=bool)
        return np.stack([values[o] for o in self.outputs], axis=1)

    def evaluate_all(self) -> np.ndarray:
        total = 1 << self.n_inputs
        parts = [self.evaluate_range(s, min(total, s + CHUNK)) for s in range(0, total, CHUNK)]
        return np.concatenate(parts, axis=0)


class CircuitBuilder:
    """Builds circuits with structural sharing and constant folding."""

    def __init__(self, n_inputs: int):
        self.n_inputs = n_inputs
        self.gates: list = []
        self.table: dict = {}

    def _gate(self, op, args=()):
        key = (op, tuple(args))
        got = self.table.get(key)
        if got is None:
            got = len(self.gates)
            self.gates.append(key)
            self.table[key] = got
        return got

    def const(self, bit) -> int:
        return self._gate("CONST1" if bit else "CONST0")

    def input(self, k: int) -> int:
        if not 0 <= k < self.n_inputs:
            raise ValueError(f"input {k} out of range")
        return self._gate("INPUT", (k,))

    def inputs(self, start: int = 0, count: int | None = None) -> list:
        count = self.n_inputs - start if count is None else count
        return [self.input(k) for k in range(start, start + count)]

    def _constant(self, g):
        op = self.gates[g][0]
        if op == "CONST0":
            return 0
        if op == "CONST1":
            return 1
        return None

    def not_(self, a: int) -> int:
        c = self._constant(a)
        if c is not None:
            return self.const(1 - c)
        op, args = self.gates[a]
        if op == "NOT":
            return args[0]
        return self._gate("NOT", (a,))

    def and_(self, a: int, b: int) -> int:
        ca, cb = self._constant(a), self._constant(b)
        if ca == 0 or cb == 0:
            return self.const(0)
        if ca == 1:
            return b
        if cb == 1 or a == b:
            return a
        return self._gate("AND", (min(a, b), max(a, b)))

    def or_(self, a: int, b: int) -> int:
        ca, cb = self._constant(a), self._constant(b)
        if ca == 1 or cb == 1:
            return self.const(1)
        if ca == 0:
            return b
        if cb == 0 or a == b:
            return a
        return self._gate("OR", (min(a, b), max(a, b)))

    def xor(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, self.not_(b)), self.and_(self.not_(a), b))

    def iff(self, a: int, b: int) -> int:
        return self.not_(self.xor(a, b))

    def mux(self, sel: int, if1: int, if0: int) -> int:
        return self.or_(self.and_(sel, if1), self.and_(self.not_(sel), if0))

    def and_all(self, gs) -> int:
        acc = self.const(1)
        for g in gs:
            acc = self.and_(acc, g)
        return acc

    def or_all(self, gs) -> int:
        acc = self.const(0)
        for g in gs:
            acc = self.or_(acc, g)
        return acc

    def const_word(self, value: int, width: int) -> list:
        return [self.const((value >> (width - 1 - k)) & 1) for k in range(width)]

    def equals_const(self, word, value: int) -> int:
        width = len(word)
        if value >> width:
            return self.const(0)
        lits = []
        for k, g in enumerate(word):
            bit = (value >> (width - 1 - k)) & 1
            lits.append(g if bit else self.not_(g))
        return self.and_all(lits)

    def equals(self, word_a, word_b) -> int:
        return self.and_all(self.iff(a, b) for a, b in zip(word_a, word_b, strict=True))

    def embed(self, circuit: BoolCircuit, inputs) -> list:
        """Copy ``circuit`` fed by the gates ``inputs``; returns its output gates."""
        inputs = list(inputs)
        if len(inputs) != circuit.n_inputs:
            raise ValueError("embedding width mismatch")
        ids = []
        for op, args in circuit.gates:
            if op == "INPUT":
                ids.append(inputs[args[0]])
            elif op == "NOT":
                ids.append(self.not_(ids[args[0]]))
            elif op == "AND":
                ids.append(self.and_(ids[args[0]], ids[args[1]]))
            elif op == "OR":
                ids.append(self.or_(ids[args[0]], ids[args[1]]))
            else:
                ids.append(self.const(op == "CONST1"))
        return [ids[o] for o in circuit.outputs]

    def build(self, outputs) -> BoolCircuit:
        """Freeze, keeping only gates that feed an output."""
        outputs = list(outputs)
        keep = set()
        stack = list(outputs)
        while stack:
            g = stack.pop()
            if g in keep:
                continue
            keep.add(g)
            op, args = self.gates[g]
            if op in ("NOT", "AND", "OR"):
                stack.extend(args)
        order = sorted(keep)
        remap = {old: new for new, old in enumerate(order)}
        gates = []
        for old in order:
            op, args = self.gates[old]
            if op in ("NOT", "AND", "OR"):
                args = tuple(remap[a] for a in args)
            gates.append((op, args))
        return BoolCircuit(self.n_inputs, tuple(gates), tuple(remap[o] for o in outputs))


def constant_circuit(n_inputs: int, table) -> BoolCircuit:
    """Circuit whose output on input ``i`` is the bit list ``table[i]`` (for small fixtures)."""
    b = CircuitBuilder(n_inputs)
    word = b.inputs()
    width = len(table[0])
    outs = []
    for bit in range(width):
        outs.append(b.or_all(b.equals_const(word, i) for i, row in enumerate(table) if row[bit]))
    return b.build(outs)
