"""Circuit-encoded formula trees: node records, expansion, negation removal and the Σ/Π compiler.

A node record is ``opcode (8 bits) | parent | child0 | child1 | payload`` with
every field most significant bit first and the index fields ``N`` bits wide.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import BoolCircuit, CircuitBuilder
from .core import (
    Add,
    And,
    Atom,
    Const,
    Dialect,
    EtrInstance,
    IllFormed,
    MalformedOpcode,
    Mul,
    Neg,
    Not,
    Or,
    Prod,
    Sum,
    TooLarge,
    Var,
    check_dialect,
    free_vars,
    lower_constants,
)

OPCODES = {
    "const0": 0,
    "const1": 1,
    "var": 2,
    "add": 3,
    "mul": 4,
    "and": 5,
    "or": 6,
    "not": 7,
    "lt": 8,
    "le": 9,
    "eq": 10,
    "neg": 11,
    "disabled": 255,
}
OPNAMES = {v: k for k, v in OPCODES.items()}
BOOLEAN_OPS = {5, 6, 7, 8, 9, 10}
ATOM_OPS = {8, 9, 10}
CONNECTIVE_OPS = {5, 6, 7}
ARITH_OPS = {0, 1, 2, 3, 4, 11}
LEAF_OPS = {0, 1, 2}
UNARY_OPS = {7, 11}
DISABLED = 255
DEFAULT_CAP = 1 << 20


@dataclass(frozen=True)
class NodeDescription:
    opcode: int
    parent: int
    child0: int
    child1: int
    payload: int

    @property
    def name(self) -> str:
        return OPNAMES.get(self.opcode, f"op{self.opcode}")

    @property
    def enabled(self) -> bool:
        return self.opcode != DISABLED


@dataclass(frozen=True)
class SuccCircuit:
    circuit: BoolCircuit
    unary: bool = False
    var_names: tuple = ()

    def __post_init__(self):
        n = self.circuit.n_inputs
        if self.circuit.n_outputs != 8 + 4 * n:
            raise ValueError(f"node circuit over {n} index bits needs {8 + 4 * n} outputs")

    @property
    def width(self) -> int:
        return self.circuit.n_inputs

    def var_name(self, payload: int) -> str:
        if self.unary:
            j = payload.bit_length() - 1
            if payload != (1 << (j + 1)) - 1:
                raise IllFormed(f"payload {payload:b} is not a unary variable code")
        else:
            j = payload
        if self.var_names:
            if j >= len(self.var_names):
                raise IllFormed(f"variable number {j} has no name")
            return self.var_names[j]
        return f"x{j}"


def _bits_to_int(bits) -> int:
    v = 0
    for b in bits:
        v = (v << 1) | int(b)
    return v


def _decode_row(row, n) -> NodeDescription:
    fields = [_bits_to_int(row[:8])]
    for k in range(4):
        fields.append(_bits_to_int(row[8 + k * n: 8 + (k + 1) * n]))
    return NodeDescription(*fields)


def _check_opcode(op, index):
    if op not in OPNAMES:
        raise MalformedOpcode(f"node {index}: opcode {op} is not assigned")


def eval_node(s: SuccCircuit, index) -> NodeDescription:
    """Decode the record of node ``index`` (an integer or a bit sequence of length N)."""
    if not isinstance(index, int):
        bits = list(index)
        if len(bits) != s.width:
            raise ValueError(f"index needs {s.width} bits")
        index = _bits_to_int(bits)
    if not 0 <= index < (1 << s.width):
        raise ValueError(f"index {index} out of range")
    node = _decode_row(s.circuit.evaluate(index), s.width)
    _check_opcode(node.opcode, index)
    return node


def _pack(matrix, start, width):
    out = np.zeros(matrix.shape[0], dtype=np.int64)
    for k in range(width):
        out = (out << 1) | matrix[:, start + k].astype(np.int64)
    return out


def decode_all(s: SuccCircuit, cap: int = DEFAULT_CAP) -> dict:
    """Numpy arrays of every field over all 2^N indices."""
    n = s.width
    if (1 << n) > cap:
        raise TooLarge(f"2^{n} nodes exceed the expansion cap {cap}")
    matrix = s.circuit.evaluate_all()
    fields = {"opcode": _pack(matrix, 0, 8)}
    for k, name in enumerate(("parent", "child0", "child1", "payload")):
        fields[name] = _pack(matrix, 8 + k * n, n)
    bad = ~np.isin(fields["opcode"], list(OPNAMES))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise MalformedOpcode(f"node {i}: opcode {int(fields['opcode'][i])} is not assigned")
    return fields


def _validate(fields):
    op = fields["opcode"]
    par, c0, c1 = fields["parent"], fields["child0"], fields["child1"]
    size = len(op)
    idx = np.arange(size, dtype=np.int64)
    enabled = op != DISABLED
    if not enabled[0]:
        raise IllFormed("root node 0 is disabled")
    if int(op[0]) not in BOOLEAN_OPS:
        raise IllFormed(f"root node is {OPNAMES[int(op[0])]}, not Boolean")
    if par[0] != 0:
        raise IllFormed("root node must be its own parent")

    def fail(mask, rule):
        if mask.any():
            i = int(np.flatnonzero(mask)[0])
            raise IllFormed(f"node {i}: {rule}")

    leaf = np.isin(op, list(LEAF_OPS)) & enabled
    unary = np.isin(op, list(UNARY_OPS))
    binary = enabled & ~leaf & ~unary
    fail(leaf & ((c0 != idx) | (c1 != idx)), "leaf children must point to the node itself")
    fail(unary & (c1 != c0), "unary node must repeat its child")
    fail(unary & (c0 == idx), "unary node is its own child")
    fail(binary & ((c0 == c1) | (c0 == idx) | (c1 == idx)), "binary node needs two distinct children")
    internal = enabled & ~leaf
    for child in (c0, c1):
        kids = child[internal]
        owners = idx[internal]
        fail_idx = ~enabled[kids]
        if fail_idx.any():
            raise IllFormed(f"node {int(owners[fail_idx][0])}: child {int(kids[fail_idx][0])} is disabled")
        wrong = par[kids] != owners
        if wrong.any():
            raise IllFormed(f"node {int(kids[wrong][0])}: parent pointer disagrees with node {int(owners[wrong][0])}")
    nonroot = enabled & (idx != 0)
    p = par[nonroot]
    fail_p = ~enabled[p]
    if fail_p.any():
        raise IllFormed(f"node {int(idx[nonroot][fail_p][0])}: parent {int(p[fail_p][0])} is disabled")
    owned = (c0[p] == idx[nonroot]) | (c1[p] == idx[nonroot])
    owned &= ~np.isin(op[p], list(LEAF_OPS))
    if not owned.all():
        raise IllFormed(f"node {int(idx[nonroot][~owned][0])}: not a child of its parent")
    # typing
    conn = np.isin(op, list(CONNECTIVE_OPS))
    atom = np.isin(op, list(ATOM_OPS))
    arith_internal = np.isin(op, [3, 4, 11])
    boolean = np.isin(op, list(BOOLEAN_OPS))
    arith = np.isin(op, list(ARITH_OPS))
    for child in (c0, c1):
        fail(conn & ~boolean[child], "connective over an arithmetic node")
        fail(atom & ~arith[child], "comparison over a Boolean node")
        fail(arith_internal & ~arith[child], "Boolean node under an arithmetic node")
    # reachability (parent agreement makes the enabled part a forest rooted at self-parents)
    seen = np.zeros(size, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int64)
    while len(frontier):
        inner = frontier[~np.isin(op[frontier], list(LEAF_OPS))]
        nxt = np.unique(np.concatenate([c0[inner], c1[inner]])) if len(inner) else np.array([], dtype=np.int64)
        if seen[nxt].any():
            raise IllFormed(f"node {int(nxt[seen[nxt]][0])} reached twice")
        seen[nxt] = True
        frontier = nxt
    fail(enabled & ~seen, "enabled node not reachable from the root")


def _build_tree(s: SuccCircuit, fields, index, memo=None):
    op, c0, c1, payload = fields["opcode"], fields["child0"], fields["child1"], fields["payload"]
    built: dict = {}
    stack = [(index, False)]
    while stack:
        i, ready = stack.pop()
        if i in built:
            continue
        code = int(op[i])
        if code == DISABLED:
            raise IllFormed(f"node {i} is disabled")
        if code in LEAF_OPS:
            if code == 0:
                built[i] = Const(0)
            elif code == 1:
                built[i] = Const(1)
            else:
                built[i] = Var(s.var_name(int(payload[i])))
            continue
        kids = [int(c0[i])] if code in UNARY_OPS else [int(c0[i]), int(c1[i])]
        if not ready:
            stack.append((i, True))
            stack.extend((k, False) for k in kids if k not in built)
            continue
        args = [built[k] for k in kids]
        if code == 3:
            built[i] = Add(*args)
        elif code == 4:
            built[i] = Mul(*args)
        elif code == 11:
            built[i] = Neg(args[0])
        elif code == 5:
            built[i] = And(*args)
        elif code == 6:
            built[i] = Or(*args)
        elif code == 7:
            built[i] = Not(args[0])
        else:
            built[i] = Atom({8: "<", 9: "<=", 10: "="}[code], *args)
    return built[index]


def expand_succ(s: SuccCircuit, cap: int = DEFAULT_CAP) -> EtrInstance:
    """Reconstruct the explicit formula after checking tree consistency."""
    fields = decode_all(s, cap)
    _validate(fields)
    formula = _build_tree(s, fields, 0)
    names = tuple(s.var_names) if s.var_names else tuple(sorted(free_vars(formula)))
    return EtrInstance(Dialect.ETR, formula, names)


def expand_subtree(s: SuccCircuit, index: int, cap: int = DEFAULT_CAP):
    """Explicit term or formula rooted at ``index`` (no global consistency check)."""
    fields = decode_all(s, cap)
    return _build_tree(s, fields, index)


def validate_succ(s: SuccCircuit, cap: int = DEFAULT_CAP) -> None:
    _validate(decode_all(s, cap))


def labels(s: SuccCircuit, cap: int = DEFAULT_CAP) -> set:
    """Opcode names used by enabled nodes."""
    op = decode_all(s, cap)["opcode"]
    return {OPNAMES[int(v)] for v in np.unique(op) if int(v) != DISABLED}


# ---------------------------------------------------------------------------
# building node circuits from a list of (condition, record) cases


class _RecordSink:
    """Collects mutually exclusive cases; unmatched indices decode to disabled."""

    def __init__(self, b: CircuitBuilder, n: int):
        self.b = b
        self.n = n
        self.cases: list = []

    def word(self, value: int) -> list:
        return self.b.const_word(value, self.n)

    def add(self, cond: int, opcode, parent, child0, child1, payload=None):
        b = self.b
        op_word = b.const_word(opcode, 8) if isinstance(opcode, int) else list(opcode)
        payload = self.word(0) if payload is None else payload
        self.cases.append((cond, op_word + list(parent) + list(child0) + list(child1) + list(payload)))

    def outputs(self) -> list:
        b = self.b
        width = 8 + 4 * self.n
        cols = [[] for _ in range(width)]
        matched = []
        for cond, bits in self.cases:
            matched.append(cond)
            for k, g in enumerate(bits):
                cols[k].append(b.and_(cond, g))
        none = b.not_(b.or_all(matched))
        outs = []
        for k in range(width):
            g = b.or_all(cols[k])
            if k < 8:
                g = b.or_(g, none)
            outs.append(g)
        return outs


# ---------------------------------------------------------------------------
# negation removal

SLOT_BITS = 3


def plus_index(v: int, n: int) -> int:
    """Target index of the node computing the truth value of source node ``v``."""
    return (1 << (n + SLOT_BITS)) | v


def minus_index(v: int, n: int) -> int:
    """Target index of the node computing the negation of source node ``v``."""
    return (1 << (n + SLOT_BITS)) | (1 << n) | v


def copy_index(v: int, k: int, n: int) -> int:
    """Target index of arithmetic copy ``k`` (1, 2 or 3) of source node ``v``."""
    return (1 << (n + SLOT_BITS)) | ((k - 1) << n) | v


def remove_negations(s: SuccCircuit, cap: int = DEFAULT_CAP) -> SuccCircuit:
    """Equivalent circuit without NOT nodes and without ≤ comparisons.

    Target indices are ``w | slot (3 bits) | source index``.  The region
    ``w = 0`` holds a constant wrapper at index 0 that keeps both polarity
    cones of the source root reachable; ``w = 1`` holds the gadgets.
    """
    n = s.width
    if (1 << n) <= cap:
        validate_succ(s, cap)
    tn = n + 1 + SLOT_BITS
    b = CircuitBuilder(tn)
    sink = _RecordSink(b, tn)
    w = b.input(0)
    slot = b.inputs(1, SLOT_BITS)
    orig = b.inputs(1 + SLOT_BITS, n)
    src = b.embed(s.circuit, orig)
    s_op = src[:8]
    s_par = src[8:8 + n]
    s_c0 = src[8 + n:8 + 2 * n]
    s_c1 = src[8 + 2 * n:8 + 3 * n]
    s_pay = src[8 + 3 * n:]
    p_op = b.embed(s.circuit, s_par)[:8]

    zero1 = [b.const(0)]
    one1 = [b.const(1)]

    def at(region, k, field):
        return (one1 if region else zero1) + b.const_word(k, SLOT_BITS) + list(field)

    orig0 = b.const_word(0, n)
    is_w0 = b.and_(b.not_(w), b.equals_const(orig, 0))

    def slot_is(k):
        return b.equals_const(slot, k)

    def wrap(k):
        return at(0, k, orig0)

    # wrapper: R = root+ and (root- or (0 = 0))
    sink.add(b.and_(is_w0, slot_is(0)), OPCODES["and"], wrap(0), at(1, 0, orig0), wrap(1))
    sink.add(b.and_(is_w0, slot_is(1)), OPCODES["or"], wrap(0), at(1, 1, orig0), wrap(2))
    sink.add(b.and_(is_w0, slot_is(2)), OPCODES["eq"], wrap(1), wrap(3), wrap(4))
    sink.add(b.and_(is_w0, slot_is(3)), OPCODES["const0"], wrap(2), wrap(3), wrap(3))
    sink.add(b.and_(is_w0, slot_is(4)), OPCODES["const0"], wrap(2), wrap(4), wrap(4))

    def op_is(word, name):
        return b.equals_const(word, OPCODES[name])

    src_is = {name: op_is(s_op, name) for name in OPCODES}
    par_is = {name: op_is(p_op, name) for name in OPCODES}
    is_root = b.equals_const(orig, 0)
    g1 = w

    def case(cond_src, k):
        return b.and_all([g1, cond_src, slot_is(k)])

    here = lambda k: at(1, k, orig)  # noqa: E731
    c0 = lambda k: at(1, k, s_c0)  # noqa: E731
    c1 = lambda k: at(1, k, s_c1)  # noqa: E731
    par = lambda k: at(1, k, s_par)  # noqa: E731

    # parents of the two polarity nodes of a Boolean source node
    under_and_or = b.or_(par_is["and"], par_is["or"])
    under_not = par_is["not"]
    nonroot = b.not_(is_root)

    def pick(options):
        """Mux a list of (condition, word) pairs into one word."""
        out = []
        for bit in range(tn):
            out.append(b.or_all(b.and_(c, word[bit]) for c, word in options))
        return out

    plus_parent = pick([
        (is_root, wrap(0)),
        (b.and_(nonroot, under_and_or), par(0)),
        (b.and_(nonroot, under_not), par(1)),
    ])
    minus_parent = pick([
        (is_root, wrap(1)),
        (b.and_(nonroot, under_and_or), par(1)),
        (b.and_(nonroot, under_not), par(0)),
    ])

    # connectives
    for name, dual in (("and", "or"), ("or", "and")):
        cond = src_is[name]
        sink.add(case(cond, 0), OPCODES[name], plus_parent, c0(0), c1(0))
        sink.add(case(cond, 1), OPCODES[dual], minus_parent, c0(1), c1(1))
    cond = src_is["not"]
    sink.add(case(cond, 0), OPCODES["and"], plus_parent, c0(1), here(2))
    sink.add(case(cond, 1), OPCODES["and"], minus_parent, c0(0), here(3))
    sink.add(case(cond, 2), OPCODES["eq"], here(0), here(4), here(5))
    sink.add(case(cond, 3), OPCODES["eq"], here(1), here(6), here(7))
    for k, owner in ((4, 2), (5, 2), (6, 3), (7, 3)):
        sink.add(case(cond, k), OPCODES["const0"], here(owner), here(k), here(k))

    # comparisons: arithmetic copy j of a child lives in slot j - 1
    cond = src_is["eq"]
    sink.add(case(cond, 0), OPCODES["eq"], plus_parent, c0(0), c1(0))
    sink.add(case(cond, 1), OPCODES["or"], minus_parent, here(2), here(3))
    sink.add(case(cond, 2), OPCODES["lt"], here(1), c0(1), c1(1))
    sink.add(case(cond, 3), OPCODES["lt"], here(1), c1(2), c0(2))
    cond = src_is["le"]
    sink.add(case(cond, 0), OPCODES["or"], plus_parent, here(2), here(3))
    sink.add(case(cond, 1), OPCODES["lt"], minus_parent, c1(2), c0(2))
    sink.add(case(cond, 2), OPCODES["lt"], here(0), c0(0), c1(0))
    sink.add(case(cond, 3), OPCODES["eq"], here(0), c0(1), c1(1))
    cond = src_is["lt"]
    sink.add(case(cond, 0), OPCODES["lt"], plus_parent, c0(0), c1(0))
    sink.add(case(cond, 1), OPCODES["or"], minus_parent, here(2), here(3))
    sink.add(case(cond, 2), OPCODES["lt"], here(1), c1(1), c0(1))
    sink.add(case(cond, 3), OPCODES["eq"], here(1), c0(2), c1(2))

    # arithmetic copies
    arith = b.or_all(src_is[name] for name in ("const0", "const1", "var", "add", "mul", "neg"))
    under_arith = b.or_all(par_is[name] for name in ("add", "mul", "neg"))
    under_eq_lt = b.or_(par_is["eq"], par_is["lt"])
    under_le = par_is["le"]
    eq_lt_slot = {0: 0, 1: 2, 2: 3}
    le_slot = {0: 2, 1: 3, 2: 1}
    for k in range(3):
        parent = pick([
            (under_arith, par(k)),
            (under_eq_lt, par(eq_lt_slot[k])),
            (under_le, par(le_slot[k])),
        ])
        sink.add(case(arith, k), s_op, parent, c0(k), c1(k), [b.const(0)] * (tn - n) + list(s_pay))

    circuit = b.build(sink.outputs())
    return SuccCircuit(circuit, s.unary, s.var_names)


# ---------------------------------------------------------------------------
# Σ/Π compiler


@dataclass
class _TreeNode:
    kind: str
    parent: int
    children: list
    depth: int
    binder_level: int = 0
    var_index: int = 0
    value: int = 0


def _flatten(formula, var_index):
    nodes: list = []
    binder_level: dict = {}

    def visit(node, parent, depth):
        me = len(nodes)
        nodes.append(_TreeNode("", parent, [], depth))
        rec = nodes[me]
        if isinstance(node, Atom):
            rec.kind = {"<": "lt", "<=": "le", "=": "eq"}[node.op]
            kids = [(node.lhs, depth), (node.rhs, depth)]
        elif isinstance(node, Not):
            rec.kind, kids = "not", [(node.arg, depth)]
        elif isinstance(node, And):
            rec.kind, kids = "and", [(node.left, depth), (node.right, depth)]
        elif isinstance(node, Or):
            rec.kind, kids = "or", [(node.left, depth), (node.right, depth)]
        elif isinstance(node, Add):
            rec.kind, kids = "add", [(node.left, depth), (node.right, depth)]
        elif isinstance(node, Mul):
            rec.kind, kids = "mul", [(node.left, depth), (node.right, depth)]
        elif isinstance(node, Neg):
            rec.kind, kids = "neg", [(node.arg, depth)]
        elif isinstance(node, (Sum, Prod)):
            rec.kind = "sum" if isinstance(node, Sum) else "prod"
            binder_level[node.binder] = depth + 1
            kids = [(node.body, depth + 1)]
        elif isinstance(node, Const):
            rec.kind = "const1" if node.value == 1 else "const0"
            kids = []
        elif isinstance(node, Var):
            if node.name in binder_level:
                rec.kind = "bound"
                rec.binder_level = binder_level[node.name]
            else:
                rec.kind = "var"
                rec.var_index = var_index[node.name]
            kids = []
        else:
            raise TypeError(f"cannot compile {type(node).__name__}")
        for child, d in kids:
            rec.children.append(visit(child, me, d))
        if isinstance(node, (Sum, Prod)):
            del binder_level[node.binder]
        return me

    visit(formula, 0, 0)
    return nodes


def compile_sigma_pi(inst: EtrInstance) -> SuccCircuit:
    """Encode a ΣΠ instance as a node circuit with one node per binder valuation.

    Index layout is ``tree node (K bits) | binder bits e1..eD | padding``.
    Constants are first lowered to 0/1 chains; variables are unary-coded.
    """
    check_dialect(EtrInstance(Dialect.SIGMA_PI, inst.formula, inst.variables))
    formula = lower_constants(inst.formula)
    names = tuple(sorted(inst.free_variables()))
    var_index = {v: j for j, v in enumerate(names)}
    nodes = _flatten(formula, var_index)
    count = len(nodes)
    k_bits = max(1, math.ceil(math.log2(count)))
    depth = max(node.depth for node in nodes)
    n = max(k_bits + depth, len(names), 1)
    b = CircuitBuilder(n)
    sink = _RecordSink(b, n)
    vbits = b.inputs(0, k_bits)
    ebits = b.inputs(k_bits, depth)
    rest_zero = b.and_all(b.not_(g) for g in b.inputs(k_bits + depth, n - k_bits - depth))
    zero = b.const(0)

    def address(v, level, override=None):
        bits = list(b.const_word(v, k_bits))
        for i in range(depth):
            if i < level:
                bits.append(ebits[i])
            else:
                bits.append(zero)
        if override is not None:
            bits[k_bits + level] = b.const(override)
        return bits + [zero] * (n - k_bits - depth)

    for v, node in enumerate(nodes):
        level = node.depth
        valid = b.and_all([b.equals_const(vbits, v), rest_zero] + [b.not_(ebits[i]) for i in range(level, depth)])
        if v == 0:
            parent = address(0, 0)
        else:
            p = nodes[node.parent]
            parent = address(node.parent, p.depth)
        me = address(v, level)
        if node.kind in ("sum", "prod"):
            body = node.children[0]
            sink.add(valid, OPCODES["add" if node.kind == "sum" else "mul"], parent,
                     address(body, level, 0), address(body, level, 1))
        elif node.kind == "bound":
            bit = ebits[node.binder_level - 1]
            sink.add(valid, [zero] * 7 + [bit], parent, me, me)
        elif node.kind == "var":
            payload = b.const_word((1 << (node.var_index + 1)) - 1, n)
            sink.add(valid, OPCODES["var"], parent, me, me, payload)
        elif node.kind in ("const0", "const1"):
            sink.add(valid, OPCODES[node.kind], parent, me, me)
        else:
            kids = [address(c, level) for c in node.children]
            if len(kids) == 1:
                kids.append(kids[0])
            sink.add(valid, OPCODES[node.kind], parent, kids[0], kids[1])
    circuit = b.build(sink.outputs())
    return SuccCircuit(circuit, True, names)


def encode_tree(inst: EtrInstance, unary: bool = False) -> SuccCircuit:
    """Encode a binder-free formula with one index per tree node (preorder, root 0)."""
    check_dialect(EtrInstance(Dialect.ETR, inst.formula, inst.variables))
    formula = lower_constants(inst.formula)
    names = tuple(sorted(inst.free_variables()))
    nodes = _flatten(formula, {v: j for j, v in enumerate(names)})
    n = max(1, math.ceil(math.log2(len(nodes))))
    if unary:
        n = max(n, len(names))
    elif names:
        n = max(n, math.ceil(math.log2(len(names))) if len(names) > 1 else 1)
    b = CircuitBuilder(n)
    sink = _RecordSink(b, n)
    word = b.inputs()
    for v, node in enumerate(nodes):
        me = sink.word(v)
        parent = sink.word(node.parent)
        payload = None
        if node.kind == "var":
            code = (1 << (node.var_index + 1)) - 1 if unary else node.var_index
            payload = sink.word(code)
        kids = [sink.word(c) for c in node.children] or [me, me]
        if len(kids) == 1:
            kids.append(kids[0])
        sink.add(b.equals_const(word, v), OPCODES[node.kind], parent, kids[0], kids[1], payload)
    return SuccCircuit(b.build(sink.outputs()), unary, names)
