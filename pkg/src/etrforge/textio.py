"""Line-oriented documents with fully parenthesized prefix expressions.

Every document starts with the header ``#etrforge v1`` and a ``kind:`` line.
Rationals print as ``p/q`` or integers; output is canonical and byte-stable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .circuits import BoolCircuit
from .core import (
    Add,
    And,
    Atom,
    Const,
    Dialect,
    Distribution,
    EMajSatInstance,
    EtrError,
    EtrInstance,
    EvAnd,
    EvEq,
    EvNot,
    EvTrue,
    IVar,
    Mul,
    Neg,
    Not,
    Or,
    Prob,
    ProbInstance,
    Prod,
    QbfInstance,
    Sum,
    Var,
    Witness,
    check_dialect,
    check_prob,
)
from .eso import (
    Cmp,
    EAnd,
    EOr,
    EsoInstance,
    EsoSentence,
    Exists,
    ExistsF,
    FAdd,
    FApp,
    FConst,
    FiniteStructure,
    FMul,
    Forall,
    FSub,
    FSum,
    Rel,
    VarEq,
)
from .reductions.eso_passes import Succ18Instance
from .succinct import SuccCircuit

HEADER = "#etrforge v1"
DIALECT_KINDS = {d.value: d for d in Dialect}
KINDS = tuple(DIALECT_KINDS) + (
    "term",
    "formula",
    "prob",
    "qbf",
    "emajsat",
    "distribution",
    "circuit",
    "succ",
    "succ18",
    "structure",
    "eso",
    "witness",
)

_RATIONAL = re.compile(r"-?\d+(/\d+)?")
_INT = re.compile(r"-?\d+")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_\[\]\.']*")
_GATE = re.compile(r"g(\d+)\s*=\s*(.*)")


class ParseError(EtrError):
    code = "SYNTAX_ERROR"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# s-expressions


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


class SList(list):
    line = 0
    col = 0


def _tokenize(text: str, line: int, col: int) -> list:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in " \t":
            i += 1
        elif ch in "()":
            out.append(Token(ch, line, col + i))
            i += 1
        else:
            j = i
            while j < len(text) and text[j] not in " \t()":
                j += 1
            out.append(Token(text[i:j], line, col + i))
            i = j
    return out


def read_sexpr(text: str, line: int = 1, col: int = 1):
    """Nested SList/Token tree for exactly one expression."""
    tokens = _tokenize(text, line, col)
    if not tokens:
        raise ParseError("empty expression", line, col)
    stack: list = []
    result = None
    for k, tok in enumerate(tokens):
        if result is not None:
            raise ParseError(f"unexpected {tok.text!r} after the expression", tok.line, tok.col)
        if tok.text == "(":
            node = SList()
            node.line, node.col = tok.line, tok.col
            stack.append(node)
        elif tok.text == ")":
            if not stack:
                raise ParseError("unbalanced ')'", tok.line, tok.col)
            node = stack.pop()
            if stack:
                stack[-1].append(node)
            else:
                result = node
        elif stack:
            stack[-1].append(tok)
        else:
            result = tok
    if stack:
        raise ParseError("unclosed '('", stack[-1].line, stack[-1].col)
    return result


def _pos(node):
    return node.line, node.col


def _fail(node, message):
    raise ParseError(message, *_pos(node))


def _head(node) -> str:
    if not isinstance(node, SList) or not node or not isinstance(node[0], Token):
        _fail(node, "expected a parenthesized form with a keyword")
    return node[0].text


def _arity(node, n):
    if len(node) != n + 1:
        _fail(node, f"{node[0].text} takes {n} operands, got {len(node) - 1}")


def _atom(node) -> str:
    if not isinstance(node, Token):
        _fail(node, "expected an atom")
    return node.text


def _name(node) -> str:
    text = _atom(node)
    if not _NAME.fullmatch(text):
        _fail(node, f"bad name {text!r}")
    return text


def _rational(node) -> Fraction:
    text = _atom(node)
    if not _RATIONAL.fullmatch(text):
        _fail(node, f"bad rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        _fail(node, "zero denominator")


def _integer(node) -> int:
    text = _atom(node)
    if not _INT.fullmatch(text):
        _fail(node, f"bad integer {text!r}")
    return int(text)


def fmt(value) -> str:
    return str(Fraction(value))


# terms, events, formulas

TERM_HEADS = ("const", "var", "ivar", "neg", "add", "mul", "sum", "prod", "P")
FORMULA_HEADS = {"lt": "<", "le": "<=", "eq": "=", "<": "<", "<=": "<=", "=": "="}
OP_KEYWORDS = {"<": "lt", "<=": "le", "=": "eq"}


def to_term(node):
    head = _head(node)
    if head == "const":
        _arity(node, 1)
        return Const(_rational(node[1]))
    if head == "var":
        _arity(node, 1)
        return Var(_name(node[1]))
    if head == "ivar":
        if len(node) < 2:
            _fail(node, "ivar needs a base name")
        return IVar(_name(node[1]), tuple(to_term(c) for c in node[2:]))
    if head == "neg":
        _arity(node, 1)
        return Neg(to_term(node[1]))
    if head in ("add", "mul"):
        _arity(node, 2)
        return (Add if head == "add" else Mul)(to_term(node[1]), to_term(node[2]))
    if head in ("sum", "prod"):
        _arity(node, 3)
        size = _integer(node[2])
        if size < 1:
            _fail(node[2], "binder range must be positive")
        return (Sum if head == "sum" else Prod)(_name(node[1]), size, to_term(node[3]))
    if head == "P":
        _arity(node, 1)
        return Prob(to_event(node[1]))
    _fail(node, f"unknown term keyword {head!r}")


def to_event(node):
    if isinstance(node, Token):
        if node.text == "true":
            return EvTrue()
        _fail(node, f"unknown event {node.text!r}")
    head = _head(node)
    if head in ("eq", "="):
        _arity(node, 2)
        value = _atom(node[2])
        return EvEq(_name(node[1]), int(value) if _INT.fullmatch(value) else _name(node[2]))
    if head == "not":
        _arity(node, 1)
        return EvNot(to_event(node[1]))
    if head == "and":
        _arity(node, 2)
        return EvAnd(to_event(node[1]), to_event(node[2]))
    _fail(node, f"unknown event keyword {head!r}")


def to_formula(node):
    head = _head(node)
    if head in FORMULA_HEADS:
        _arity(node, 2)
        return Atom(FORMULA_HEADS[head], to_term(node[1]), to_term(node[2]))
    if head == "not":
        _arity(node, 1)
        return Not(to_formula(node[1]))
    if head in ("and", "or"):
        _arity(node, 2)
        return (And if head == "and" else Or)(to_formula(node[1]), to_formula(node[2]))
    _fail(node, f"unknown formula keyword {head!r}")


def to_expr(node):
    """Term or formula, chosen by the head keyword."""
    return to_term(node) if _head(node) in TERM_HEADS else to_formula(node)


def parse_expr(text: str):
    return to_expr(read_sexpr(text))


def render_term(t) -> str:
    if isinstance(t, Const):
        return f"(const {fmt(t.value)})"
    if isinstance(t, Var):
        return f"(var {t.name})"
    if isinstance(t, IVar):
        return "(ivar " + " ".join([t.base] + [render_term(i) for i in t.index]) + ")"
    if isinstance(t, Neg):
        return f"(neg {render_term(t.arg)})"
    if isinstance(t, Add):
        return f"(add {render_term(t.left)} {render_term(t.right)})"
    if isinstance(t, Mul):
        return f"(mul {render_term(t.left)} {render_term(t.right)})"
    if isinstance(t, Sum):
        return f"(sum {t.binder} {t.size} {render_term(t.body)})"
    if isinstance(t, Prod):
        return f"(prod {t.binder} {t.size} {render_term(t.body)})"
    if isinstance(t, Prob):
        return f"(P {render_event(t.event)})"
    raise TypeError(f"not a term: {type(t).__name__}")


def render_event(e) -> str:
    if isinstance(e, EvTrue):
        return "true"
    if isinstance(e, EvEq):
        return f"(eq {e.var} {e.value})"
    if isinstance(e, EvNot):
        return f"(not {render_event(e.arg)})"
    if isinstance(e, EvAnd):
        return f"(and {render_event(e.left)} {render_event(e.right)})"
    raise TypeError(f"not an event: {type(e).__name__}")


def render_formula(f) -> str:
    if isinstance(f, Atom):
        return f"({OP_KEYWORDS[f.op]} {render_term(f.lhs)} {render_term(f.rhs)})"
    if isinstance(f, Not):
        return f"(not {render_formula(f.arg)})"
    if isinstance(f, And):
        return f"(and {render_formula(f.left)} {render_formula(f.right)})"
    if isinstance(f, Or):
        return f"(or {render_formula(f.left)} {render_formula(f.right)})"
    raise TypeError(f"not a formula: {type(f).__name__}")


def render_expr(x) -> str:
    return render_formula(x) if isinstance(x, (Atom, Not, And, Or)) else render_term(x)


# ESO terms and formulas


def to_real_term(node):
    head = _head(node)
    if head == "const":
        _arity(node, 1)
        return FConst(_rational(node[1]))
    if head == "app":
        if len(node) < 2:
            _fail(node, "app needs a function name")
        return FApp(_name(node[1]), tuple(_name(a) for a in node[2:]))
    if head in ("add", "sub", "mul"):
        _arity(node, 2)
        cls = {"add": FAdd, "sub": FSub, "mul": FMul}[head]
        return cls(to_real_term(node[1]), to_real_term(node[2]))
    if head == "sum":
        _arity(node, 2)
        return FSum(_name(node[1]), to_real_term(node[2]))
    _fail(node, f"unknown real-term keyword {head!r}")


def _eso_literal(node, negated):
    head = _head(node)
    if head in FORMULA_HEADS:
        _arity(node, 2)
        return Cmp(FORMULA_HEADS[head], to_real_term(node[1]), to_real_term(node[2]), negated)
    if head == "rel":
        if len(node) < 2:
            _fail(node, "rel needs a relation name")
        return Rel(_name(node[1]), tuple(_name(a) for a in node[2:]), negated)
    if head == "vareq":
        _arity(node, 2)
        return VarEq(_name(node[1]), _name(node[2]), negated)
    return None


def to_eso_formula(node):
    head = _head(node)
    lit = _eso_literal(node, False)
    if lit is not None:
        return lit
    if head == "not":
        _arity(node, 1)
        lit = _eso_literal(node[1], True)
        if lit is None:
            _fail(node, "not applies only to comparisons, relations and variable equalities")
        return lit
    if head in ("and", "or"):
        _arity(node, 2)
        return (EAnd if head == "and" else EOr)(to_eso_formula(node[1]), to_eso_formula(node[2]))
    if head in ("forall", "exists"):
        _arity(node, 2)
        return (Forall if head == "forall" else Exists)(_name(node[1]), to_eso_formula(node[2]))
    if head == "existsf":
        _arity(node, 3)
        arity = _integer(node[2])
        if arity < 0:
            _fail(node[2], "arity must be nonnegative")
        return ExistsF(_name(node[1]), arity, to_eso_formula(node[3]))
    _fail(node, f"unknown ESO keyword {head!r}")


def render_real_term(t) -> str:
    if isinstance(t, FConst):
        return f"(const {fmt(t.value)})"
    if isinstance(t, FApp):
        return "(app " + " ".join((t.fn,) + tuple(t.args)) + ")"
    if isinstance(t, (FAdd, FSub, FMul)):
        kw = {FAdd: "add", FSub: "sub", FMul: "mul"}[type(t)]
        return f"({kw} {render_real_term(t.left)} {render_real_term(t.right)})"
    if isinstance(t, FSum):
        return f"(sum {t.var} {render_real_term(t.body)})"
    raise TypeError(f"not a real term: {type(t).__name__}")


def render_eso_formula(f) -> str:
    if isinstance(f, (Cmp, Rel, VarEq)):
        if isinstance(f, Cmp):
            inner = f"({OP_KEYWORDS[f.op]} {render_real_term(f.lhs)} {render_real_term(f.rhs)})"
        elif isinstance(f, Rel):
            inner = "(rel " + " ".join((f.name,) + tuple(f.args)) + ")"
        else:
            inner = f"(vareq {f.left} {f.right})"
        return f"(not {inner})" if f.negated else inner
    if isinstance(f, (EAnd, EOr)):
        kw = "and" if isinstance(f, EAnd) else "or"
        return f"({kw} {render_eso_formula(f.left)} {render_eso_formula(f.right)})"
    if isinstance(f, (Forall, Exists)):
        kw = "forall" if isinstance(f, Forall) else "exists"
        return f"({kw} {f.var} {render_eso_formula(f.body)})"
    if isinstance(f, ExistsF):
        return f"(existsf {f.fn} {f.arity} {render_eso_formula(f.body)})"
    raise TypeError(f"not an ESO formula: {type(f).__name__}")


# ---------------------------------------------------------------------------
# documents


class _Lines:
    """Cursor over the non-blank lines of a document body."""

    def __init__(self, text: str):
        raw = text.split("\n")
        if not raw or raw[0].rstrip() != HEADER:
            raise ParseError(f"missing version header {HEADER!r}", 1, 1)
        self.items = [(k + 1, line.rstrip()) for k, line in enumerate(raw) if k > 0 and line.strip()]
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.items)

    def peek(self):
        return None if self.done() else self.items[self.pos]

    def next(self):
        if self.done():
            last = self.items[-1][0] if self.items else 1
            raise ParseError("unexpected end of document", last + 1, 1)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def has(self, key: str) -> bool:
        item = self.peek()
        return item is not None and item[1].startswith(key + ":")

    def field(self, key: str):
        """(value, line, column of the value) for a ``key: value`` line."""
        line, text = self.next()
        if not text.startswith(key + ":"):
            raise ParseError(f"expected '{key}:'", line, 1)
        rest = text[len(key) + 1:]
        value = rest.strip()
        col = len(key) + 2 + (len(rest) - len(rest.lstrip()))
        return value, line, col

    def expr(self, key: str):
        value, line, col = self.field(key)
        return read_sexpr(value, line, col)

    def end(self):
        if not self.done():
            line, _ = self.peek()
            raise ParseError("unexpected trailing content", line, 1)


def _names(value: str, line: int) -> tuple:
    out = tuple(value.split())
    for n in out:
        if not _NAME.fullmatch(n):
            raise ParseError(f"bad name {n!r}", line, 1)
    return out


def _rational_text(text: str, line: int) -> Fraction:
    text = text.strip()
    if not _RATIONAL.fullmatch(text):
        raise ParseError(f"bad rational {text!r}", line, 1)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError("zero denominator", line, 1) from None


def _int_text(text: str, line: int) -> int:
    text = text.strip()
    if not _INT.fullmatch(text):
        raise ParseError(f"bad integer {text!r}", line, 1)
    return int(text)


def _row(text: str, line: int):
    """``a b c : value`` -> ((a, b, c), value text)."""
    if ":" not in text:
        raise ParseError("expected 'values : number'", line, 1)
    left, right = text.split(":", 1)
    return tuple(_int_text(v, line) for v in left.split()), right


def _wrap(call, line: int):
    try:
        return call()
    except ParseError:
        raise
    except EtrError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc), line, 1) from None


# distributions


def _distribution_body(cur: _Lines) -> Distribution:
    line, text = cur.next()
    m = re.fullmatch(r"vars:(.*);\s*domain:\s*(\S+)", text)
    if not m:
        raise ParseError("expected 'vars: ...; domain: c'", line, 1)
    variables = _names(m.group(1), line)
    c = _int_text(m.group(2), line)
    entries = {}
    while not cur.done() and ":" in cur.peek()[1] and re.fullmatch(r"[-\d\s]*:.*", cur.peek()[1]):
        row_line, row = cur.next()
        key, value = _row(row, row_line)
        if key in entries:
            raise ParseError(f"duplicate tuple {key}", row_line, 1)
        entries[key] = _rational_text(value, row_line)
    return _wrap(lambda: Distribution(variables, c, entries), line)


def _render_distribution_body(d: Distribution) -> list:
    out = [f"vars: {' '.join(d.variables)}; domain: {d.c}".replace("vars: ;", "vars:;")]
    for key, mass in sorted(d.entries.items()):
        out.append(f"{' '.join(str(v) for v in key)} : {fmt(mass)}".lstrip())
    return out


# circuits


def _circuit_body(cur: _Lines) -> BoolCircuit:
    line, text = cur.next()
    m = re.fullmatch(r"inputs:\s*(\d+);\s*outputs:(.*)", text)
    if not m:
        raise ParseError("expected 'inputs: N; outputs: g...'", line, 1)
    n = int(m.group(1))
    outputs = []
    for tok in m.group(2).split():
        if not re.fullmatch(r"g\d+", tok):
            raise ParseError(f"bad output gate {tok!r}", line, 1)
        outputs.append(int(tok[1:]))
    gates = []
    while not cur.done() and _GATE.fullmatch(cur.peek()[1]):
        gline, gtext = cur.next()
        gm = _GATE.fullmatch(gtext)
        if int(gm.group(1)) != len(gates):
            raise ParseError(f"expected gate g{len(gates)}", gline, 1)
        parts = gm.group(2).split()
        op = parts[0] if parts else ""
        im = re.fullmatch(r"INPUT(\d*)", op)
        if im:
            digits = im.group(1) or (parts[1] if len(parts) == 2 else "")
            if not digits.isdigit() or (im.group(1) and len(parts) != 1):
                raise ParseError("INPUT needs one input number", gline, 1)
            gates.append(("INPUT", (int(digits),)))
            continue
        arity = {"NOT": 1, "AND": 2, "OR": 2, "CONST0": 0, "CONST1": 0}.get(op)
        if arity is None or len(parts) != arity + 1:
            raise ParseError(f"bad gate {gtext!r}", gline, 1)
        args = []
        for tok in parts[1:]:
            if not re.fullmatch(r"g\d+", tok):
                raise ParseError(f"bad operand {tok!r}", gline, 1)
            args.append(int(tok[1:]))
        gates.append((op, tuple(args)))
    return _wrap(lambda: BoolCircuit(n, tuple(gates), tuple(outputs)), line)


def _render_circuit_body(c: BoolCircuit) -> list:
    outs = " ".join(f"g{o}" for o in c.outputs)
    out = [f"inputs: {c.n_inputs}; outputs: {outs}".rstrip()]
    for i, (op, args) in enumerate(c.gates):
        if op == "INPUT":
            out.append(f"g{i} = INPUT{args[0]}")
        else:
            out.append(" ".join([f"g{i} =", op] + [f"g{a}" for a in args]))
    return out


# structures and tables


def _table_rows(cur: _Lines, arity: int, line: int) -> dict:
    table = {}
    while not cur.done() and re.fullmatch(r"[-\d\s]*:.*", cur.peek()[1]):
        row_line, row = cur.next()
        key, value = _row(row, row_line)
        if len(key) != arity:
            raise ParseError(f"expected {arity} arguments", row_line, 1)
        if key in table:
            raise ParseError(f"duplicate row {key}", row_line, 1)
        table[key] = _rational_text(value, row_line)
    return table


def _structure_body(cur: _Lines) -> FiniteStructure:
    value, line, _ = cur.field("domain")
    domain = tuple(_int_text(v, line) for v in value.split())
    functions, relations = {}, {}
    while not cur.done():
        hline, head = cur.peek()
        m = re.fullmatch(r"(function|relation) (\S+) (\d+)", head)
        if not m:
            break
        cur.next()
        kind, name, arity = m.group(1), m.group(2), int(m.group(3))
        if not _NAME.fullmatch(name):
            raise ParseError(f"bad name {name!r}", hline, 1)
        if name in functions or name in relations:
            raise ParseError(f"{name} defined twice", hline, 1)
        if kind == "function":
            functions[name] = (arity, _table_rows(cur, arity, hline))
        else:
            rows = set()
            while not cur.done() and re.fullmatch(r"[-\d\s]*", cur.peek()[1]) or (
                not cur.done() and arity == 0 and cur.peek()[1] == "()"
            ):
                rline, rtext = cur.next()
                rtext = "" if rtext == "()" else rtext
                row = tuple(_int_text(v, rline) for v in rtext.split())
                if len(row) != arity:
                    raise ParseError(f"expected {arity} elements", rline, 1)
                rows.add(row)
            relations[name] = (arity, frozenset(rows))
    return _wrap(lambda: FiniteStructure(domain, functions, relations), line)


def _render_rows(table: dict) -> list:
    return [f"{' '.join(str(v) for v in key)} : {fmt(val)}".lstrip() for key, val in sorted(table.items())]


def _render_structure_body(s: FiniteStructure) -> list:
    out = ["domain: " + " ".join(str(a) for a in s.domain)]
    for name in sorted(s.functions):
        arity, table = s.functions[name]
        out.append(f"function {name} {arity}")
        out += _render_rows(table)
    for name in sorted(s.relations):
        arity, rows = s.relations[name]
        out.append(f"relation {name} {arity}")
        out += [" ".join(str(v) for v in row) if row else "()" for row in sorted(rows)]
    return out


# ---------------------------------------------------------------------------
# per-kind readers


def _read_etr(cur: _Lines, dialect: Dialect) -> EtrInstance:
    variables = None
    if cur.has("vars"):
        value, line, _ = cur.field("vars")
        variables = _names(value, line)
    candidates = {}
    while not cur.done() and cur.peek()[1].startswith("(candidates"):
        line, text = cur.next()
        node = read_sexpr(text, line, 1)
        if _head(node) != "candidates" or len(node) != 3 or not isinstance(node[2], SList):
            _fail(node, "expected (candidates name (v1 v2 ...))")
        name = _name(node[1])
        if name in candidates:
            _fail(node, f"candidates for {name} given twice")
        candidates[name] = tuple(_rational(v) for v in node[2])
    formula = to_formula(cur.expr("formula"))
    return check_dialect(EtrInstance(dialect, formula, variables, candidates))


def _read_prob(cur: _Lines) -> ProbInstance:
    value, line, _ = cur.field("vars")
    variables = _names(value, line)
    value, line, _ = cur.field("domain")
    c = _int_text(value, line)
    support = None
    if cur.has("support"):
        value, line, _ = cur.field("support")
        support = _int_text(value, line)
    formula = to_formula(cur.expr("formula"))
    return check_prob(ProbInstance(formula, variables, c, support), mixed=True)


def _read_qbf(cur: _Lines) -> QbfInstance:
    value, line, _ = cur.field("prefix")
    toks = value.split()
    if len(toks) % 2:
        raise ParseError("prefix needs quantifier/name pairs", line, 1)
    prefix = tuple((toks[k], toks[k + 1]) for k in range(0, len(toks), 2))
    matrix = to_formula(cur.expr("matrix"))
    return _wrap(lambda: QbfInstance(prefix, matrix), line)


def _read_emajsat(cur: _Lines) -> EMajSatInstance:
    value, line, _ = cur.field("x")
    xs = _names(value, line)
    value, line, _ = cur.field("y")
    ys = _names(value, line)
    return EMajSatInstance(xs, ys, to_formula(cur.expr("matrix")))


def _read_succ(cur: _Lines) -> SuccCircuit:
    value, line, _ = cur.field("unary")
    if value not in ("0", "1"):
        raise ParseError("unary must be 0 or 1", line, 1)
    nvalue, nline, _ = cur.field("names")
    names = _names(nvalue, nline)
    circuit = _circuit_body(cur)
    return _wrap(lambda: SuccCircuit(circuit, value == "1", names), line)


def _read_succ18(cur: _Lines) -> Succ18Instance:
    circuits = []
    while not cur.done():
        line, text = cur.next()
        if text != f"circuit {len(circuits)}":
            raise ParseError(f"expected 'circuit {len(circuits)}'", line, 1)
        circuits.append(_circuit_body(cur))
    return _wrap(lambda: Succ18Instance(tuple(circuits)), 1)


def _read_eso(cur: _Lines) -> EsoInstance:
    value, line, _ = cur.field("range")
    if value == "none":
        rng = None
    else:
        parts = value.split()
        if len(parts) != 2:
            raise ParseError("range needs 'lo hi' or 'none'", line, 1)
        rng = (_rational_text(parts[0], line), _rational_text(parts[1], line))
    formula = to_eso_formula(cur.expr("sentence"))
    return EsoInstance(EsoSentence(formula, rng), _structure_body(cur))


def _read_witness(cur: _Lines) -> Witness:
    kind, line, _ = cur.field("witness")
    note = ""
    if cur.has("note"):
        note = cur.field("note")[0]
    if kind == "assignment":
        values = {}
        while not cur.done():
            aline, text = cur.next()
            m = re.fullmatch(r"(\S+) = (\S+)", text)
            if not m or not _NAME.fullmatch(m.group(1)):
                raise ParseError("expected 'name = value'", aline, 1)
            if m.group(1) in values:
                raise ParseError(f"{m.group(1)} assigned twice", aline, 1)
            values[m.group(1)] = _rational_text(m.group(2), aline)
        return Witness("assignment", values, note)
    if kind == "distribution":
        return Witness("distribution", _distribution_body(cur), note)
    if kind == "eso-tables":
        tables = {}
        while not cur.done():
            tline, text = cur.next()
            m = re.fullmatch(r"table (\S+) (\d+)", text)
            if not m or not _NAME.fullmatch(m.group(1)):
                raise ParseError("expected 'table name arity'", tline, 1)
            if m.group(1) in tables:
                raise ParseError(f"table {m.group(1)} given twice", tline, 1)
            tables[m.group(1)] = _table_rows(cur, int(m.group(2)), tline)
        return Witness("eso-tables", tables, note)
    raise ParseError(f"unknown witness kind {kind!r}", line, 1)


def _table_arity(table: dict) -> int:
    return len(next(iter(table))) if table else 0


def parse(kind: str | None, text: str):
    """Parse a document; ``kind`` None accepts whatever the document declares.

    For dialect kinds the formula is validated against the requested dialect.
    """
    cur = _Lines(text)
    declared, line, _ = cur.field("kind")
    if declared not in KINDS:
        raise ParseError(f"unknown kind {declared!r}", line, 1)
    want = declared if kind is None else kind
    if want not in KINDS:
        raise ParseError(f"unknown requested kind {want!r}", line, 1)
    if want != declared and not (want in DIALECT_KINDS and declared in DIALECT_KINDS):
        raise ParseError(f"document is {declared!r}, not {want!r}", line, 1)
    if want in DIALECT_KINDS:
        result = _read_etr(cur, DIALECT_KINDS[want])
    elif want == "term":
        result = to_term(cur.expr("expr"))
    elif want == "formula":
        result = to_formula(cur.expr("expr"))
    elif want == "prob":
        result = _read_prob(cur)
    elif want == "qbf":
        result = _read_qbf(cur)
    elif want == "emajsat":
        result = _read_emajsat(cur)
    elif want == "distribution":
        result = _distribution_body(cur)
    elif want == "circuit":
        result = _circuit_body(cur)
    elif want == "succ":
        result = _read_succ(cur)
    elif want == "succ18":
        result = _read_succ18(cur)
    elif want == "structure":
        result = _structure_body(cur)
    elif want == "eso":
        result = _read_eso(cur)
    else:
        result = _read_witness(cur)
    cur.end()
    return result


def declared_kind(text: str) -> str:
    cur = _Lines(text)
    return cur.field("kind")[0]


def render(obj) -> str:
    """Canonical text of any supported object, ending with a newline."""
    if isinstance(obj, EtrInstance):
        out = [f"kind: {obj.dialect.value}"]
        if obj.variables is not None:
            out.append(f"vars: {' '.join(obj.variables)}".rstrip())
        for name in sorted(obj.candidates):
            out.append(f"(candidates {name} ({' '.join(fmt(v) for v in obj.candidates[name])}))")
        out.append(f"formula: {render_formula(obj.formula)}")
    elif isinstance(obj, ProbInstance):
        out = ["kind: prob", f"vars: {' '.join(obj.variables)}".rstrip(), f"domain: {obj.c}"]
        if obj.support_bound is not None:
            out.append(f"support: {obj.support_bound}")
        out.append(f"formula: {render_formula(obj.formula)}")
    elif isinstance(obj, QbfInstance):
        prefix = " ".join(f"{q} {v}" for q, v in obj.prefix)
        out = ["kind: qbf", f"prefix: {prefix}".rstrip(), f"matrix: {render_formula(obj.matrix)}"]
    elif isinstance(obj, EMajSatInstance):
        out = [
            "kind: emajsat",
            f"x: {' '.join(obj.x_vars)}".rstrip(),
            f"y: {' '.join(obj.y_vars)}".rstrip(),
            f"matrix: {render_formula(obj.matrix)}",
        ]
    elif isinstance(obj, Distribution):
        out = ["kind: distribution"] + _render_distribution_body(obj)
    elif isinstance(obj, BoolCircuit):
        out = ["kind: circuit"] + _render_circuit_body(obj)
    elif isinstance(obj, SuccCircuit):
        out = ["kind: succ", f"unary: {int(obj.unary)}", f"names: {' '.join(obj.var_names)}".rstrip()]
        out += _render_circuit_body(obj.circuit)
    elif isinstance(obj, Succ18Instance):
        out = ["kind: succ18"]
        for i, c in enumerate(obj.circuits):
            out.append(f"circuit {i}")
            out += _render_circuit_body(c)
    elif isinstance(obj, FiniteStructure):
        out = ["kind: structure"] + _render_structure_body(obj)
    elif isinstance(obj, EsoInstance):
        rng = obj.sentence.range
        out = [
            "kind: eso",
            "range: none" if rng is None else f"range: {fmt(rng[0])} {fmt(rng[1])}",
            f"sentence: {render_eso_formula(obj.sentence.formula)}",
        ]
        out += _render_structure_body(obj.structure)
    elif isinstance(obj, Witness):
        out = ["kind: witness", f"witness: {obj.kind}"]
        if obj.note:
            out.append(f"note: {' '.join(obj.note.split())}")
        if obj.kind == "assignment":
            out += [f"{k} = {fmt(v)}" for k, v in sorted(obj.payload.items())]
        elif obj.kind == "distribution":
            out += _render_distribution_body(obj.payload)
        else:
            for name in sorted(obj.payload):
                table = obj.payload[name]
                out.append(f"table {name} {_table_arity(table)}")
                out += _render_rows(table)
    elif isinstance(obj, (Atom, Not, And, Or)):
        out = ["kind: formula", f"expr: {render_formula(obj)}"]
    else:
        out = ["kind: term", f"expr: {render_term(obj)}"]
    return "\n".join([HEADER] + out) + "\n"
