"""The twelve acceptance criteria as runnable checks with a pass/fail table."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    ZERO,
    Atom,
    Dialect,
    EtrInstance,
    EvAnd,
    EvEq,
    EvNot,
    EvTrue,
    assignment_witness,
    atoms,
    clear_denominators_term,
)
from .decide import brute_force_decide, check_witness, find_witness
from .eso import eval_eso
from .evaluation import eval_emajsat, eval_formula, eval_qbf, eval_term
from .fixtures import (
    FUZZERS,
    boolean_constrained_instance,
    events,
    exhaustive_qbfs,
    half_fixture,
    random_assignment,
    random_emajsat,
    random_event,
    random_qbf,
    random_sigma_pi_term,
    random_sigma_term,
    rational,
    smsat_fixture,
    succ18_consistent,
    succ18_inconsistent,
    sumvi1_fixture,
    tree_fixture,
)
from .reductions import (
    emajsat_to_sigmaetr,
    flatten_single_poly,
    normalize_prob_primitives,
    prenex_sums,
    push_negations,
    qbf_to_pietr,
    sigmaetr_half_to_smsat,
    smsat_to_sigmaetr,
    succ18_to_leso,
    sumvi1_to_probsat,
)
from .reductions.eso_passes import succ18_variable
from .reductions.normal_forms import is_sum_prenex
from .reductions.permanent import brute_force_permanent, entry_name, permanent_term, permutation_indicator
from .reductions.probabilistic import arithmetize_event
from .succinct import OPCODES, expand_subtree, expand_succ, compile_sigma_pi, decode_all, minus_index, plus_index, remove_negations
from .textio import parse, render


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f}s)"


class Failure(Exception):
    pass


def expect(cond, message):
    if not cond:
        raise Failure(message)


# ---------------------------------------------------------------------------


def qbf_equivalence(seed: int):
    """Π-ETR image of a QBF is true exactly when the QBF is."""
    t0 = time.perf_counter()
    count = 0
    families = [(1, 3), (2, 2), (3, 2)]
    for n, depth in families:
        for q in exhaustive_qbfs(n, depth):
            target = qbf_to_pietr(q).target
            expect(eval_formula(target.formula) == eval_qbf(q), f"mismatch on {render(q)}")
            count += 1
    rng = random.Random(seed)
    for _ in range(500):
        q = random_qbf(rng, 4, 3)
        expect(eval_formula(qbf_to_pietr(q).target.formula) == eval_qbf(q), f"mismatch on {render(q)}")
        count += 1
    elapsed = time.perf_counter() - t0
    expect(elapsed < 60, f"took {elapsed:.1f}s")
    return f"{count} QBFs agree"


def sigma_pi_compiler(seed: int):
    """Expanding the compiled node circuit gives the source term scaled by its denominator factor."""
    rng = random.Random(seed)
    checks = 0
    for _ in range(200):
        t = random_sigma_pi_term(rng, ("x", "y"), 3, 4)
        inst = EtrInstance(Dialect.SIGMA_PI, Atom("=", t, ZERO))
        expanded = expand_succ(compile_sigma_pi(inst)).formula
        expect(isinstance(expanded, Atom), "expanded root is not an atom")
        scale = clear_denominators_term(t)[1]
        for _ in range(20):
            values = random_assignment(rng, ["x", "y"])
            expect(eval_term(expanded.lhs, values) == scale * eval_term(t, values), "value mismatch")
            expect(eval_term(expanded.rhs, values) == 0, "right side is not zero")
            checks += 1
    return f"200 terms, {checks} exact evaluations"


def negation_removal(seed: int):
    """v+ and v- nodes compute v and not v; no negations or ≤ remain."""
    rng = random.Random(seed)
    bool_ops = {OPCODES[k] for k in ("and", "or", "not", "lt", "le", "eq")}
    checks = 0
    for _ in range(100):
        s = tree_fixture(rng, 6)
        n = s.width
        t = remove_negations(s)
        fields = decode_all(t)
        enabled = fields["opcode"][fields["opcode"] != 255]
        expect(OPCODES["not"] not in set(enabled.tolist()), "target contains not")
        expect(OPCODES["le"] not in set(enabled.tolist()), "target contains ≤")
        src = decode_all(s)
        names = s.var_names
        for v in range(1 << n):
            if int(src["opcode"][v]) not in bool_ops:
                continue
            phi = expand_subtree(s, v)
            plus = expand_subtree(t, plus_index(v, n))
            minus = expand_subtree(t, minus_index(v, n))
            for _ in range(20):
                values = random_assignment(rng, names)
                truth = eval_formula(phi, values)
                expect(eval_formula(plus, values) == truth, f"v+ differs at node {v}")
                expect(eval_formula(minus, values) == (not truth), f"v- differs at node {v}")
                checks += 1
    return f"100 circuits, {checks} node checks"


def sum_prenexing(seed: int):
    """Prenexed sides with pinned Z_i agree with the source sides and have a single outer sum block."""
    rng = random.Random(seed)
    for _ in range(200):
        t = random_sigma_term(rng, ("x", "y"), 3, 5)
        inst = EtrInstance(Dialect.SIGMA, Atom("=", t, ZERO), ("x", "y"))
        result = prenex_sums(inst)
        target_atoms = atoms(result.target.formula)
        for a in target_atoms:
            expect(is_sum_prenex(a.lhs) and is_sum_prenex(a.rhs), "side not in single-outer-sum shape")
        for _ in range(20):
            w = assignment_witness(random_assignment(rng, ["x", "y"]))
            tw = result.forward(w)
            expect(eval_term(target_atoms[0].lhs, tw.payload) == eval_term(t, w.payload), "prenexed value differs")
            expect(check_witness(result.target, tw) == eval_formula(inst.formula, w.payload), "truth differs")
    return "200 terms x 20 assignments"


def _flattened_feasible(plan, root, values) -> bool:
    """Whether the gadget system has a solution with the source variables fixed.

    Exact in the auxiliary variables: for < gadgets ξ = 1 - (p2 - p1)·S with S ≥ 0 free.
    """
    zero_ok: dict = {}
    for kind, xi, a, b, _ in plan:
        if kind == "eq":
            zero_ok[xi] = eval_term(a, values) == eval_term(b, values)
        elif kind == "lt":
            zero_ok[xi] = eval_term(b, values) - eval_term(a, values) > 0
        elif kind == "or":
            zero_ok[xi] = zero_ok[a] or zero_ok[b]
        else:
            zero_ok[xi] = zero_ok[a] and zero_ok[b]
    return zero_ok[root]


def flattening(seed: int):
    """Source and single-polynomial target are satisfiable together."""
    rng = random.Random(seed)
    grid = [Fraction(k, 2) for k in range(-2, 5)]
    sat = unsat = 0
    for _ in range(50):
        src = boolean_constrained_instance(rng, rng.randint(1, 2), 2)
        verdict = brute_force_decide(src)
        neg_free = EtrInstance(src.dialect, push_negations(src.formula), src.variables)
        result = flatten_single_poly(neg_free)
        names = list(src.variables)
        if verdict:
            w = find_witness(src)
            tw = result.forward(w)
            expect(tw is not None and check_witness(result.target, tw), "satisfiable source but target witness fails")
            expect(result.backward(tw).payload == w.payload, "backward map does not recover the source witness")
            sat += 1
        else:
            for combo in itertools.product(grid, repeat=len(names)):
                expect(not _flattened_feasible(result.notes["plan"], result.notes["root"], dict(zip(names, combo))),
                       "unsatisfiable source but target feasible on the grid")
            unsat += 1
    return f"{sat} satisfiable by transport, {unsat} refuted on a {len(grid)}-point grid per variable"


def event_arithmetization(seed: int):
    """A_δ equals the indicator of δ on every tuple."""
    rng = random.Random(seed)
    checked = 0

    def check(event, variables, c):
        nonlocal checked
        term = arithmetize_event(event, variables, c)
        for tup in itertools.product(range(c), repeat=len(variables)):
            values = dict(zip(variables, tup))
            expect(eval_term(term, values) == int(_holds(event, values)), f"A_δ wrong for {event} at {tup}")
            checked += 1

    for c in (2, 3):
        for n in (1, 2):
            variables = tuple(f"X{i}" for i in range(1, n + 1))
            for e in events(variables, c, 2):
                check(e, variables, c)
        for n in (3, 4):
            variables = tuple(f"X{i}" for i in range(1, n + 1))
            for e in events(variables, c, 1):
                check(e, variables, c)
        for n in range(1, 5):
            variables = tuple(f"X{i}" for i in range(1, n + 1))
            for _ in range(150):
                check(random_event(rng, variables, c, 3), variables, c)
    return f"{checked} tuple checks"


def _holds(event, values) -> bool:
    if isinstance(event, EvTrue):
        return True
    if isinstance(event, EvEq):
        return values[event.var] == event.value
    if isinstance(event, EvNot):
        return not _holds(event.arg, values)
    if isinstance(event, EvAnd):
        return _holds(event.left, values) and _holds(event.right, values)
    raise TypeError(type(event).__name__)


def permanent_builder(seed: int):
    """Perm_m matches brute force and δ marks exactly the permutation matrices."""
    rng = random.Random(seed)
    for m in (1, 2, 3):
        term = permanent_term(m)
        for _ in range(20):
            matrix = [[rational(rng) for _ in range(m)] for _ in range(m)]
            values = {entry_name(i + 1, j + 1): matrix[i][j] for i in range(m) for j in range(m)}
            expect(eval_term(term, values) == brute_force_permanent(matrix), f"permanent differs for m={m}")
        delta = permutation_indicator(m)
        ones = 0
        for bits in itertools.product((0, 1), repeat=m * m):
            values = {entry_name(i + 1, j + 1): Fraction(bits[i * m + j]) for i in range(m) for j in range(m)}
            rows = [bits[i * m:(i + 1) * m] for i in range(m)]
            is_perm = all(sum(r) == 1 for r in rows) and all(sum(r[j] for r in rows) == 1 for j in range(m))
            got = eval_term(delta, values)
            expect(got == int(is_perm), f"δ wrong on {rows}")
            ones += int(got == 1)
        expect(ones == [1, 1, 2, 6][m], f"δ has {ones} ones for m={m}")
    return "m=1..3 agree; δ exact on all 0/1 matrices"


def probabilistic_transport(seed: int):
    """Forward maps give valid satisfying distributions; backward inverts them."""
    rng = random.Random(seed)
    for k in range(100):
        if k % 2 == 0:
            inst, w = sumvi1_fixture(rng, 2)
            result = sumvi1_to_probsat(inst)
        else:
            inst, w = half_fixture(rng)
            result = sigmaetr_half_to_smsat(inst)
        expect(check_witness(inst, w), "fixture witness does not satisfy its source")
        tw = result.forward(w)
        expect(tw is not None, "forward map refused a bounded witness")
        dist = tw.payload
        expect(sum(dist.entries.values()) == 1 and all(m >= 0 for m in dist.entries.values()), "invalid distribution")
        expect(check_witness(result.target, tw), "transported distribution fails the target")
        if k % 2 == 1:
            n = len(inst.free_variables())
            expect(len(dist.support) <= n + 2, f"support {len(dist.support)} exceeds n + 2")
        back = result.backward(tw).payload
        expect(all(back[v] == w.payload[v] for v in w.payload if v in inst.free_variables()), "backward∘forward is not the identity")
    return "100 witnesses round-trip"


def small_model_round_trip(seed: int):
    """Sat_sm fixtures survive smsat_to_sigmaetr in both directions."""
    rng = random.Random(seed)
    for _ in range(50):
        inst, w = smsat_fixture(rng)
        expect(check_witness(inst, w), "fixture distribution does not satisfy its source")
        norm = normalize_prob_primitives(inst)
        expect(check_witness(norm, w), "normalization changed the truth value")
        result = smsat_to_sigmaetr(norm)
        tw = result.forward(w)
        expect(tw is not None and check_witness(result.target, tw), "transported assignment fails the target")
        back = result.backward(tw)
        expect(back.payload.c == inst.c and len(back.payload.support) <= inst.support_bound, "back map lost the support bound")
        expect(check_witness(inst, back), "pulled-back distribution fails the source")
    return "50 fixtures"


def emajsat_agreement(seed: int):
    """brute_force_decide on the Σ-ETR image matches direct counting."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    count = yes = 0
    for nx in range(0, 4):
        for _ in range(60):
            inst = random_emajsat(rng, nx, 3, 3)
            got = brute_force_decide(emajsat_to_sigmaetr(inst).target)
            expect(got == eval_emajsat(inst), f"verdict differs on {render(inst)}")
            count += 1
            yes += got
    elapsed = time.perf_counter() - t0
    expect(elapsed < 120, f"took {elapsed:.1f}s")
    return f"{count} formulas ({yes} yes) agree"


def eso_construction(seed: int):
    """Consistent fixture accepted via transported tables; inconsistent one rejected on the grid."""
    good = succ18_consistent()
    result = succ18_to_leso(good)
    w = assignment_witness({succ18_variable((0,)): Fraction(1, 8), succ18_variable((1,)): 0})
    tables = result.forward(w)
    expect(eval_eso(result.target.sentence, result.target.structure, tables), "consistent fixture rejected")
    expect(result.backward(tables).payload == w.payload, "backward map does not recover x")
    bad = succ18_inconsistent()
    result = succ18_to_leso(bad)
    grid = [Fraction(k, 32) for k in range(-4, 5)]
    tried = 0
    for q0, q1 in itertools.product(grid, repeat=2):
        x = assignment_witness({succ18_variable((0,)): q0, succ18_variable((1,)): q1})
        tables = result.forward(x).payload
        expect(not eval_eso(result.target.sentence, result.target.structure, tables), "inconsistent fixture accepted")
        tried += 1
        for y in ("y0", "y1", "y2", "y3"):
            for v in grid:
                alt = {**tables, y: {(0,): v, (1,): v}}
                expect(not eval_eso(result.target.sentence, result.target.structure, alt), "perturbed table accepted")
                tried += 1
    return f"consistent accepted; {tried} inconsistent table sets rejected"


def parser_round_trip(seed: int):
    """parse∘print is the identity and printing is byte-stable."""
    total = 0
    for kind, gen in FUZZERS.items():
        rng = random.Random(f"{seed}:{kind}")
        for _ in range(1000):
            x = gen(rng)
            text = render(x)
            y = parse(None, text)
            expect(y == x, f"{kind} round trip changed the AST")
            expect(render(y) == text, f"{kind} printing is not stable")
            total += 1
    return f"{total} ASTs over {len(FUZZERS)} artifact types"


CRITERIA = [
    (1, "QBF to Π-ETR equivalence", qbf_equivalence),
    (2, "ΣΠ-ETR compiler round trip", sigma_pi_compiler),
    (3, "negation removal", negation_removal),
    (4, "sum prenexing", sum_prenexing),
    (5, "flattening", flattening),
    (6, "event arithmetization", event_arithmetization),
    (7, "permanent builder", permanent_builder),
    (8, "probabilistic witness transport", probabilistic_transport),
    (9, "small-model round trip", small_model_round_trip),
    (10, "E-MajSat oracle agreement", emajsat_agreement),
    (11, "ESO construction", eso_construction),
    (12, "parser round trip", parser_round_trip),
]


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    for num, title, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                detail = fn(seed)
                passed = True
            except Failure as exc:
                detail, passed = str(exc), False
            return CriterionResult(num, title, passed, detail, time.perf_counter() - t0)
    raise KeyError(number)


def run_all(seed: int = 0) -> list:
    return [run_criterion(num, seed) for num, _, _ in CRITERIA]
