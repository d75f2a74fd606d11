"""Solver-free bounded validity checking of verification conditions.

The negated VC (hypotheses and the goal's negation) is searched for a
falsifying assignment with every integer variable ranging over
[-bound, bound]. Uninterpreted symbols are instantiated lazily and
pointwise: only argument tuples actually reached during evaluation get a
table entry, itself enumerated over the bound.

Outcomes:
  * valid          -- no falsifying assignment within bounds (bounded-valid);
                      also returned outright when the goal is a substitution
                      instance of a hypothesis.
  * counterexample -- a falsifying assignment over entry-state variables
                      only; replaying it through the interpreter violates
                      the wrapper assertion.
  * unknown        -- falsifiable only by choosing uninterpreted tables or
                      havoc'd loop/call states, which no concrete run need
                      reproduce.

Quantifier-free, table-free problems take a vectorized numpy path; the
scalar evaluator is the exact reference (unbounded integers) and handles
quantifier expansion and table search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .logic import (
    TermF, Form, IVar, ICon, IOp, IIte, IApp,
    FBool, FCmp, FNot, FAnd, FOr, FImp, FQuant, FApp,
    TRUE, conj, simplify, free_vars, symbols, has_quantifier, instance_of,
    ediv, subst, rename,
)
from .vcgen import VerificationCondition

DEFAULT_BUDGET = 10_000_000_000  # elementary evaluation steps


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class BoundedResult:
    status: str  # "valid" | "counterexample" | "unknown"
    bound: int
    assignment: Optional[dict[str, int]] = None
    method: str = "enumeration"  # instantiation | vectorized | enumeration
    rows: int = 0                # variable assignments examined
    reason: Optional[str] = None  # for unknown: "tables" | "havoc"

    @property
    def is_valid(self) -> bool:
        return self.status == "valid"


def _dirty(name: str) -> bool:
    return "$h" in name or "$sk" in name


def _node_count(f: Form, seen: Optional[set] = None) -> int:
    # Dag-aware: shared subterms are evaluated once, so count them once.
    seen = seen if seen is not None else set()
    if id(f) in seen:
        return 0
    seen.add(id(f))
    if isinstance(f, (FBool,)):
        return 1
    if isinstance(f, FCmp):
        return 1 + _tnodes(f.left, seen) + _tnodes(f.right, seen)
    if isinstance(f, FNot):
        return 1 + _node_count(f.body, seen)
    if isinstance(f, (FAnd, FOr)):
        return 1 + sum(_node_count(i, seen) for i in f.items)
    if isinstance(f, FImp):
        return 1 + _node_count(f.hyp, seen) + _node_count(f.concl, seen)
    if isinstance(f, FQuant):
        return 1 + _node_count(f.body, seen)
    if isinstance(f, FApp):
        return 1 + sum(_tnodes(a, seen) for a in f.args)
    raise TypeError


def _tnodes(t: TermF, seen: set) -> int:
    if id(t) in seen:
        return 0
    seen.add(id(t))
    if isinstance(t, (IVar, ICon)):
        return 1
    if isinstance(t, IOp):
        return 1 + _tnodes(t.left, seen) + _tnodes(t.right, seen)
    if isinstance(t, IIte):
        return 1 + _node_count(t.cond, seen) + _tnodes(t.then, seen) \
            + _tnodes(t.other, seen)
    if isinstance(t, IApp):
        return 1 + sum(_tnodes(a, seen) for a in t.args)
    raise TypeError


# ---------------------------------------------------------------------------
# Problem normalization
# ---------------------------------------------------------------------------


def _skolemize_exists(f: Form, taken: set[str], counter: list[int]) -> Form:
    """Strip top-level existentials of a hypothesis into fresh free vars."""
    while isinstance(f, FQuant) and f.kind == "exists":
        mapping = {}
        for v in f.vars:
            counter[0] += 1
            fresh = f"{v}$sk{counter[0]}"
            taken.add(fresh)
            mapping[v] = fresh
        f = rename(f.body, mapping)
    return f


def _negate_goal(goal: Form, taken: set[str],
                 counter: list[int]) -> tuple[Form, set[str]]:
    """Negate the goal, turning a leading forall prefix into free variables
    (renamed when they would collide)."""
    opened: set[str] = set()
    while isinstance(goal, FQuant) and goal.kind == "forall":
        mapping = {}
        for v in goal.vars:
            name = v
            if name in taken:
                counter[0] += 1
                name = f"{v}$sk{counter[0]}"
                mapping[v] = name
            taken.add(name)
            opened.add(name)
        goal = rename(goal.body, mapping) if mapping else goal.body
    return FNot(goal), opened


def _prepare(vc: VerificationCondition) -> tuple[list[Form], set[str]]:
    """Hypotheses plus negated goal, Skolemized.

    Quantified hypotheses over uninterpreted symbols (admitted lemmas) are
    excluded from the search: instantiating their tables at every quantified
    point blows up combinatorially, and they are already exploited by the
    instance fast path in check_bounded. Dropping hypotheses only makes
    validity harder to conclude, and any falsification that involves tables
    is reported as unknown rather than as a counterexample, so soundness is
    unaffected.
    """
    goal = simplify(vc.goal)
    taken: set[str] = set(free_vars(goal))
    for _, h in vc.hypotheses:
        taken |= free_vars(h)
    counter = [0]
    neg_goal, _ = _negate_goal(goal, taken, counter)
    forms: list[Form] = []
    for _, h in vc.hypotheses:
        h = simplify(_skolemize_exists(simplify(h), taken, counter))
        if h == TRUE:
            continue
        if symbols(h) and has_quantifier(h):
            continue
        forms.append(h)
    forms.append(simplify(neg_goal))
    free: set[str] = set()
    for f in forms:
        free |= free_vars(f)
    return forms, free


# ---------------------------------------------------------------------------
# Vectorized evaluation
# ---------------------------------------------------------------------------

_CHUNK = 1 << 21


def _np_ediv(a, b):
    bz = b == 0
    safe = np.where(bz, 1, b)
    q = np.where(safe > 0, a // safe, -(a // -safe))
    return np.where(bz, 0, q)


def _np_term(t: TermF, env, memo) -> np.ndarray:
    key = id(t)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    if isinstance(t, IVar):
        out = env[t.name]
    elif isinstance(t, ICon):
        out = np.int64(t.value)
    elif isinstance(t, IOp):
        a, b = _np_term(t.left, env, memo), _np_term(t.right, env, memo)
        if t.op == "+":
            out = a + b
        elif t.op == "-":
            out = a - b
        elif t.op == "*":
            out = a * b
        else:
            out = _np_ediv(a, b)
    elif isinstance(t, IIte):
        out = np.where(_np_form(t.cond, env, memo), _np_term(t.then, env, memo),
                       _np_term(t.other, env, memo))
    else:
        raise TypeError(f"vectorized path cannot evaluate {t!r}")
    memo[key] = (t, out)
    return out


def _np_form(f: Form, env, memo=None) -> np.ndarray:
    memo = memo if memo is not None else {}
    key = id(f)
    hit = memo.get(key)
    if hit is not None:
        return hit[1]
    if isinstance(f, FBool):
        out = np.bool_(f.value)
    elif isinstance(f, FCmp):
        a, b = _np_term(f.left, env, memo), _np_term(f.right, env, memo)
        out = {"==": a == b, "!=": a != b, "<=": a <= b,
               ">=": a >= b, "<": a < b, ">": a > b}[f.op]
    elif isinstance(f, FNot):
        out = ~_np_form(f.body, env, memo)
    elif isinstance(f, FAnd):
        out = _np_form(f.items[0], env, memo)
        for i in f.items[1:]:
            out = out & _np_form(i, env, memo)
    elif isinstance(f, FOr):
        out = _np_form(f.items[0], env, memo)
        for i in f.items[1:]:
            out = out | _np_form(i, env, memo)
    elif isinstance(f, FImp):
        out = ~_np_form(f.hyp, env, memo) | _np_form(f.concl, env, memo)
    else:
        raise TypeError(f"vectorized path cannot evaluate {f!r}")
    memo[key] = (f, out)
    return out


def _vectorized_search(forms: list[Form], order: list[str], bound: int,
                       budget: int) -> tuple[int, Optional[dict[str, int]]]:
    """Lexicographic enumeration in numpy chunks; returns (rows, assignment)
    with the first falsifying assignment or None."""
    size = 2 * bound + 1
    k = len(order)
    total = size ** k
    nodes = sum(_node_count(f) for f in forms)
    if total * max(nodes, 1) > budget:
        raise BudgetExceeded(
            f"{total} assignments x {nodes} nodes exceeds the budget")
    if k == 0:
        env: dict[str, np.ndarray] = {}
        ok = all(bool(np.all(_np_form(f, env))) for f in forms)
        return 1, ({} if ok else None)
    strides = [size ** (k - 1 - i) for i in range(k)]
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        env = {v: (idx // strides[i]) % size - bound
               for i, v in enumerate(order)}
        mask = np.ones(hi - lo, dtype=bool)
        memo: dict = {}
        for f in forms:
            mask = mask & _np_form(f, env, memo)
            if not mask.any():
                break
        if mask.any():
            at = int(np.argmax(mask))
            return lo + at + 1, {v: int(env[v][at]) for v in order}
    return total, None


# ---------------------------------------------------------------------------
# Scalar evaluation with lazy tables
# ---------------------------------------------------------------------------


class _Choice(Exception):
    def __init__(self, key, kind: str):
        self.key = key
        self.kind = kind


class _Scalar:
    def __init__(self, bound: int, budget: int):
        self.bound = bound
        self.budget = budget
        self.steps = 0
        self.tables: dict = {}

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(f"evaluation exceeded {self.budget} steps")

    def term(self, t: TermF, env: dict[str, int]) -> int:
        self.tick()
        if isinstance(t, IVar):
            return env[t.name]
        if isinstance(t, ICon):
            return t.value
        if isinstance(t, IOp):
            a, b = self.term(t.left, env), self.term(t.right, env)
            if t.op == "+":
                return a + b
            if t.op == "-":
                return a - b
            if t.op == "*":
                return a * b
            return ediv(a, b)
        if isinstance(t, IIte):
            return self.term(t.then, env) if self.form(t.cond, env) \
                else self.term(t.other, env)
        if isinstance(t, IApp):
            key = (t.fn, tuple(self.term(a, env) for a in t.args))
            if key not in self.tables:
                raise _Choice(key, "int")
            return self.tables[key]
        raise TypeError(f"unknown term {t!r}")

    def form(self, f: Form, env: dict[str, int]) -> bool:
        self.tick()
        if isinstance(f, FBool):
            return f.value
        if isinstance(f, FCmp):
            a, b = self.term(f.left, env), self.term(f.right, env)
            return {"==": a == b, "!=": a != b, "<=": a <= b,
                    ">=": a >= b, "<": a < b, ">": a > b}[f.op]
        if isinstance(f, FNot):
            return not self.form(f.body, env)
        if isinstance(f, FAnd):
            return all(self.form(i, env) for i in f.items)
        if isinstance(f, FOr):
            return any(self.form(i, env) for i in f.items)
        if isinstance(f, FImp):
            return (not self.form(f.hyp, env)) or self.form(f.concl, env)
        if isinstance(f, FQuant):
            rng = range(-self.bound, self.bound + 1)
            want_all = f.kind == "forall"
            for values in itertools.product(rng, repeat=len(f.vars)):
                inner = dict(env)
                inner.update(zip(f.vars, values))
                v = self.form(f.body, inner)
                if want_all and not v:
                    return False
                if not want_all and v:
                    return True
            return want_all
        if isinstance(f, FApp):
            key = (f.pred, tuple(self.term(a, env) for a in f.args))
            if key not in self.tables:
                raise _Choice(key, "bool")
            return self.tables[key]
        raise TypeError(f"unknown formula {f!r}")


def _scalar_search(forms: list[Form], order: list[str], bound: int,
                   budget: int) -> tuple[int, Optional[dict[str, int]],
                                         bool, bool]:
    """Returns (rows, assignment, used_tables, complete). Enumeration is
    lexicographic; tables are branched lazily at reached points."""
    ev = _Scalar(bound, budget)
    rng = range(-bound, bound + 1)

    def attempt(env: dict[str, int]) -> bool:
        try:
            return all(ev.form(f, env) for f in forms)
        except _Choice as c:
            domain = (list(rng) if c.kind == "int" else [False, True])
            for v in domain:
                ev.tables[c.key] = v
                if attempt(env):
                    return True
                del ev.tables[c.key]
            return False

    rows = 0
    for values in itertools.product(rng, repeat=len(order)):
        rows += 1
        env = dict(zip(order, values))
        ev.tables.clear()
        if attempt(env):
            return rows, env, bool(ev.tables), True
    return rows, None, False, True


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def check_bounded(vc: VerificationCondition, bound: int,
                  budget: int = DEFAULT_BUDGET) -> BoundedResult:
    """Bounded validity check of one VC; see the module docstring.

    Raises BudgetExceeded when exhaustive enumeration would blow the
    configured node limit.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    goal = simplify(vc.goal)
    if goal == TRUE:
        return BoundedResult("valid", bound, method="instantiation", rows=0)
    for _name, h in vc.hypotheses:
        if instance_of(simplify(h), goal):
            return BoundedResult("valid", bound, method="instantiation", rows=0)

    forms, free = _prepare(vc)
    order = sorted(free)
    any_tables = any(symbols(f) for f in forms)
    any_quant = any(has_quantifier(f) for f in forms)

    if not any_tables and not any_quant:
        rows, assignment = _vectorized_search(forms, order, bound, budget)
        if assignment is None:
            return BoundedResult("valid", bound, method="vectorized", rows=rows)
        if any(_dirty(v) for v in assignment):
            return BoundedResult("unknown", bound, assignment,
                                 method="vectorized", rows=rows, reason="havoc")
        return BoundedResult("counterexample", bound, assignment,
                             method="vectorized", rows=rows)

    rows, assignment, used_tables, _ = _scalar_search(forms, order, bound,
                                                      budget)
    if assignment is None:
        return BoundedResult("valid", bound, method="enumeration", rows=rows)
    if used_tables or any(_dirty(v) for v in assignment):
        reason = "tables" if used_tables else "havoc"
        return BoundedResult("unknown", bound, assignment,
                             method="enumeration", rows=rows, reason=reason)
    return BoundedResult("counterexample", bound, assignment,
                         method="enumeration", rows=rows)
