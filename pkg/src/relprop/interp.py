"""Big-step interpreter for MiniC with labeled state snapshots.

Program arithmetic is 64-bit two's-complement with overflow reported as a
runtime error (never wrapped); division is Euclidean, matching the logic,
and errors on a zero divisor. Assertions are evaluated against the snapshot
table (`Pre` is taken at function entry, `Here` is the current state);
applications of generated `_acsl` symbols are evaluated by running the
mirrored C function on an isolated copy of the relevant state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .minic import (
    INT, PTR, VOID,
    Program, FunctionDef, Param, PredicateDecl, LogicFnDecl,
    Stmt, DeclStmt, AssignStmt, CallStmt, IfStmt, WhileStmt, ReturnStmt,
    AssertStmt,
    Term, IntLit, Var, Deref, Bin, At, CallPure, OldTerm, ResultTerm,
    LogicApp, CallResult,
    Pred, PBool, Cmp, PAnd, POr, PImp, PNot, PForall, PExists, Separated,
    PredApp,
    GlobalLoc, DerefLoc,
)
from .logic import ediv
from .validate import footprint_of

INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1


class InterpError(Exception):
    pass


class DivisionByZero(InterpError):
    pass


class Overflow(InterpError):
    pass


class FuelExhausted(InterpError):
    pass


class NotExecutable(InterpError):
    pass


class AssertViolated(InterpError):
    def __init__(self, label: str, state: "State"):
        super().__init__(f"assertion {label} violated")
        self.label = label
        self.state = state


@dataclass
class Snapshot:
    globals: dict[str, int]
    heap: dict[int, int]
    frame: dict[str, int]


@dataclass
class State:
    """Mutable machine state: globals, heap cells, and label snapshots.
    Pointer values are heap cell ids; snapshots are frozen copies."""

    globals: dict[str, int] = field(default_factory=dict)
    heap: dict[int, int] = field(default_factory=dict)
    snapshots: dict[str, Snapshot] = field(default_factory=dict)
    _next_cell: int = 1

    def alloc(self, value: int) -> int:
        cid = self._next_cell
        self._next_cell += 1
        self.heap[cid] = value
        return cid

    def snapshot(self, label: str, frame: dict[str, int]) -> None:
        self.snapshots[label] = Snapshot(dict(self.globals), dict(self.heap),
                                         dict(frame))


class Fuel:
    """Shared budget for loop iterations and call depth."""

    def __init__(self, amount: int):
        self.remaining = amount

    def burn(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise FuelExhausted("fuel exhausted")


def _check64(v: int) -> int:
    if v < INT_MIN or v > INT_MAX:
        raise Overflow(f"value {v} exceeds 64-bit range")
    return v


class _Return(Exception):
    def __init__(self, value: Optional[int]):
        self.value = value


def init_state(program: Program) -> State:
    state = State()
    for g in program.globals:
        if g.ty == INT:
            state.globals[g.name] = g.init if g.init is not None else 0
    return state


class Interp:
    def __init__(self, program: Program, fuel: Fuel):
        self.program = program
        self.fuel = fuel
        self.logic_decls = program.logic_decls()

    # -- expressions --------------------------------------------------------

    def term(self, t: Term, state: State, frame: dict[str, int]) -> int:
        if isinstance(t, IntLit):
            return t.value
        if isinstance(t, Var):
            if t.name in frame:
                return frame[t.name]
            if t.name in state.globals:
                return state.globals[t.name]
            raise InterpError(f"unbound variable {t.name}")
        if isinstance(t, Deref):
            cid = self.term(Var(t.name), state, frame)
            if cid not in state.heap:
                raise InterpError(f"dangling pointer {t.name}")
            return state.heap[cid]
        if isinstance(t, Bin):
            a = self.term(t.left, state, frame)
            b = self.term(t.right, state, frame)
            if t.op == "+":
                return _check64(a + b)
            if t.op == "-":
                return _check64(a - b)
            if t.op == "*":
                return _check64(a * b)
            if b == 0:
                raise DivisionByZero("division by zero")
            return _check64(ediv(a, b))
        raise NotExecutable(f"term {t!r} is not a program expression")

    def cond(self, p: Pred, state: State, frame: dict[str, int]) -> bool:
        if isinstance(p, Cmp):
            a = self.term(p.left, state, frame)
            b = self.term(p.right, state, frame)
            return {"==": a == b, "!=": a != b, "<=": a <= b,
                    ">=": a >= b, "<": a < b, ">": a > b}[p.op]
        if isinstance(p, PAnd):
            return self.cond(p.left, state, frame) and self.cond(p.right, state, frame)
        if isinstance(p, POr):
            return self.cond(p.left, state, frame) or self.cond(p.right, state, frame)
        if isinstance(p, PNot):
            return not self.cond(p.body, state, frame)
        raise NotExecutable(f"condition {p!r} is not executable")

    # -- statements -----------------------------------------------------------

    def run(self, fn: FunctionDef, args: list[int], state: State) -> Optional[int]:
        self.fuel.burn()
        if len(args) != len(fn.formals):
            raise InterpError(f"{fn.name} expects {len(fn.formals)} arguments")
        frame = {p.name: a for p, a in zip(fn.formals, args)}
        state.snapshot("Pre", frame)
        try:
            self.stmts(fn.body, state, frame)
        except _Return as r:
            return r.value
        finally:
            state.snapshots.pop("Pre", None)
        return None

    def stmts(self, body: tuple[Stmt, ...], state: State,
              frame: dict[str, int]) -> None:
        for s in body:
            self.stmt(s, state, frame)

    def stmt(self, s: Stmt, state: State, frame: dict[str, int]) -> None:
        if isinstance(s, DeclStmt):
            frame[s.name] = self.term(s.init, state, frame) if s.init is not None else 0
        elif isinstance(s, AssignStmt):
            value = self.term(s.value, state, frame)
            if isinstance(s.target, Var):
                if s.target.name in frame:
                    frame[s.target.name] = value
                elif s.target.name in state.globals:
                    state.globals[s.target.name] = value
                else:
                    raise InterpError(f"unbound variable {s.target.name}")
            else:
                cid = self.term(Var(s.target.name), state, frame)
                if cid not in state.heap:
                    raise InterpError(f"dangling pointer {s.target.name}")
                state.heap[cid] = value
        elif isinstance(s, CallStmt):
            value = self.call(s.callee, [self.term(a, state, frame)
                                         for a in s.args], state)
            if s.target is not None:
                self.stmt(AssignStmt(Var(s.target), IntLit(value or 0)),
                          state, frame)
        elif isinstance(s, IfStmt):
            branch = s.then if self.cond(s.cond, state, frame) else s.orelse
            self.stmts(branch, state, frame)
        elif isinstance(s, WhileStmt):
            while self.cond(s.cond, state, frame):
                self.fuel.burn()
                self.stmts(s.body, state, frame)
        elif isinstance(s, ReturnStmt):
            raise _Return(self.term(s.value, state, frame)
                          if s.value is not None else None)
        elif isinstance(s, AssertStmt):
            state.snapshot("Here", frame)
            try:
                ok = self.logic_pred(s.pred, state, frame)
            finally:
                state.snapshots.pop("Here", None)
            if not ok:
                raise AssertViolated(s.label or "assert", state)
        else:
            raise TypeError(f"unknown statement {s!r}")

    def call(self, callee: str, args: list[int], state: State) -> Optional[int]:
        fn = self.program.function(callee)
        if fn is not None:
            saved = {lbl: state.snapshots[lbl] for lbl in list(state.snapshots)}
            state.snapshots.clear()
            try:
                return self.run(fn, args, state)
            finally:
                state.snapshots.clear()
                state.snapshots.update(saved)
        # Application of a generated logic mirror: run the mirrored function.
        base = self._mirrored(callee)
        if base is not None:
            return self.run_isolated(base, args)
        raise InterpError(f"call to undefined function {callee}")

    def _mirrored(self, name: str) -> Optional[FunctionDef]:
        if name.endswith("_acsl"):
            return self.program.function(name[:-len("_acsl")])
        return None

    def run_isolated(self, fn: FunctionDef, args: list[int]) -> Optional[int]:
        """Run a pure function on a throwaway copy of the global state."""
        iso = State()
        iso.globals = {g.name: (g.init or 0) for g in self.program.globals
                       if g.ty == INT}
        return self.run(fn, args, iso)

    # -- logic evaluation (runtime assertion checking) ---------------------------

    def _label_value(self, base: Term, label: str, state: State,
                     frame: dict[str, int]) -> int:
        if label == "Here" or label == "Post":
            return self.term(base, state, frame)
        snap = state.snapshots.get(label if label != "Old" else "Pre")
        if snap is None:
            raise NotExecutable(f"label {label} has no snapshot here")
        if isinstance(base, Var):
            if base.name in snap.frame:
                return snap.frame[base.name]
            if base.name in snap.globals:
                return snap.globals[base.name]
            raise InterpError(f"unbound variable {base.name}")
        if isinstance(base, Deref):
            cid = self.term(Var(base.name), state, frame)
            if cid not in snap.heap:
                raise InterpError(f"dangling pointer {base.name}")
            return snap.heap[cid]
        raise NotExecutable(f"\\at on {base!r}")

    def logic_term(self, t: Term, state: State, frame: dict[str, int]) -> int:
        if isinstance(t, At):
            return self._label_value(t.base, t.label, state, frame)
        if isinstance(t, OldTerm):
            return self.logic_term(At(t.term, "Pre"), state, frame) \
                if isinstance(t.term, (Var, Deref)) \
                else self._old_general(t.term, state, frame)
        if isinstance(t, Bin):
            a = self.logic_term(t.left, state, frame)
            b = self.logic_term(t.right, state, frame)
            if t.op == "+":
                return a + b
            if t.op == "-":
                return a - b
            if t.op == "*":
                return a * b
            if b == 0:
                raise DivisionByZero("division by zero in annotation")
            return ediv(a, b)
        if isinstance(t, (LogicApp, CallPure)):
            name = t.name if isinstance(t, LogicApp) else t.callee
            args = [self.logic_term(a, state, frame) for a in t.args]
            fn = self._mirrored(name) or self.program.function(name)
            if fn is None:
                raise NotExecutable(f"{name} has no executable definition")
            value = self.run_isolated(fn, args)
            if value is None:
                raise NotExecutable(f"{name} returns no value")
            return value
        if isinstance(t, (ResultTerm, CallResult)):
            raise NotExecutable(f"{t!r} is not executable here")
        return self.term(t, state, frame)

    def _old_general(self, t: Term, state: State, frame: dict[str, int]) -> int:
        snap = state.snapshots.get("Pre")
        if snap is None:
            raise NotExecutable("\\old outside a function body")
        shadow = State(dict(snap.globals), dict(snap.heap), dict(state.snapshots))
        return self.logic_term(t, shadow, dict(snap.frame))

    def logic_pred(self, p: Pred, state: State, frame: dict[str, int]) -> bool:
        if isinstance(p, PBool):
            return p.value
        if isinstance(p, Cmp):
            a = self.logic_term(p.left, state, frame)
            b = self.logic_term(p.right, state, frame)
            return {"==": a == b, "!=": a != b, "<=": a <= b,
                    ">=": a >= b, "<": a < b, ">": a > b}[p.op]
        if isinstance(p, PAnd):
            return self.logic_pred(p.left, state, frame) and \
                self.logic_pred(p.right, state, frame)
        if isinstance(p, POr):
            return self.logic_pred(p.left, state, frame) or \
                self.logic_pred(p.right, state, frame)
        if isinstance(p, PImp):
            return (not self.logic_pred(p.left, state, frame)) or \
                self.logic_pred(p.right, state, frame)
        if isinstance(p, PNot):
            return not self.logic_pred(p.body, state, frame)
        if isinstance(p, Separated):
            a = self.logic_term(p.left, state, frame)
            b = self.logic_term(p.right, state, frame)
            return a != b
        if isinstance(p, (PForall, PExists)):
            raise NotExecutable("quantifiers are not executable at runtime")
        if isinstance(p, PredApp):
            return self._eval_predapp(p, state, frame)
        raise TypeError(f"unknown predicate {p!r}")

    def _eval_predapp(self, p: PredApp, state: State,
                      frame: dict[str, int]) -> bool:
        """Check a generated predicate by running its mirrored function on
        the claimed pre-state and comparing with the claimed post-state."""
        fn = self._mirrored(p.name)
        decl = self.logic_decls.get(p.name)
        if fn is None or not isinstance(decl, PredicateDecl):
            raise NotExecutable(f"{p.name} has no executable definition")
        args = list(p.args)
        res_claim: Optional[int] = None
        idx = 0
        if decl.params and decl.params[0].name == "res":
            res_claim = self.logic_term(args[0], state, frame)
            idx = 1

        iso = State()
        iso.globals = {g.name: (g.init or 0) for g in self.program.globals
                       if g.ty == INT}
        call_args: list[int] = []
        ptr_cells: dict[str, int] = {}
        for param in fn.formals:
            arg = args[idx]
            idx += 1
            if param.ty == INT:
                call_args.append(self.logic_term(arg, state, frame))
            else:
                if not isinstance(arg, Var):
                    raise NotExecutable(f"{p.name}: pointer argument must be a name")
                cid = iso.alloc(0)
                ptr_cells[arg.name] = cid
                call_args.append(cid)

        if decl.labels:
            label_map = dict(zip(decl.labels, p.labels))
            pre_label, post_label = (label_map[decl.labels[0]],
                                     label_map[decl.labels[1]])
            checks: list = []
            bases: list[Term] = []
            for r in decl.reads:
                assert isinstance(r, At)
                if r.base not in bases:
                    bases.append(r.base)
            # Initialize pre-state values and collect post-state claims.
            for base in bases:
                if isinstance(base, Var):
                    pre_v = self._label_value(Var(base.name), pre_label, state, frame)
                    post_v = self._label_value(Var(base.name), post_label, state, frame)
                    iso.globals[base.name] = pre_v
                    checks.append((Var(base.name), post_v))
                else:
                    inst_name = self._pointer_instance(decl, fn, p, base.name)
                    pre_v = self._label_value(Deref(inst_name), pre_label,
                                              state, frame)
                    post_v = self._label_value(Deref(inst_name), post_label,
                                               state, frame)
                    cid = ptr_cells[inst_name]
                    iso.heap[cid] = pre_v
                    checks.append((Deref(inst_name), post_v, cid))
            result = self.run(fn, call_args, iso)
            if res_claim is not None and result != res_claim:
                return False
            for chk in checks:
                if isinstance(chk[0], Var):
                    if iso.globals[chk[0].name] != chk[1]:
                        return False
                else:
                    if iso.heap[chk[2]] != chk[1]:
                        return False
            return True

        # Value-style predicate: trailing (pre, post) pairs per location.
        fp_locs = [param.name for param in decl.params[idx:]]
        pairs = []
        for i in range(0, len(fp_locs), 2):
            name = fp_locs[i]
            assert name.endswith("_pre")
            g = name[:-len("_pre")]
            pre_v = self.logic_term(args[idx + i], state, frame)
            post_v = self.logic_term(args[idx + i + 1], state, frame)
            pairs.append((g, pre_v, post_v))
        for g, pre_v, _ in pairs:
            iso.globals[g] = pre_v
        result = self.run(fn, call_args, iso)
        if res_claim is not None and result != res_claim:
            return False
        return all(iso.globals[g] == post_v for g, _, post_v in pairs)

    def _pointer_instance(self, decl: PredicateDecl, fn: FunctionDef,
                          p: PredApp, formal: str) -> str:
        offset = 1 if decl.params and decl.params[0].name == "res" else 0
        for i, param in enumerate(fn.formals):
            if param.name == formal:
                arg = p.args[offset + i]
                if isinstance(arg, Var):
                    return arg.name
        raise NotExecutable(f"{p.name}: cannot resolve pointer {formal}")


def interpret(fn: FunctionDef, args: list[int], state: Optional[State] = None,
              fuel: int = 100_000,
              program: Optional[Program] = None) -> tuple[Optional[int], State]:
    """Interpret one function call; returns (return value, final state).

    Raises DivisionByZero, Overflow, FuelExhausted, AssertViolated, or
    NotExecutable. The fuel bounds loop iterations and call depth.
    """
    if program is None:
        program = Program((fn,))
    if state is None:
        state = init_state(program)
    interp = Interp(program, Fuel(fuel))
    value = interp.run(fn, list(args), state)
    return value, state
