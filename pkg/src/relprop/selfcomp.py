"""Self-composition transformation for relational clauses.

Each clause produces:
  * duplicated state (one copy of every footprint location per call),
  * a wrapper function inlining every call of the callset on its own copy,
    ending with an `assert Rpp:` equivalent to the relational predicate,
  * an axiomatic layer: an `_acsl` symbol per involved function (a logic
    function for pure functions, a predicate over state values or over state
    labels otherwise), a lemma restating the property over those symbols,
    and `ensures` behaviors linking each C function to its symbol.

The wrapper proves the property; the lemma lets other proofs use it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .minic import (
    INT, PTR, VOID,
    Program, GlobalDecl, FunctionDef, Param, Contract,
    Behavior, RelationalClause, CallSpec, Binder,
    Axiomatic, PredicateDecl, LogicFnDecl, Lemma,
    Stmt, DeclStmt, AssignStmt, CallStmt, IfStmt, WhileStmt, ReturnStmt,
    AssertStmt,
    Term, IntLit, Var, Deref, Bin, CallResult, At, CallPure,
    OldTerm, ResultTerm, LogicApp,
    Pred, Cmp, PAnd, POr, PImp, PNot, PForall, PExists, Separated,
    PredApp,
    GlobalLoc, DerefLoc, Loc, Diagnostic, rel_label,
)
from .validate import validate, footprint_of

WRAPPER_PREFIX = "relational_wrapper_"
AXIOM_PREFIX = "Relational_axiom_"
LEMMA_PREFIX = "Relational_lemma_"
BEHAVIOR_PREFIX = "Relational_behavior_"
ASSERT_LABEL = "Rpp"

# How a function is mirrored in the logic world.
STYLE_PURE = "pure"      # logic function over the int formals
STYLE_VALUES = "values"  # predicate over result/formals plus global pre/post values
STYLE_LABELS = "labels"  # label-parameterized predicate with a reads footprint


class TransformError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class Renaming:
    """Fresh names giving one callset call its own copy of the state."""

    call_id: str
    index: int  # 1-based position within the callset
    globals: dict[str, str]   # footprint global -> duplicated global
    pointers: dict[str, str]  # callee pointer formal -> wrapper pointer formal
    locals: dict[str, str]    # callee locals and int formals -> suffixed names
    ret_var: Optional[str]


@dataclass(frozen=True)
class WrapperFunction:
    fn: FunctionDef
    clause: str
    renamings: tuple[Renaming, ...]
    binder_params: tuple[str, ...]
    pointer_params: tuple[str, ...]
    dup_globals: tuple[str, ...]


@dataclass(frozen=True)
class ClauseArtifacts:
    clause: RelationalClause
    index: int
    wrapper: WrapperFunction
    axiomatic: Axiomatic
    lemma_name: str


@dataclass(frozen=True)
class TransformedProgram:
    """Original program plus everything generated from its clauses."""

    program: Program
    source: Program
    entries: tuple[ClauseArtifacts, ...]
    acsl_symbols: dict[str, tuple[str, str]]  # fn name -> (symbol, style)

    def provenance(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for e in self.entries:
            out[e.wrapper.fn.name] = e.clause.name
            out[e.axiomatic.name] = e.clause.name
            out[e.lemma_name] = e.clause.name
            for g in e.wrapper.dup_globals:
                out[g] = e.clause.name
            for p in e.wrapper.pointer_params:
                out[p] = e.clause.name
        return out

    def wrapper_for(self, clause_name: str) -> Optional[WrapperFunction]:
        for e in self.entries:
            if e.clause.name == clause_name:
                return e.wrapper
        return None

    def lemma_of_wrapper(self, wrapper_name: str) -> Optional[str]:
        for e in self.entries:
            if e.wrapper.fn.name == wrapper_name:
                return e.lemma_name
        return None


# ---------------------------------------------------------------------------
# Naming and styles
# ---------------------------------------------------------------------------


class _Names:
    """Deterministic fresh-name allocator avoiding every existing name."""

    def __init__(self, program: Program):
        used: set[str] = set()
        for g in program.globals:
            used.add(g.name)
        for fn in program.functions:
            used.add(fn.name)
            for p in fn.formals:
                used.add(p.name)
            used.update(_local_names(fn.body))
        used.update(program.logic_decls())
        self.used = used

    def fresh(self, base: str) -> str:
        name = base
        k = 2
        while name in self.used:
            name = f"{base}_{k}"
            k += 1
        self.used.add(name)
        return name


def _local_names(stmts: tuple[Stmt, ...]) -> set[str]:
    out: set[str] = set()
    for s in stmts:
        if isinstance(s, DeclStmt):
            out.add(s.name)
        elif isinstance(s, IfStmt):
            out |= _local_names(s.then) | _local_names(s.orelse)
        elif isinstance(s, WhileStmt):
            out |= _local_names(s.body)
    return out


def footprint_locs(fn: FunctionDef, program: Program) -> list[Loc]:
    """Footprint locations in canonical order: globals in declaration order,
    then derefs in formal order."""
    fp = footprint_of(fn, program)
    locs = fp.writes | fp.reads
    out: list[Loc] = []
    for g in program.globals:
        if GlobalLoc(g.name) in locs:
            out.append(GlobalLoc(g.name))
    for p in fn.formals:
        if p.ty == PTR and DerefLoc(p.name) in locs:
            out.append(DerefLoc(p.name))
    return out


def acsl_style(fn: FunctionDef, program: Program) -> str:
    fp = footprint_of(fn, program)
    has_ptr = any(p.ty == PTR for p in fn.formals)
    has_deref = any(isinstance(l, DerefLoc) for l in fp.writes | fp.reads)
    if has_ptr or has_deref:
        return STYLE_LABELS
    if fp.writes or fp.reads:
        return STYLE_VALUES
    return STYLE_PURE if fn.ret == INT else STYLE_VALUES


def acsl_symbol(fn_name: str) -> str:
    return f"{fn_name}_acsl"


# ---------------------------------------------------------------------------
# Renamings
# ---------------------------------------------------------------------------


def make_renamings(clause: RelationalClause, program: Program,
                   names: Optional[_Names] = None) -> list[Renaming]:
    """One Renaming per callset call; only footprint locations and callee
    locals are duplicated, never the whole state."""
    names = names or _Names(program)
    names.used.update(b.name for b in clause.binders)
    out: list[Renaming] = []
    for idx, cs in enumerate(clause.calls, 1):
        callee = program.function(cs.callee)
        if callee is None:
            raise TransformError([Diagnostic(
                "error", cs.span, f"{clause.name}: unknown function {cs.callee}")])
        globals_map: dict[str, str] = {}
        pointers_map: dict[str, str] = {}
        for loc in footprint_locs(callee, program):
            if isinstance(loc, GlobalLoc):
                globals_map[loc.name] = names.fresh(f"{loc.name}_{cs.call_id}")
            else:
                pointers_map[loc.name] = names.fresh(f"{loc.name}_{cs.call_id}")
        for p in callee.formals:
            if p.ty == PTR and p.name not in pointers_map:
                pointers_map[p.name] = names.fresh(f"{p.name}_{cs.call_id}")
        locals_map: dict[str, str] = {}
        for v in [p.name for p in callee.formals if p.ty == INT] + \
                sorted(_local_names(callee.body)):
            locals_map[v] = names.fresh(f"{v}_{idx}")
        ret_var = names.fresh(f"ret_{cs.call_id}") if callee.ret == INT else None
        out.append(Renaming(cs.call_id, idx, globals_map, pointers_map,
                            locals_map, ret_var))
    return out


# ---------------------------------------------------------------------------
# Inlining
# ---------------------------------------------------------------------------


def _rename_term(t: Term, env: dict[str, str]) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, Deref):
        return Deref(env.get(t.name, t.name))
    if isinstance(t, Bin):
        return Bin(t.op, _rename_term(t.left, env), _rename_term(t.right, env))
    if isinstance(t, At):
        return At(_rename_term(t.base, env), t.label)
    if isinstance(t, OldTerm):
        return OldTerm(_rename_term(t.term, env))
    if isinstance(t, LogicApp):
        return LogicApp(t.name, tuple(_rename_term(a, env) for a in t.args))
    if isinstance(t, CallPure):
        return CallPure(t.depth, t.callee,
                        tuple(_rename_term(a, env) for a in t.args))
    return t


def _rename_pred(p: Pred, env: dict[str, str]) -> Pred:
    if isinstance(p, Cmp):
        return Cmp(p.op, _rename_term(p.left, env), _rename_term(p.right, env))
    if isinstance(p, PAnd):
        return PAnd(_rename_pred(p.left, env), _rename_pred(p.right, env))
    if isinstance(p, POr):
        return POr(_rename_pred(p.left, env), _rename_pred(p.right, env))
    if isinstance(p, PImp):
        return PImp(_rename_pred(p.left, env), _rename_pred(p.right, env))
    if isinstance(p, PNot):
        return PNot(_rename_pred(p.body, env))
    if isinstance(p, (PForall, PExists)):
        inner = {k: v for k, v in env.items()
                 if k not in {b.name for b in p.binders}}
        cls = PForall if isinstance(p, PForall) else PExists
        return cls(p.binders, _rename_pred(p.body, inner))
    if isinstance(p, Separated):
        return Separated(_rename_term(p.left, env), _rename_term(p.right, env))
    if isinstance(p, PredApp):
        return PredApp(p.name, p.labels,
                       tuple(_rename_term(a, env) for a in p.args))
    return p


def _contains_return(stmts: tuple[Stmt, ...]) -> bool:
    for s in stmts:
        if isinstance(s, ReturnStmt):
            return True
        if isinstance(s, IfStmt) and (_contains_return(s.then)
                                      or _contains_return(s.orelse)):
            return True
        if isinstance(s, WhileStmt) and _contains_return(s.body):
            return True
    return False


def _tail_convert(stmts: list[Stmt],
                  ret_target: Optional[str]) -> Optional[list[Stmt]]:
    """Rewrite returns in tail position into ret-variable assignments.

    Returns None when a return occurs outside tail position, in which case
    the caller falls back to the completion-flag transformation.
    """
    if not stmts:
        return []
    prefix, last = stmts[:-1], stmts[-1]
    if _contains_return(tuple(prefix)):
        return None
    if isinstance(last, ReturnStmt):
        if last.value is None or ret_target is None:
            return prefix
        return prefix + [AssignStmt(Var(ret_target), last.value)]
    if isinstance(last, IfStmt):
        if not _contains_return((last,)):
            return stmts
        then = _tail_convert(list(last.then), ret_target)
        orelse = _tail_convert(list(last.orelse), ret_target)
        if then is None or orelse is None:
            return None
        return prefix + [IfStmt(last.cond, tuple(then), tuple(orelse))]
    if _contains_return((last,)):
        return None
    return stmts


def _flag_convert(stmts: list[Stmt], ret_target: Optional[str],
                  flag: str) -> list[Stmt]:
    """Early returns set a completion flag; everything after a statement
    that may return runs under `flag == 0`."""

    def tx(s: Stmt) -> list[Stmt]:
        if isinstance(s, ReturnStmt):
            out: list[Stmt] = []
            if s.value is not None and ret_target is not None:
                out.append(AssignStmt(Var(ret_target), s.value))
            out.append(AssignStmt(Var(flag), IntLit(1)))
            return out
        if isinstance(s, IfStmt):
            return [IfStmt(s.cond, tuple(walk(list(s.then))),
                           tuple(walk(list(s.orelse))))]
        if isinstance(s, WhileStmt):
            cond = PAnd(Cmp("==", Var(flag), IntLit(0)), s.cond)
            inv = s.invariant
            if inv is not None:
                inv = POr(Cmp("==", Var(flag), IntLit(1)), inv)
            return [WhileStmt(cond, inv, s.variant, tuple(walk(list(s.body))))]
        return [s]

    def walk(body: list[Stmt]) -> list[Stmt]:
        out: list[Stmt] = []
        for i, s in enumerate(body):
            out.extend(tx(s))
            if _contains_return((s,)) and i + 1 < len(body):
                out.append(IfStmt(Cmp("==", Var(flag), IntLit(0)),
                                  tuple(walk(body[i + 1:])), ()))
                break
        return out

    return [DeclStmt(flag, IntLit(0))] + walk(stmts)


class _Inliner:
    def __init__(self, program: Program, names: _Names):
        self.program = program
        self.names = names
        self.opaque_callees: set[str] = set()

    def inline(self, callee: FunctionDef, arg_terms: list[Term],
               state_env: dict[str, str], tag: str, depth: int,
               ret_target: Optional[str]) -> list[Stmt]:
        """Inline one call: bind int formals to fresh locals, rename the body
        through the call's state copy, convert returns, and unfold nested
        calls while the depth budget lasts."""
        out: list[Stmt] = []
        env = dict(state_env)
        int_formals = [p for p in callee.formals if p.ty == INT]
        for p in int_formals:
            env[p.name] = self.names.fresh(f"{p.name}_{tag}")
        for v in sorted(_local_names(callee.body)):
            env[v] = self.names.fresh(f"{v}_{tag}")
        for p, arg in zip(int_formals, arg_terms):
            out.append(DeclStmt(env[p.name], arg))
        body = self.rename_stmts(list(callee.body), env, tag, depth)
        converted = _tail_convert(body, ret_target)
        if converted is None:
            converted = _flag_convert(body, ret_target,
                                      self.names.fresh(f"done_{tag}"))
        out.extend(converted)
        return out

    def lower_arg(self, t: Term, tag: str, out: list[Stmt]) -> Term:
        """Replace nested \\callpure in an argument term by a fresh local
        computed by inlining the pure callee first."""
        if isinstance(t, CallPure):
            args = [self.lower_arg(a, tag, out) for a in t.args]
            callee = self.program.function(t.callee)
            if callee is None:
                raise TransformError([Diagnostic(
                    "error", t.span, f"unknown function {t.callee}")])
            aux = self.names.fresh(f"{t.callee}_{tag}")
            out.append(DeclStmt(aux, None))
            out.extend(self.inline(callee, args, {}, aux, t.depth, aux))
            return Var(aux)
        if isinstance(t, Bin):
            return Bin(t.op,
                       self.lower_arg(t.left, tag, out),
                       self.lower_arg(t.right, tag, out))
        return t

    def rename_stmts(self, stmts: list[Stmt], env: dict[str, str], tag: str,
                     depth: int) -> list[Stmt]:
        out: list[Stmt] = []
        seq = 0
        for s in stmts:
            if isinstance(s, DeclStmt):
                init = _rename_term(s.init, env) if s.init is not None else None
                out.append(DeclStmt(env.get(s.name, s.name), init))
            elif isinstance(s, AssignStmt):
                out.append(AssignStmt(_rename_term(s.target, env),
                                      _rename_term(s.value, env)))
            elif isinstance(s, CallStmt):
                seq += 1
                out.extend(self._inline_nested(s, env, f"{tag}_{seq}", depth))
            elif isinstance(s, IfStmt):
                out.append(IfStmt(_rename_pred(s.cond, env),
                                  tuple(self.rename_stmts(list(s.then), env,
                                                          tag, depth)),
                                  tuple(self.rename_stmts(list(s.orelse), env,
                                                          tag, depth))))
            elif isinstance(s, WhileStmt):
                inv = _rename_pred(s.invariant, env) if s.invariant else None
                var = _rename_term(s.variant, env) if s.variant else None
                out.append(WhileStmt(_rename_pred(s.cond, env), inv, var,
                                     tuple(self.rename_stmts(list(s.body), env,
                                                             tag, depth))))
            elif isinstance(s, ReturnStmt):
                val = _rename_term(s.value, env) if s.value is not None else None
                out.append(ReturnStmt(val))
            elif isinstance(s, AssertStmt):
                out.append(AssertStmt(s.label, _rename_pred(s.pred, env)))
            else:
                raise TypeError(f"unknown statement {s!r}")
        return out

    def _inline_nested(self, s: CallStmt, env: dict[str, str], tag: str,
                       depth: int) -> list[Stmt]:
        target = env.get(s.target, s.target) if s.target else None
        args = [_rename_term(a, env) for a in s.args]
        callee = self.program.function(s.callee)
        if callee is None:
            # Already an opaque logic application; keep it.
            return [CallStmt(target, s.callee, tuple(args))]
        if depth > 1:
            return self.inline(callee, args, dict(env), tag, depth - 1, target)
        # Depth exhausted: replace with an opaque application of the callee's
        # logic mirror, constrained only by contracts and admitted lemmas.
        if not footprint_of(callee, self.program).is_pure or callee.ret != INT:
            raise TransformError([Diagnostic(
                "error", s.span,
                f"inlining budget exhausted at call to {s.callee}, which has "
                "side effects; raise the inlining option")])
        self.opaque_callees.add(callee.name)
        return [CallStmt(target, acsl_symbol(callee.name), tuple(args))]


def _emit_call(spec: CallSpec, renaming: Renaming, inliner: _Inliner) -> list[Stmt]:
    """Emit the inlined block for one callset call under its renaming."""
    callee = inliner.program.function(spec.callee)
    if callee is None:
        raise TransformError([Diagnostic(
            "error", spec.span, f"unknown function {spec.callee}")])
    out: list[Stmt] = []
    args = [inliner.lower_arg(a, str(renaming.index), out) for a in spec.args]
    if renaming.ret_var is not None:
        out.append(DeclStmt(renaming.ret_var, None))
    env = dict(renaming.globals)
    env.update(renaming.pointers)
    env.update(renaming.locals)
    int_formals = [p for p in callee.formals if p.ty == INT]
    for p, arg in zip(int_formals, args):
        out.append(DeclStmt(env[p.name], arg))
    body = inliner.rename_stmts(list(callee.body), env, str(renaming.index),
                                spec.depth)
    converted = _tail_convert(body, renaming.ret_var)
    if converted is None:
        converted = _flag_convert(body, renaming.ret_var,
                                  inliner.names.fresh(f"done_{renaming.index}"))
    out.extend(converted)
    return out


def inline_call(spec: CallSpec, renaming: Renaming,
                program: Program) -> list[Stmt]:
    """Standalone inlining of one callset call (fresh allocator)."""
    names = _Names(program)
    for m in (renaming.globals, renaming.pointers, renaming.locals):
        names.used.update(m.values())
    if renaming.ret_var:
        names.used.add(renaming.ret_var)
    return _emit_call(spec, renaming, _Inliner(program, names))


# ---------------------------------------------------------------------------
# Predicate translation
# ---------------------------------------------------------------------------


def translate_pred(pred: Pred, renamings: list[Renaming],
                   program: Optional[Program] = None,
                   flavor: str = "wrapper",
                   clause: Optional[RelationalClause] = None) -> Pred:
    """Translate a relational predicate into its wrapper or lemma form.

    Wrapper flavor: `\\at(x, Pre_id)` becomes `\\at(x_id, Pre)`,
    `\\at(x, Post_id)` becomes `\\at(x_id, Here)`, `\\callresult(id)` becomes
    `ret_id`, and `\\callpure(k, f, a)` becomes the application `f_acsl(a)`.

    Lemma flavor: per-call state is named by quantified values
    (`g_id_pre`/`g_id_post`) or per-call labels (`pre_id`/`post_id`), and
    results of pure callees become applications over their argument terms.
    """
    by_id = {r.call_id: r for r in renamings}
    calls = {c.call_id: c for c in clause.calls} if clause is not None else {}

    def term(t: Term) -> Term:
        if isinstance(t, Bin):
            return Bin(t.op, term(t.left), term(t.right))
        if isinstance(t, CallResult):
            r = by_id[t.call_id]
            if flavor == "lemma" and program is not None:
                cs = calls.get(t.call_id)
                callee = program.function(cs.callee) if cs else None
                if callee is not None and acsl_style(callee, program) == STYLE_PURE:
                    return LogicApp(acsl_symbol(callee.name),
                                    tuple(term(a) for a in cs.args))
            return Var(r.ret_var or f"ret_{t.call_id}")
        if isinstance(t, At):
            parsed = rel_label(t.label)
            if parsed is None:
                return At(term(t.base), t.label)
            kind, cid = parsed
            r = by_id[cid]
            if isinstance(t.base, Var):
                dup = r.globals.get(t.base.name, t.base.name)
                if flavor == "wrapper":
                    return At(Var(dup), "Pre" if kind == "Pre" else "Here")
                return Var(f"{t.base.name}_{cid}_{kind.lower()}")
            if isinstance(t.base, Deref):
                dup = r.pointers.get(t.base.name, t.base.name)
                if flavor == "wrapper":
                    return At(Deref(dup), "Pre" if kind == "Pre" else "Here")
                return At(Deref(dup), f"{kind.lower()}_{cid}")
            raise TypeError(f"\\at on {t.base!r}")
        if isinstance(t, CallPure):
            return LogicApp(acsl_symbol(t.callee), tuple(term(a) for a in t.args))
        return t

    def walk(p: Pred) -> Pred:
        if isinstance(p, Cmp):
            return Cmp(p.op, term(p.left), term(p.right))
        if isinstance(p, PAnd):
            return PAnd(walk(p.left), walk(p.right))
        if isinstance(p, POr):
            return POr(walk(p.left), walk(p.right))
        if isinstance(p, PImp):
            return PImp(walk(p.left), walk(p.right))
        if isinstance(p, PNot):
            return PNot(walk(p.body))
        if isinstance(p, (PForall, PExists)):
            cls = PForall if isinstance(p, PForall) else PExists
            return cls(p.binders, walk(p.body))
        if isinstance(p, PredApp):
            return PredApp(p.name, p.labels, tuple(term(a) for a in p.args))
        return p

    return walk(pred)


# ---------------------------------------------------------------------------
# Wrapper and axiomatic construction
# ---------------------------------------------------------------------------


def build_wrapper(clause: RelationalClause, program: Program, index: int = 1,
                  names: Optional[_Names] = None,
                  renamings: Optional[list[Renaming]] = None,
                  inliner: Optional[_Inliner] = None) -> WrapperFunction:
    names = names or _Names(program)
    renamings = renamings if renamings is not None else \
        make_renamings(clause, program, names)
    inliner = inliner or _Inliner(program, names)

    body: list[Stmt] = []
    for cs, ren in zip(clause.calls, renamings):
        body.extend(_emit_call(cs, ren, inliner))
    body.append(AssertStmt(ASSERT_LABEL,
                           translate_pred(clause.pred, renamings, program,
                                          "wrapper", clause)))

    requires: list[Pred] = []
    for i, ri in enumerate(renamings):
        for rj in renamings[i + 1:]:
            for p in ri.pointers.values():
                for q in rj.pointers.values():
                    requires.append(Separated(Var(p), Var(q)))

    binder_params = tuple(b.name for b in clause.binders)
    pointer_params: list[str] = []
    for ren in renamings:
        pointer_params.extend(ren.pointers.values())
    formals = tuple(Param(b, INT) for b in binder_params) + \
        tuple(Param(p, PTR) for p in pointer_params)

    dup_globals: list[str] = []
    for ren in renamings:
        dup_globals.extend(ren.globals.values())

    fn = FunctionDef(
        name=names.fresh(f"{WRAPPER_PREFIX}{index}"),
        formals=formals,
        ret=VOID,
        body=tuple(body),
        contract=Contract(requires=tuple(requires)),
    )
    return WrapperFunction(fn, clause.name, tuple(renamings), binder_params,
                           tuple(pointer_params), tuple(dup_globals))


def _callpure_callees(clause: RelationalClause) -> list[str]:
    """Functions referenced via \\callpure, in first-occurrence order."""
    out: list[str] = []

    def term(t: Term) -> None:
        if isinstance(t, CallPure):
            if t.callee not in out:
                out.append(t.callee)
            for a in t.args:
                term(a)
        elif isinstance(t, Bin):
            term(t.left)
            term(t.right)

    def pred(p: Pred) -> None:
        if isinstance(p, Cmp):
            term(p.left)
            term(p.right)
        elif isinstance(p, (PAnd, POr, PImp)):
            pred(p.left)
            pred(p.right)
        elif isinstance(p, PNot):
            pred(p.body)
        elif isinstance(p, (PForall, PExists)):
            pred(p.body)
        elif isinstance(p, PredApp):
            for a in p.args:
                term(a)

    for cs in clause.calls:
        for a in cs.args:
            term(a)
    pred(clause.pred)
    return out


def involved_functions(clause: RelationalClause, program: Program) -> list[str]:
    out: list[str] = []
    for cs in clause.calls:
        if cs.callee not in out:
            out.append(cs.callee)
    for name in _callpure_callees(clause):
        if name not in out:
            out.append(name)
    return out


def _acsl_params(fn: FunctionDef, program: Program, style: str) -> tuple[Param, ...]:
    if style == STYLE_PURE:
        return tuple(Param(p.name, INT) for p in fn.formals if p.ty == INT)
    params: list[Param] = []
    if fn.ret == INT:
        params.append(Param("res", INT))
    params.extend(Param(p.name, p.ty) for p in fn.formals)
    if style == STYLE_VALUES:
        for loc in footprint_locs(fn, program):
            params.append(Param(f"{loc.name}_pre", INT))
            params.append(Param(f"{loc.name}_post", INT))
    return tuple(params)


def _acsl_decl(fn: FunctionDef, program: Program):
    style = acsl_style(fn, program)
    name = acsl_symbol(fn.name)
    params = _acsl_params(fn, program, style)
    if style == STYLE_PURE:
        return LogicFnDecl(name, params)
    if style == STYLE_VALUES:
        return PredicateDecl(name, (), params)
    reads: list[Term] = []
    for loc in footprint_locs(fn, program):
        base = Var(loc.name) if isinstance(loc, GlobalLoc) else Deref(loc.name)
        reads.append(At(base, "post"))
        reads.append(At(base, "pre"))
    return PredicateDecl(name, ("pre", "post"), params, tuple(reads))


def _link_ensures(fn: FunctionDef, program: Program) -> Pred:
    """The ensures clause tying a C function to its logic mirror."""
    style = acsl_style(fn, program)
    name = acsl_symbol(fn.name)
    if style == STYLE_PURE:
        pure_args = tuple(Var(p.name) for p in fn.formals if p.ty == INT)
        return Cmp("==", ResultTerm(), LogicApp(name, pure_args))
    args: list[Term] = []
    if fn.ret == INT:
        args.append(ResultTerm())
    args.extend(Var(p.name) for p in fn.formals)
    if style == STYLE_VALUES:
        for loc in footprint_locs(fn, program):
            args.append(At(Var(loc.name), "Pre"))
            args.append(At(Var(loc.name), "Post"))
        return PredApp(name, (), tuple(args))
    return PredApp(name, ("Pre", "Post"), tuple(args))


def build_axiomatic(clause: RelationalClause, program: Program, index: int = 1,
                    renamings: Optional[list[Renaming]] = None,
                    declared: Optional[set[str]] = None,
                    extra_decls: tuple[str, ...] = ()) -> Axiomatic:
    """Axiomatic block for one clause: the not-yet-declared `_acsl` symbols
    of its functions plus the lemma restating the property."""
    renamings = renamings if renamings is not None else \
        make_renamings(clause, program)
    declared = declared if declared is not None else set()
    items: list = []
    for fname in involved_functions(clause, program) + list(extra_decls):
        if fname in declared:
            continue
        declared.add(fname)
        fn = program.function(fname)
        if fn is None:
            raise TransformError([Diagnostic(
                "error", clause.span, f"{clause.name}: unknown function {fname}")])
        items.append(_acsl_decl(fn, program))
    items.append(_build_lemma(clause, program, index, renamings))
    return Axiomatic(f"{AXIOM_PREFIX}{index}", tuple(items))


def _build_lemma(clause: RelationalClause, program: Program, index: int,
                 renamings: list[Renaming]) -> Lemma:
    # Quantifier layout follows the generated-code convention: clause
    # binders first, then per-call state groups with the last call first.
    labels: list[str] = []
    binders: list[Binder] = list(clause.binders)
    hyps: list[Pred] = []

    per_call = list(zip(clause.calls, renamings))
    for cs, ren in reversed(per_call):
        callee = program.function(cs.callee)
        style = acsl_style(callee, program)
        if style == STYLE_LABELS:
            labels.extend((f"pre_{cs.call_id}", f"post_{cs.call_id}"))
            for p in callee.formals:
                if p.ty == PTR:
                    binders.append(Binder(ren.pointers[p.name], PTR))
        if style != STYLE_PURE and callee.ret == INT:
            binders.append(Binder(ren.ret_var, INT))
        if style == STYLE_VALUES:
            for loc in footprint_locs(callee, program):
                binders.append(Binder(f"{loc.name}_{cs.call_id}_pre", INT))
                binders.append(Binder(f"{loc.name}_{cs.call_id}_post", INT))

    for i, (_, ri) in enumerate(per_call):
        for _, rj in per_call[i + 1:]:
            for p in ri.pointers.values():
                for q in rj.pointers.values():
                    hyps.append(Separated(Var(p), Var(q)))

    for cs, ren in reversed(per_call):
        callee = program.function(cs.callee)
        style = acsl_style(callee, program)
        if style == STYLE_PURE:
            continue
        args: list[Term] = []
        if callee.ret == INT:
            args.append(Var(ren.ret_var))
        if style == STYLE_VALUES:
            args.extend(_lemma_term(a) for a in cs.args)
            for loc in footprint_locs(callee, program):
                args.append(Var(f"{loc.name}_{cs.call_id}_pre"))
                args.append(Var(f"{loc.name}_{cs.call_id}_post"))
            hyps.append(PredApp(acsl_symbol(cs.callee), (), tuple(args)))
        else:
            int_args = iter(cs.args)
            for p in callee.formals:
                if p.ty == PTR:
                    args.append(Var(ren.pointers[p.name]))
                else:
                    args.append(_lemma_term(next(int_args)))
            hyps.append(PredApp(acsl_symbol(cs.callee),
                                (f"pre_{cs.call_id}", f"post_{cs.call_id}"),
                                tuple(args)))

    body = translate_pred(clause.pred, renamings, program, "lemma", clause)
    for h in reversed(hyps):
        body = PImp(h, body)
    if binders:
        body = PForall(tuple(binders), body)
    return Lemma(f"{LEMMA_PREFIX}{index}", tuple(labels), body)


def _lemma_term(t: Term) -> Term:
    if isinstance(t, Bin):
        return Bin(t.op, _lemma_term(t.left), _lemma_term(t.right))
    if isinstance(t, CallPure):
        return LogicApp(acsl_symbol(t.callee),
                        tuple(_lemma_term(a) for a in t.args))
    return t


# ---------------------------------------------------------------------------
# Whole-program transformation
# ---------------------------------------------------------------------------


def transform(program: Program) -> TransformedProgram:
    """Apply the self-composition transformation to every relational clause,
    in declaration order. Raises TransformError (with every diagnostic) if
    the input does not validate; never emits partial output."""
    diags = [d for d in validate(program) if d.severity == "error"]
    if diags:
        raise TransformError(diags)

    clauses = program.clauses()
    if not clauses:
        return TransformedProgram(program, program, (), {})

    names = _Names(program)
    inliner = _Inliner(program, names)

    built: list[tuple[RelationalClause, int, WrapperFunction, list[Renaming]]] = []
    for n, (_host, clause) in enumerate(clauses, 1):
        renamings = make_renamings(clause, program, names)
        wrapper = build_wrapper(clause, program, n, names, renamings, inliner)
        built.append((clause, n, wrapper, renamings))

    declared: set[str] = set()
    linked: set[str] = set()
    axiomatics: list[Axiomatic] = []
    entries: list[ClauseArtifacts] = []
    behaviors_by_fn: dict[str, list[Behavior]] = {}
    acsl_symbols: dict[str, tuple[str, str]] = {}
    tail: list = []

    for clause, n, wrapper, renamings in built:
        # Residual opaque callees surface while wrappers are built; declare
        # any still-missing mirrors in the last axiomatic block.
        extra = tuple(sorted(inliner.opaque_callees - declared
                             - set(involved_functions(clause, program)))) \
            if n == len(built) else ()
        ax = build_axiomatic(clause, program, n, renamings, declared, extra)
        axiomatics.append(ax)
        for fname in sorted(declared):
            fn = program.function(fname)
            acsl_symbols[fname] = (acsl_symbol(fname), acsl_style(fn, program))
            if fname not in linked:
                linked.add(fname)
                behaviors_by_fn.setdefault(fname, []).append(
                    Behavior(f"{BEHAVIOR_PREFIX}{n}",
                             (_link_ensures(fn, program),)))
        for g in wrapper.dup_globals:
            tail.append(GlobalDecl(g, INT, None))
        tail.append(wrapper.fn)
        entries.append(ClauseArtifacts(clause, n, wrapper, ax,
                                       f"{LEMMA_PREFIX}{n}"))

    items: list = []
    items.extend(program.globals)
    items.extend(program.axiomatics)
    items.extend(axiomatics)
    for fn in program.functions:
        c = fn.contract
        items.append(FunctionDef(fn.name, fn.formals, fn.ret, fn.body,
                                 Contract(c.requires, c.assigns, c.ensures,
                                          c.behaviors + tuple(
                                              behaviors_by_fn.get(fn.name, ())),
                                          ())))
    items.extend(tail)

    result = Program(tuple(items))
    out_diags = [d for d in validate(result) if d.severity == "error"]
    if out_diags:
        raise TransformError(out_diags)
    return TransformedProgram(result, program, tuple(entries), acsl_symbols)
