"""Hypothesis strategies for random well-formed MiniC programs.

The generators build ASTs directly and stay within the fragment where every
analysis is total: no division in executable positions (no runtime
division-by-zero), small literals (no 64-bit overflow), no loops or calls in
randomly generated bodies. Contracts over-approximate: every global gets an
assigns clause, which is always a sound footprint.
"""

from hypothesis import strategies as st

from relprop.minic import (
    INT, VOID, Program, GlobalDecl, FunctionDef, Param, Contract,
    AssignsClause, GlobalLoc, FormalLoc, ResultLoc, RelationalClause,
    CallSpec, Binder,
    DeclStmt, AssignStmt, IfStmt, ReturnStmt,
    IntLit, Var, Bin, CallResult, At, Term,
    Cmp, PAnd, POr, PImp, PNot, Pred,
)

LOCALS = ["t0", "t1", "t2"]
CMP_OPS = ["==", "!=", "<", "<=", ">", ">="]


def term_strategy(names: list[str], depth: int = 2,
                  ops: tuple[str, ...] = ("+", "-", "*")) -> st.SearchStrategy[Term]:
    leaf = st.integers(-9, 9).map(IntLit)
    if names:
        leaf = leaf | st.sampled_from(names).map(Var)
    if depth == 0:
        return leaf
    sub = term_strategy(names, depth - 1, ops)
    return leaf | st.builds(Bin, st.sampled_from(list(ops)), sub, sub)


def cond_strategy(names: list[str], depth: int = 1) -> st.SearchStrategy[Pred]:
    term = term_strategy(names, 1)
    leaf = st.builds(Cmp, st.sampled_from(CMP_OPS), term, term)
    if depth == 0:
        return leaf
    sub = cond_strategy(names, depth - 1)
    return leaf | st.builds(PAnd, sub, sub) | st.builds(POr, sub, sub) \
        | st.builds(PNot, sub)


@st.composite
def body_strategy(draw, readable: list[str], writable: list[str],
                  depth: int = 2, taken: set[str] | None = None) -> tuple:
    # `taken` is shared across nested blocks: locals are function-scoped.
    stmts = []
    names = list(readable)
    taken = taken if taken is not None else set(names)
    n = draw(st.integers(1, 4))
    for _ in range(n):
        free_locals = [l for l in LOCALS if l not in taken]
        kinds = ["assign"]
        if free_locals:
            kinds.append("decl")
        if depth > 0:
            kinds.append("if")
        kind = draw(st.sampled_from(kinds))
        if kind == "decl":
            name = free_locals[0]
            taken.add(name)
            stmts.append(DeclStmt(name, draw(term_strategy(names))))
            names.append(name)
            writable = writable + [name]
        elif kind == "assign" and writable:
            target = draw(st.sampled_from(writable))
            stmts.append(AssignStmt(Var(target), draw(term_strategy(names))))
        elif kind == "if":
            cond = draw(cond_strategy(names))
            then = draw(body_strategy(names, writable, depth - 1, taken))
            orelse = draw(body_strategy(names, writable, depth - 1, taken)) \
                if draw(st.booleans()) else ()
            stmts.append(IfStmt(cond, then, orelse))
    return tuple(stmts)


@st.composite
def function_strategy(draw, name: str, global_names: list[str],
                      n_formals: int, ret: str) -> FunctionDef:
    formals = tuple(Param(f"p{i}", INT) for i in range(n_formals))
    readable = [p.name for p in formals] + list(global_names)
    body = list(draw(body_strategy(readable, list(global_names))))
    locals_in_scope = readable + [s.name for s in body
                                  if isinstance(s, DeclStmt)]
    if ret == INT:
        body.append(ReturnStmt(draw(term_strategy(locals_in_scope))))
    assigns = []
    for g in global_names:
        assigns.append(AssignsClause(
            GlobalLoc(g), tuple(GlobalLoc(h) for h in global_names)))
    if ret == INT:
        assigns.append(AssignsClause(
            ResultLoc(), tuple(FormalLoc(p.name) for p in formals)))
    return FunctionDef(name, formals, ret, tuple(body),
                       Contract(assigns=tuple(assigns)))


@st.composite
def rel_pred_strategy(draw, binders: list[str], call_ids: list[str],
                      int_calls: list[str], global_names: list[str],
                      depth: int = 1) -> Pred:
    leaves: list[st.SearchStrategy[Term]] = [st.integers(-9, 9).map(IntLit)]
    if binders:
        leaves.append(st.sampled_from(binders).map(Var))
    if int_calls:
        leaves.append(st.sampled_from(int_calls).map(CallResult))
    if global_names:
        leaves.append(st.builds(
            At, st.sampled_from(global_names).map(Var),
            st.sampled_from([f"{k}_{i}" for i in call_ids
                             for k in ("Pre", "Post")])))
    leaf = st.one_of(leaves)
    term = leaf | st.builds(Bin, st.sampled_from(["+", "-", "*"]), leaf, leaf)
    atom = st.builds(Cmp, st.sampled_from(CMP_OPS), term, term)
    if depth == 0:
        return draw(atom)
    sub = rel_pred_strategy(binders, call_ids, int_calls, global_names,
                            depth - 1)
    return draw(atom | st.builds(PImp, sub, sub) | st.builds(PAnd, sub, sub)
                | st.builds(POr, sub, sub))


@st.composite
def clause_program_strategy(draw) -> tuple[Program, str]:
    """A validated program with one relational clause; returns it with the
    clause name."""
    n_globals = draw(st.integers(0, 2))
    global_names = ["g", "w"][:n_globals]
    n_formals = draw(st.integers(0, 2))
    ret = draw(st.sampled_from([INT, VOID])) if n_globals else INT
    fn = draw(function_strategy("f", global_names, n_formals, ret))

    n_calls = draw(st.integers(1, 2))
    call_ids = [f"id{i + 1}" for i in range(n_calls)]
    binders = []
    calls = []
    for i, cid in enumerate(call_ids):
        args = []
        for j in range(n_formals):
            b = f"x{i + 1}_{j}"
            binders.append(Binder(b, INT))
            args.append(Var(b))
        calls.append(CallSpec(1, "f", tuple(args), cid))
    int_calls = call_ids if ret == INT else []
    pred = draw(rel_pred_strategy([b.name for b in binders], call_ids,
                                  int_calls, global_names))
    clause = RelationalClause("R", tuple(binders), tuple(calls), pred)
    c = fn.contract
    fn = FunctionDef(fn.name, fn.formals, fn.ret, fn.body,
                     Contract(c.requires, c.assigns, c.ensures, c.behaviors,
                              (clause,)))
    items = tuple(GlobalDecl(g, INT, None) for g in global_names) + (fn,)
    return Program(items), "R"


@st.composite
def program_strategy(draw) -> Program:
    """A validated program without relational clauses, for syntax testing."""
    n_globals = draw(st.integers(0, 2))
    global_names = ["g", "w"][:n_globals]
    items: list = [GlobalDecl(g, INT, draw(st.none() | st.integers(-5, 5)))
                   for g in global_names]
    for i in range(draw(st.integers(1, 2))):
        items.append(draw(function_strategy(
            f"f{i}", global_names, draw(st.integers(0, 2)),
            draw(st.sampled_from([INT, VOID])))))
    return Program(tuple(items))
