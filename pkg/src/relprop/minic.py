"""Abstract syntax for MiniC programs and their contract annotations.

MiniC is a deliberately small C subset: int and int* types, assignments,
if/else, while (with invariant annotations), non-nested calls and returns.
Contracts follow the ACSL style: requires/ensures/assigns clauses plus
`relational` clauses that relate several calls of (possibly distinct)
functions through a `\\callset`.

All nodes are frozen dataclasses; source spans are carried for diagnostics
but excluded from structural equality, so parse/pretty round-trips compare
equal AST-to-AST.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

INT = "int"
PTR = "int*"
VOID = "void"

ARITH_OPS = ("+", "-", "*", "/")
CMP_OPS = ("==", "!=", "<=", ">=", "<", ">")

BUILTIN_LABELS = ("Pre", "Post", "Here", "Old")


@dataclass(frozen=True)
class Span:
    """Half-open source region, 1-based lines and columns."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    span: Optional[Span]
    message: str

    def __str__(self) -> str:
        where = str(self.span) if self.span is not None else "<unknown>"
        return f"{where}: {self.severity}: {self.message}"


@dataclass(frozen=True)
class Node:
    span: Optional[Span] = field(default=None, compare=False, repr=False, kw_only=True)


# ---------------------------------------------------------------------------
# Terms (arithmetic expressions, both program-level and logic-level)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Term(Node):
    pass


@dataclass(frozen=True)
class IntLit(Term):
    value: int


@dataclass(frozen=True)
class FloatLit(Term):
    # Parsed per the annotation grammar, rejected by validation.
    text: str


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Deref(Term):
    name: str


@dataclass(frozen=True)
class Bin(Term):
    op: str
    left: Term
    right: Term


@dataclass(frozen=True)
class CallResult(Term):
    """`\\callresult(id)`: value returned by the callset call named `id`."""

    call_id: str


@dataclass(frozen=True)
class At(Term):
    """`\\at(e, L)`: e evaluated in the state named by label L.

    L is either a built-in label (Pre/Post/Here/Old) or a per-call label
    Pre_<call-id> / Post_<call-id>.
    """

    base: Term  # Var or Deref
    label: str


@dataclass(frozen=True)
class CallPure(Term):
    """`\\callpure(k, f, args)`: result of pure function f, unfolded up to k."""

    depth: int
    callee: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class OldTerm(Term):
    """`\\old(e)` inside an ensures clause."""

    term: Term


@dataclass(frozen=True)
class ResultTerm(Term):
    """`\\result` inside an ensures clause."""


@dataclass(frozen=True)
class LogicApp(Term):
    """Application of a declared logic function, e.g. `max_acsl(x, y)`."""

    name: str
    args: tuple[Term, ...]


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pred(Node):
    pass


@dataclass(frozen=True)
class PBool(Pred):
    value: bool


@dataclass(frozen=True)
class Cmp(Pred):
    op: str
    left: Term
    right: Term


@dataclass(frozen=True)
class PAnd(Pred):
    left: Pred
    right: Pred


@dataclass(frozen=True)
class POr(Pred):
    left: Pred
    right: Pred


@dataclass(frozen=True)
class PImp(Pred):
    left: Pred
    right: Pred


@dataclass(frozen=True)
class PNot(Pred):
    body: Pred


@dataclass(frozen=True)
class Binder(Node):
    name: str
    ty: str = INT


@dataclass(frozen=True)
class PForall(Pred):
    binders: tuple[Binder, ...]
    body: Pred


@dataclass(frozen=True)
class PExists(Pred):
    binders: tuple[Binder, ...]
    body: Pred


@dataclass(frozen=True)
class Separated(Pred):
    """`\\separated(p, q)`: p and q address disjoint memory."""

    left: Term
    right: Term


@dataclass(frozen=True)
class PredApp(Pred):
    """Application of a declared predicate, optionally label-parameterized,
    e.g. `h_acsl(y_pre, y_post)` or `k_acsl{Pre, Post}(y)`."""

    name: str
    labels: tuple[str, ...]
    args: tuple[Term, ...]


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Stmt(Node):
    pass


@dataclass(frozen=True)
class DeclStmt(Stmt):
    name: str
    init: Optional[Term]


@dataclass(frozen=True)
class AssignStmt(Stmt):
    target: Term  # Var or Deref
    value: Term


@dataclass(frozen=True)
class CallStmt(Stmt):
    """`x = f(args);` or `f(args);` — calls are statements, never nested."""

    target: Optional[str]
    callee: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class IfStmt(Stmt):
    cond: Pred
    then: tuple[Stmt, ...]
    orelse: tuple[Stmt, ...]


@dataclass(frozen=True)
class WhileStmt(Stmt):
    cond: Pred
    invariant: Optional[Pred]
    variant: Optional[Term]
    body: tuple[Stmt, ...]


@dataclass(frozen=True)
class ReturnStmt(Stmt):
    value: Optional[Term]


@dataclass(frozen=True)
class AssertStmt(Stmt):
    label: Optional[str]
    pred: Pred


# ---------------------------------------------------------------------------
# Contracts and relational clauses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Loc(Node):
    pass


@dataclass(frozen=True)
class GlobalLoc(Loc):
    name: str


@dataclass(frozen=True)
class DerefLoc(Loc):
    name: str  # a pointer-typed formal of the enclosing function


@dataclass(frozen=True)
class ResultLoc(Loc):
    pass


@dataclass(frozen=True)
class NothingLoc(Loc):
    pass


@dataclass(frozen=True)
class FormalLoc(Loc):
    """A plain formal named in a `\\from` list; formals are not state."""

    name: str


@dataclass(frozen=True)
class AssignsClause(Node):
    target: Loc
    sources: tuple[Loc, ...]


@dataclass(frozen=True)
class Behavior(Node):
    name: str
    ensures: tuple[Pred, ...]


@dataclass(frozen=True)
class CallSpec(Node):
    """One `\\call(k, f, args, id)` inside a `\\callset`."""

    depth: int
    callee: str
    args: tuple[Term, ...]
    call_id: str


@dataclass(frozen=True)
class RelationalClause(Node):
    name: str
    binders: tuple[Binder, ...]
    calls: tuple[CallSpec, ...]
    pred: Pred


@dataclass(frozen=True)
class Contract(Node):
    requires: tuple[Pred, ...] = ()
    assigns: tuple[AssignsClause, ...] = ()
    ensures: tuple[Pred, ...] = ()
    behaviors: tuple[Behavior, ...] = ()
    relational: tuple[RelationalClause, ...] = ()

    def is_empty(self) -> bool:
        return not (self.requires or self.assigns or self.ensures
                    or self.behaviors or self.relational)


# ---------------------------------------------------------------------------
# Axiomatic blocks (generated logic layer, also parseable from source)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Param(Node):
    name: str
    ty: str = INT


@dataclass(frozen=True)
class PredicateDecl(Node):
    name: str
    labels: tuple[str, ...]
    params: tuple[Param, ...]
    reads: tuple[Term, ...] = ()


@dataclass(frozen=True)
class LogicFnDecl(Node):
    name: str
    params: tuple[Param, ...]


@dataclass(frozen=True)
class Lemma(Node):
    name: str
    labels: tuple[str, ...]
    body: Pred


AxiomItem = Union[PredicateDecl, LogicFnDecl, Lemma]


@dataclass(frozen=True)
class Axiomatic(Node):
    name: str
    items: tuple[AxiomItem, ...]

    def lemmas(self) -> tuple[Lemma, ...]:
        return tuple(i for i in self.items if isinstance(i, Lemma))


# ---------------------------------------------------------------------------
# Top-level
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GlobalDecl(Node):
    name: str
    ty: str = INT  # INT or PTR
    init: Optional[int] = None


@dataclass(frozen=True)
class FunctionDef(Node):
    name: str
    formals: tuple[Param, ...]
    ret: str  # INT or VOID
    body: tuple[Stmt, ...]
    contract: Contract = Contract()


TopItem = Union[GlobalDecl, Axiomatic, FunctionDef]


@dataclass(frozen=True)
class Program(Node):
    """A translation unit; `items` preserves declaration order."""

    items: tuple[TopItem, ...] = ()

    @property
    def globals(self) -> tuple[GlobalDecl, ...]:
        return tuple(i for i in self.items if isinstance(i, GlobalDecl))

    @property
    def functions(self) -> tuple[FunctionDef, ...]:
        return tuple(i for i in self.items if isinstance(i, FunctionDef))

    @property
    def axiomatics(self) -> tuple[Axiomatic, ...]:
        return tuple(i for i in self.items if isinstance(i, Axiomatic))

    def function(self, name: str) -> Optional[FunctionDef]:
        for f in self.functions:
            if f.name == name:
                return f
        return None

    def global_decl(self, name: str) -> Optional[GlobalDecl]:
        for g in self.globals:
            if g.name == name:
                return g
        return None

    def logic_decls(self) -> dict[str, Union[PredicateDecl, LogicFnDecl]]:
        out: dict[str, Union[PredicateDecl, LogicFnDecl]] = {}
        for ax in self.axiomatics:
            for item in ax.items:
                if isinstance(item, (PredicateDecl, LogicFnDecl)):
                    out[item.name] = item
        return out

    def clauses(self) -> tuple[tuple[FunctionDef, RelationalClause], ...]:
        """All relational clauses paired with their host function, in
        declaration order (the order used to number generated artifacts)."""
        out = []
        for f in self.functions:
            for c in f.contract.relational:
                out.append((f, c))
        return tuple(out)


def rel_label(label: str) -> Optional[tuple[str, str]]:
    """Split a Pre_<id>/Post_<id> label into (kind, call-id), else None."""
    for kind in ("Pre", "Post"):
        prefix = kind + "_"
        if label.startswith(prefix) and len(label) > len(prefix):
            return kind, label[len(prefix):]
    return None


def term_vars(t: Term) -> set[str]:
    """Free variable names of a term (Deref contributes the pointer name)."""
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Deref):
        return {t.name}
    if isinstance(t, Bin):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, At):
        return term_vars(t.base)
    if isinstance(t, CallPure):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    if isinstance(t, OldTerm):
        return term_vars(t.term)
    if isinstance(t, LogicApp):
        out = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def pred_vars(p: Pred) -> set[str]:
    if isinstance(p, Cmp):
        return term_vars(p.left) | term_vars(p.right)
    if isinstance(p, (PAnd, POr, PImp)):
        return pred_vars(p.left) | pred_vars(p.right)
    if isinstance(p, PNot):
        return pred_vars(p.body)
    if isinstance(p, (PForall, PExists)):
        return pred_vars(p.body) - {b.name for b in p.binders}
    if isinstance(p, Separated):
        return term_vars(p.left) | term_vars(p.right)
    if isinstance(p, PredApp):
        out: set[str] = set()
        for a in p.args:
            out |= term_vars(a)
        return out
    return set()
