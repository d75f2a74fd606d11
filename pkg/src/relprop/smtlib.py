"""SMT-LIB v2 emission for verification conditions.

One script per VC: UFNIA logic, sorted declarations for every free symbol,
one assert per hypothesis, the negated goal, `(check-sat)`. An `unsat`
answer means the VC is valid. Output is deterministic byte-for-byte.
"""

from __future__ import annotations

from .logic import (
    TermF, Form, IVar, ICon, IOp, IIte, IApp,
    FBool, FCmp, FNot, FAnd, FOr, FImp, FQuant, FApp,
    free_vars, symbols,
)
from .vcgen import VerificationCondition

_OPS = {"+": "+", "-": "-", "*": "*", "/": "div"}
_CMPS = {"==": "=", "<=": "<=", ">=": ">=", "<": "<", ">": ">"}


def _sym(name: str) -> str:
    # $ is legal in SMT-LIB simple symbols; quote anything else exotic.
    if all(c.isalnum() or c in "_$." for c in name) and not name[0].isdigit():
        return name
    return f"|{name}|"


def term_sexpr(t: TermF) -> str:
    if isinstance(t, IVar):
        return _sym(t.name)
    if isinstance(t, ICon):
        return str(t.value) if t.value >= 0 else f"(- {-t.value})"
    if isinstance(t, IOp):
        return f"({_OPS[t.op]} {term_sexpr(t.left)} {term_sexpr(t.right)})"
    if isinstance(t, IIte):
        return f"(ite {form_sexpr(t.cond)} {term_sexpr(t.then)} {term_sexpr(t.other)})"
    if isinstance(t, IApp):
        if not t.args:
            return _sym(t.fn)
        return f"({_sym(t.fn)} {' '.join(term_sexpr(a) for a in t.args)})"
    raise TypeError(f"unknown term {t!r}")


def form_sexpr(f: Form) -> str:
    if isinstance(f, FBool):
        return "true" if f.value else "false"
    if isinstance(f, FCmp):
        if f.op == "!=":
            return f"(not (= {term_sexpr(f.left)} {term_sexpr(f.right)}))"
        return f"({_CMPS[f.op]} {term_sexpr(f.left)} {term_sexpr(f.right)})"
    if isinstance(f, FNot):
        return f"(not {form_sexpr(f.body)})"
    if isinstance(f, FAnd):
        return f"(and {' '.join(form_sexpr(i) for i in f.items)})"
    if isinstance(f, FOr):
        return f"(or {' '.join(form_sexpr(i) for i in f.items)})"
    if isinstance(f, FImp):
        return f"(=> {form_sexpr(f.hyp)} {form_sexpr(f.concl)})"
    if isinstance(f, FQuant):
        binders = " ".join(f"({_sym(v)} Int)" for v in f.vars)
        return f"({f.kind} ({binders}) {form_sexpr(f.body)})"
    if isinstance(f, FApp):
        if not f.args:
            return _sym(f.pred)
        return f"({_sym(f.pred)} {' '.join(term_sexpr(a) for a in f.args)})"
    raise TypeError(f"unknown formula {f!r}")


def emit_smtlib(vc: VerificationCondition) -> str:
    """Render one VC as an SMT-LIB v2 script; `unsat` means the VC holds."""
    consts: set[str] = set(free_vars(vc.goal))
    syms: dict[str, tuple[int, str]] = dict(symbols(vc.goal))
    for _, h in vc.hypotheses:
        consts |= free_vars(h)
        for name, sig in symbols(h).items():
            syms[name] = sig

    lines = [
        f"; vc: {vc.name}",
        f"; provenance: function {vc.function}, {vc.kind} {vc.assertion}",
        "(set-logic UFNIA)",
    ]
    for name in sorted(consts):
        lines.append(f"(declare-fun {_sym(name)} () Int)")
    for name in sorted(syms):
        arity, kind = syms[name]
        doms = " ".join(["Int"] * arity)
        ret = "Bool" if kind == "bool" else "Int"
        lines.append(f"(declare-fun {_sym(name)} ({doms}) {ret})")
    for hname, h in vc.hypotheses:
        lines.append(f"; hypothesis: {hname}")
        lines.append(f"(assert {form_sexpr(h)})")
    lines.append("(assert (not %s))" % form_sexpr(vc.goal))
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"
