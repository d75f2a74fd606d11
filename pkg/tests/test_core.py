"""Validation and footprint analysis."""

import pytest

from relprop.minic import (
    INT, PTR, VOID, Program, GlobalDecl, FunctionDef, Param, Contract,
    AssignsClause, GlobalLoc, DerefLoc, ResultLoc, RelationalClause,
    CallSpec, Binder, Cmp, CallResult, IntLit, Var, ReturnStmt, AssignStmt,
    Bin, DeclStmt,
)
from relprop.validate import validate, footprint_of, MemFootprint, MissingAssigns

from conftest import load


def test_fig2_validates_clean(fig2):
    assert validate(fig2) == []


def test_fig5_and_fig6_validate_clean(fig5, fig6):
    assert validate(fig5) == []
    assert validate(fig6) == []


def test_unresolved_call_id_is_reported():
    src = """
    /*@ assigns \\result \\from x;
        relational R: \\forall int x;
          \\callset(\\call(f, x, id1)) ==> \\callresult(id3) > 0;
    */
    int f(int x) { return x; }
    """
    from relprop.parser import parse_program
    p = parse_program(src)
    assert isinstance(p, Program)
    diags = validate(p)
    assert any("id3" in d.message for d in diags)
    assert all(d.span is not None for d in diags)


def test_global_write_without_assigns_is_reported():
    src = """
    int g;

    /*@ relational R: \\callset(\\call(f, id1), \\call(f, id2))
          ==> \\at(g, Pre_id1) == \\at(g, Pre_id2);
    */
    void f() {
      g = g + 1;
      return;
    }
    """
    from relprop.parser import parse_program
    p = parse_program(src)
    assert isinstance(p, Program)
    diags = validate(p)
    assert any("assigns" in d.message for d in diags)


def test_validate_is_idempotent_and_total(fig5):
    assert validate(fig5) == validate(fig5)
    # a thoroughly broken program still yields diagnostics, not exceptions
    broken = Program((
        GlobalDecl("g", INT, None),
        GlobalDecl("g", INT, None),
        FunctionDef("g", (), INT, (ReturnStmt(Var("nope")),)),
    ))
    diags = validate(broken)
    assert diags == validate(broken)
    assert len(diags) >= 3


def test_footprint_of_h(fig5):
    fp = footprint_of(fig5.function("h"), fig5)
    assert fp.writes == frozenset({GlobalLoc("y")})
    assert fp.reads == frozenset({GlobalLoc("y")})


def test_footprint_of_k(fig6):
    fp = footprint_of(fig6.function("k"), fig6)
    assert fp.writes == frozenset({DerefLoc("y")})
    assert fp.reads == frozenset({DerefLoc("y")})


def test_footprint_of_pure_max(fig2):
    fp = footprint_of(fig2.function("max"), fig2)
    assert fp.writes == frozenset()
    assert fp.reads == frozenset()
    assert fp.is_pure


def test_footprint_missing_assigns_raises():
    g = GlobalDecl("g", INT, None)
    fn = FunctionDef("f", (), VOID,
                     (AssignStmt(Var("g"), Bin("+", Var("g"), IntLit(1))),))
    with pytest.raises(MissingAssigns):
        footprint_of(fn, Program((g, fn)))


def test_footprint_unions_callee_globals():
    src = """
    int g;

    /*@ assigns g \\from g; */
    void inc() {
      g = g + 1;
      return;
    }

    /*@ assigns g \\from g; */
    void twice() {
      inc();
      inc();
      return;
    }
    """
    from relprop.parser import parse_program
    p = parse_program(src)
    fp = footprint_of(p.function("twice"), p)
    assert GlobalLoc("g") in fp.writes


def test_footprint_monotone_under_added_assigns(fig5):
    h = fig5.function("h")
    base = footprint_of(h, fig5)
    extended_program = Program((GlobalDecl("y", INT, None),
                                GlobalDecl("z", INT, None)))
    extra = AssignsClause(GlobalLoc("z"), (GlobalLoc("z"),))
    h2 = FunctionDef(h.name, h.formals, h.ret, h.body,
                     Contract(assigns=h.contract.assigns + (extra,)))
    p2 = Program((GlobalDecl("y", INT, None), GlobalDecl("z", INT, None), h2))
    fp2 = footprint_of(h2, p2)
    assert base.writes <= fp2.writes
    assert base.reads <= fp2.reads


def test_pointer_arithmetic_rejected():
    src = """
    /*@ assigns *p \\from *p; */
    void f(int *p) {
      *p = p + 1;
      return;
    }
    """
    from relprop.parser import parse_program
    p = parse_program(src)
    assert isinstance(p, Program)
    assert any("arithmetic" in d.message for d in validate(p))


def test_float_literal_rejected():
    src = """
    /*@ requires x > 1.5; */
    int f(int x) { return x; }
    """
    from relprop.parser import parse_program
    p = parse_program(src)
    assert isinstance(p, Program)
    assert any("float" in d.message for d in validate(p))


def test_callpure_callee_must_be_pure():
    src = """
    int g;

    /*@ assigns g \\from g; */
    int bump() {
      g = g + 1;
      return g;
    }

    /*@ assigns \\result \\from x;
        relational R: \\forall int x;
          \\callset(\\call(f, \\callpure(bump), x, id1)) ==> \\callresult(id1) > 0;
    */
    int f(int a, int x) { return a + x; }
    """
    from relprop.parser import parse_program
    p = parse_program(src)
    assert isinstance(p, Program)
    assert any("not pure" in d.message for d in validate(p))


def test_clause_argument_free_vars_must_be_binders(fig2):
    clause = fig2.function("max").contract.relational[0]
    bad = RelationalClause(
        "R2", clause.binders,
        (CallSpec(1, "max", (Var("zz"), IntLit(1)), "id9"),),
        Cmp(">", CallResult("id9"), IntLit(0)))
    maxfn = fig2.function("max")
    c = maxfn.contract
    p = Program(tuple(
        i if not (isinstance(i, FunctionDef) and i.name == "max") else
        FunctionDef(i.name, i.formals, i.ret, i.body,
                    Contract(c.requires, c.assigns, c.ensures, c.behaviors,
                             c.relational + (bad,)))
        for i in fig2.items))
    diags = validate(p)
    assert any("zz" in d.message and "binder" in d.message for d in diags)
