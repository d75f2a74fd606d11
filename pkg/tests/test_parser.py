"""Concrete syntax: lexing, parsing, diagnostics, spans."""

from relprop.minic import (
    Program, CallSpec, IntLit, Var, Bin, CallResult, At, Cmp, PImp,
    RelationalClause, Diagnostic,
)
from relprop.parser import parse_program, lex


def test_fig2_clause_shape(fig2):
    clause = fig2.function("max").contract.relational[0]
    assert clause.name == "R1"
    assert [b.name for b in clause.binders] == ["x1", "y1"]
    assert [(c.callee, c.call_id, len(c.args)) for c in clause.calls] == \
        [("max", "id1", 2), ("abs", "id2", 1)]
    assert clause.calls[1].args[0] == Bin("-", Var("x1"), Var("y1"))
    assert clause.pred == Cmp(
        "==", CallResult("id1"),
        Bin("/", Bin("+", Bin("+", Var("x1"), Var("y1")), CallResult("id2")),
            IntLit(2)))


def test_fig5_clause_uses_call_labels(fig5):
    clause = fig5.function("h").contract.relational[0]
    assert clause.binders == ()
    assert clause.pred == PImp(
        Cmp("<", At(Var("y"), "Pre_id1"), At(Var("y"), "Pre_id2")),
        Cmp("<", At(Var("y"), "Post_id1"), At(Var("y"), "Post_id2")))


def test_parse_succeeds_with_dangling_call_id():
    src = """
    /*@ assigns \\result \\from x;
        relational R: \\forall int x;
          \\callset(\\call(f, x, id1)) ==> \\callresult(id3) > 0;
    */
    int f(int x) { return x; }
    """
    p = parse_program(src)
    assert isinstance(p, Program)  # the parser accepts; validate flags id3


def test_inlining_option_parses_and_defaults():
    src = """
    /*@ assigns \\result \\from x;
        relational R: \\forall int x;
          \\callset(\\call(3, f, x, id1), \\call(f, x, id2))
          ==> \\callresult(id1) == \\callresult(id2);
    */
    int f(int x) { return x; }
    """
    p = parse_program(src)
    assert isinstance(p, Program)
    clause = p.function("f").contract.relational[0]
    assert clause.calls[0].depth == 3
    assert clause.calls[1].depth == 1


def test_syntax_error_has_span():
    diags = parse_program("int f( { }", "bad.mc")
    assert isinstance(diags, list) and diags
    d = diags[0]
    assert d.severity == "error"
    assert d.span is not None and d.span.file == "bad.mc"
    assert d.span.start_line >= 1 and d.span.start_col >= 1


def test_unknown_annotation_keyword_is_error():
    src = "/*@ frobnicate x; */ int f() { return 0; }"
    diags = parse_program(src)
    assert isinstance(diags, list)
    assert "frobnicate" in diags[0].message


def test_unknown_backslash_construct_is_error():
    src = "/*@ requires \\frob(x); */ int f(int x) { return x; }"
    diags = parse_program(src)
    assert isinstance(diags, list)
    assert "\\frob" in diags[0].message


def test_whitespace_and_layout_insensitivity(fig5):
    text = (
        "int y;\n/*@ assigns y \\from y; relational R1: "
        "\\callset(\\call(h,id1),\\call(h,id2)) ==> "
        "\\at(y,Pre_id1)<\\at(y,Pre_id2) ==> "
        "\\at(y,Post_id1)<\\at(y,Post_id2); */\n"
        "void h(){int a=10;y=y+a;return;}"
    )
    p = parse_program(text)
    assert isinstance(p, Program)
    assert p == fig5


def test_line_annotations_and_comments():
    src = """
    // plain comment
    /* block comment */
    //@ assigns \\result \\from x;
    int f(int x) {
      /*@ assert positive_input: x == x; */
      return x;
    }
    """
    p = parse_program(src)
    assert isinstance(p, Program)
    assert p.function("f").contract.assigns


def test_span_within_input_bounds():
    src = "int f() {\n  return oops(;\n}"
    diags = parse_program(src, "x.mc")
    assert isinstance(diags, list)
    lines = src.split("\n")
    for d in diags:
        assert 1 <= d.span.start_line <= len(lines)
        assert 1 <= d.span.start_col <= len(lines[d.span.start_line - 1]) + 2


def test_calls_cannot_nest_in_expressions():
    src = "int f(int x) { return x; } int g(int x) { int y = f(x) + 1; return y; }"
    diags = parse_program(src)
    assert isinstance(diags, list)
    assert "nested" in diags[0].message


def test_loop_annotation_attaches_to_while():
    src = """
    int f(int n) {
      int i = 0;
      int s = 0;
      /*@ loop invariant s >= 0 && i >= 0; loop variant n - i; */
      while (i < n) {
        s = s + 1;
        i = i + 1;
      }
      return s;
    }
    """
    p = parse_program(src)
    assert isinstance(p, Program)
    body = p.function("f").body
    loop = body[2]
    assert loop.invariant is not None
    assert loop.variant == Bin("-", Var("n"), Var("i"))


def test_lexer_tracks_positions():
    toks = lex("int x;\n  x = 1;")
    names = [(t.value, t.line, t.col) for t in toks if t.kind != "EOF"]
    assert names[0] == ("int", 1, 1)
    assert names[3] == ("x", 2, 3)
