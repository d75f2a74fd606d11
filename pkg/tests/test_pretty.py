"""Pretty-printer round trips."""

from relprop.minic import Program
from relprop.parser import parse_program
from relprop.pretty import pretty_print
from relprop.selfcomp import transform

from conftest import load, comparator_paths


def roundtrip(p: Program) -> Program:
    out = parse_program(pretty_print(p), "<pp>")
    assert isinstance(out, Program), [str(d) for d in out]
    return out


def test_fig2_fixpoint(fig2):
    assert roundtrip(fig2) == fig2


def test_fig6_fixpoint(fig6):
    assert roundtrip(fig6) == fig6


def test_empty_program():
    assert pretty_print(Program(())) == ""
    assert parse_program("") == Program(())


def test_whole_corpus_roundtrips():
    for name in ("fig2.mc", "fig5.mc", "fig6.mc", "crypt.mc", "fact.mc"):
        p = load(name)
        assert roundtrip(p) == p, name
    for path in comparator_paths():
        p = parse_program(path.read_text(encoding="utf-8"), path.name)
        assert isinstance(p, Program)
        assert roundtrip(p) == p, path.name


def test_transformed_programs_roundtrip(fig2, fig5, fig6, crypt, fact):
    for p in (fig2, fig5, fig6, crypt, fact):
        out = transform(p).program
        assert roundtrip(out) == out


def test_deterministic_output(fig5):
    assert pretty_print(fig5) == pretty_print(fig5)
    t1 = pretty_print(transform(fig5).program)
    t2 = pretty_print(transform(fig5).program)
    assert t1 == t2
