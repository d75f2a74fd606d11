"""Property-based suites, 1000 cases each.

Four invariants of the pipeline:
  * parser round trip: pretty-printed programs re-parse to equal ASTs;
  * self-composition semantic equivalence: running the generated wrapper
    agrees with interpreting each call of the original program on its own
    isolated state;
  * the substitution lemma for assignments in the wp calculus;
  * bounded-oracle / interpreter agreement: a counterexample reported by
    the bounded checker makes the wrapper assertion fail concretely, and a
    bounded-valid verdict survives sampling.
"""

import random

from hypothesis import HealthCheck, given, settings, strategies as st

from relprop.minic import Program, AssignStmt, Var, IntLit, Cmp, PImp, PAnd
from relprop.parser import parse_program
from relprop.pretty import pretty_print
from relprop.validate import validate
from relprop.selfcomp import transform
from relprop.vcgen import wp, vcs_for, compile_pred, compile_term
from relprop.logic import (
    IVar, ICon, IOp, IIte, IApp, FBool, FCmp, FNot, FAnd, FOr, FImp, FQuant,
    FApp,
)
from relprop.bounded import check_bounded
from relprop.dynamic import (
    InputVector, run_wrapper, evaluate_clause, wrapper_slots,
)

from strategies import (
    clause_program_strategy, program_strategy, term_strategy, cond_strategy,
)

SUITE = settings(
    max_examples=1000,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much,
                           HealthCheck.data_too_large],
)


@SUITE
@given(program_strategy())
def test_parser_roundtrip(program):
    assert validate(program) == []
    text = pretty_print(program)
    reparsed = parse_program(text, "<gen>")
    assert isinstance(reparsed, Program), [str(d) for d in reparsed]
    assert reparsed == program


@SUITE
@given(clause_program_strategy(), st.randoms(use_true_random=False))
def test_selfcomp_semantic_equivalence(case, rng):
    program, clause_name = case
    assert validate(program) == []
    t = transform(program)
    entry = t.entries[0]
    slots = wrapper_slots(entry.wrapper)
    vec = InputVector({s: rng.randint(-20, 20) for s in slots})
    report = run_wrapper(entry.wrapper, vec, t)
    assert report.outcome in ("pass", "fail")
    direct = evaluate_clause(entry.clause, entry.wrapper, t.source, vec)
    assert (report.outcome == "pass") == direct


def _independent_subst(form, var, replacement):
    """Textbook capture-free substitution, reimplemented for the test."""
    def in_term(t):
        if isinstance(t, IVar):
            return replacement if t.name == var else t
        if isinstance(t, ICon):
            return t
        if isinstance(t, IOp):
            return IOp(t.op, in_term(t.left), in_term(t.right))
        if isinstance(t, IIte):
            return IIte(walk(t.cond), in_term(t.then), in_term(t.other))
        if isinstance(t, IApp):
            return IApp(t.fn, tuple(in_term(a) for a in t.args))
        raise TypeError

    def walk(f):
        if isinstance(f, FBool):
            return f
        if isinstance(f, FCmp):
            return FCmp(f.op, in_term(f.left), in_term(f.right))
        if isinstance(f, FNot):
            return FNot(walk(f.body))
        if isinstance(f, FAnd):
            return FAnd(tuple(walk(i) for i in f.items))
        if isinstance(f, FOr):
            return FOr(tuple(walk(i) for i in f.items))
        if isinstance(f, FImp):
            return FImp(walk(f.hyp), walk(f.concl))
        if isinstance(f, FQuant):
            return f if var in f.vars else FQuant(f.kind, f.vars, walk(f.body))
        if isinstance(f, FApp):
            return FApp(f.pred, tuple(in_term(a) for a in f.args))
        raise TypeError

    return walk(form)


@SUITE
@given(cond_strategy(["a", "b", "c"], depth=2),
       term_strategy(["a", "b", "c"], depth=2),
       st.sampled_from(["a", "b", "c"]))
def test_wp_substitution_lemma(q, e, var):
    post = compile_pred(q, Program(()))
    got = wp(AssignStmt(Var(var), e), post)
    want = _independent_subst(post, var, compile_term(e))
    assert got == want


@SUITE
@given(clause_program_strategy(), st.randoms(use_true_random=False))
def test_bounded_oracle_interpreter_agreement(case, rng):
    program, _ = case
    t = transform(program)
    entry = t.entries[0]
    vc = [v for v in vcs_for(t, admitted=frozenset())
          if v.kind == "wrapper-assert"][0]
    bound = 3
    result = check_bounded(vc, bound)
    if result.status == "counterexample":
        values = {s: result.assignment.get(_slot_var(s), 0)
                  for s in wrapper_slots(entry.wrapper)}
        report = run_wrapper(entry.wrapper, InputVector(values), t)
        assert report.outcome == "fail"
    elif result.status == "valid":
        slots = wrapper_slots(entry.wrapper)
        for _ in range(10):
            vec = InputVector({s: rng.randint(-bound, bound) for s in slots})
            assert run_wrapper(entry.wrapper, vec, t).outcome == "pass"


def _slot_var(slot: str) -> str:
    # pointer cell slots are named *p in vectors and p$cell in formulas
    return f"{slot[1:]}$cell" if slot.startswith("*") else slot
