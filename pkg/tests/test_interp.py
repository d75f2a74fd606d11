"""The MiniC interpreter."""

import pytest

from relprop.minic import Program, IntLit, Var, Bin, AssignStmt, ReturnStmt, FunctionDef
from relprop.parser import parse_program
from relprop.interp import (
    interpret, init_state, State, Interp, Fuel,
    DivisionByZero, Overflow, FuelExhausted, AssertViolated,
)


def test_interpret_h_adds_ten(fig5):
    h = fig5.function("h")
    state = init_state(fig5)
    state.globals["y"] = 5
    value, state = interpret(h, [], state, program=fig5)
    assert value is None
    assert state.globals["y"] == 15


def test_interpret_k_bumps_cell(fig6):
    k = fig6.function("k")
    state = init_state(fig6)
    cell = state.alloc(3)
    interpret(k, [cell], state, program=fig6)
    assert state.heap[cell] == 4


def test_interpret_max(fig2):
    v, _ = interpret(fig2.function("max"), [3, 5], init_state(fig2),
                     program=fig2)
    assert v == 5
    v, _ = interpret(fig2.function("max"), [9, -2], init_state(fig2),
                     program=fig2)
    assert v == 9


def test_division_by_zero_raises():
    src = "int f(int x) { return 1 / x; }"
    p = parse_program(src)
    with pytest.raises(DivisionByZero):
        interpret(p.function("f"), [0], init_state(p), program=p)
    v, _ = interpret(p.function("f"), [-2], init_state(p), program=p)
    assert v == 0  # Euclidean: 1 = (-2) * 0 + 1


def test_euclidean_division_in_programs():
    src = "int f(int a, int b) { return a / b; }"
    p = parse_program(src)
    f = p.function("f")
    assert interpret(f, [-7, 2], init_state(p), program=p)[0] == -4
    assert interpret(f, [7, -2], init_state(p), program=p)[0] == -3


def test_overflow_is_an_error_not_wraparound():
    src = "int f(int x) { int y = x * x; return y; }"
    p = parse_program(src)
    big = 2 ** 62
    with pytest.raises(Overflow):
        interpret(p.function("f"), [big], init_state(p), program=p)


def test_fuel_exhaustion():
    src = """
    int f() {
      int i = 0;
      /*@ loop invariant i >= 0; */
      while (i >= 0) {
        i = i + 1;
      }
      return i;
    }
    """
    p = parse_program(src)
    with pytest.raises(FuelExhausted):
        interpret(p.function("f"), [], init_state(p), fuel=1000, program=p)


def test_assert_violation_carries_label():
    src = """
    int f(int x) {
      /*@ assert boom: x > 0; */
      return x;
    }
    """
    p = parse_program(src)
    with pytest.raises(AssertViolated) as exc:
        interpret(p.function("f"), [0], init_state(p), program=p)
    assert exc.value.label == "boom"
    v, _ = interpret(p.function("f"), [3], init_state(p), program=p)
    assert v == 3


def test_calls_and_locals(crypt):
    run = crypt.function("run")
    v, _ = interpret(run, [41, 7], init_state(crypt), program=crypt)
    assert v == 41


def test_interpreter_deterministic(fig5):
    h = fig5.function("h")
    s1 = init_state(fig5)
    s1.globals["y"] = 3
    s2 = init_state(fig5)
    s2.globals["y"] = 3
    interpret(h, [], s1, program=fig5)
    interpret(h, [], s2, program=fig5)
    assert s1.globals == s2.globals


def test_uninitialized_locals_are_zero():
    src = "int f() { int x; return x; }"
    p = parse_program(src)
    assert interpret(p.function("f"), [], init_state(p), program=p)[0] == 0
