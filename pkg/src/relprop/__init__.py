"""relprop: relational property verification for MiniC via self-composition.

The pipeline: parse annotated MiniC, validate it, transform each relational
clause into a self-composed wrapper function plus an axiomatic layer
(predicate, lemma, ensures links), then either prove the wrapper assertion
through weakest-precondition verification conditions (SMT-LIB output and a
built-in bounded checker) or attack it dynamically (interpretation, random
and exhaustive counterexample search, runtime re-checking).
"""

from .minic import Program, Diagnostic, Span
from .parser import parse_program
from .pretty import pretty_print
from .validate import validate, footprint_of, MemFootprint
from .selfcomp import transform, TransformedProgram
from .vcgen import vcs_for, VerificationCondition
from .smtlib import emit_smtlib
from .bounded import check_bounded, BoundedResult
from .interp import interpret, State
from .dynamic import run_wrapper, find_counterexample, runtime_check, InputVector

__all__ = [
    "Program", "Diagnostic", "Span",
    "parse_program", "pretty_print",
    "validate", "footprint_of", "MemFootprint",
    "transform", "TransformedProgram",
    "vcs_for", "VerificationCondition",
    "emit_smtlib",
    "check_bounded", "BoundedResult",
    "interpret", "State",
    "run_wrapper", "find_counterexample", "runtime_check", "InputVector",
]

__version__ = "0.1.0"
