import sys
from pathlib import Path

import pytest

from relprop.parser import parse_program
from relprop.minic import Program

CORPUS = Path(__file__).resolve().parent.parent / "src" / "relprop" / "corpus"


def corpus_path(name: str) -> Path:
    return CORPUS / name


def load(name: str) -> Program:
    text = (CORPUS / name).read_text(encoding="utf-8")
    result = parse_program(text, name)
    assert isinstance(result, Program), [str(d) for d in result]
    return result


@pytest.fixture
def fig2() -> Program:
    return load("fig2.mc")


@pytest.fixture
def fig5() -> Program:
    return load("fig5.mc")


@pytest.fixture
def fig6() -> Program:
    return load("fig6.mc")


@pytest.fixture
def crypt() -> Program:
    return load("crypt.mc")


@pytest.fixture
def fact() -> Program:
    return load("fact.mc")


def comparator_paths() -> list[Path]:
    return sorted((CORPUS / "comparators").glob("*.mc"))
