"""The command-line driver: exit codes and artifacts."""

import json
from pathlib import Path

import pytest

from relprop.cli import main
from relprop.parser import parse_program
from relprop.minic import Program

from conftest import corpus_path


def run(args) -> int:
    return main([str(a) for a in args])


def test_transform_writes_output(tmp_path):
    code = run(["transform", corpus_path("fig2.mc"), "-o", tmp_path])
    assert code == 0
    out = tmp_path / "fig2.transformed.mc"
    assert out.exists()
    text = out.read_text()
    assert "relational_wrapper_1" in text
    p = parse_program(text, "t")
    assert isinstance(p, Program)


def test_transform_missing_input_exits_2(tmp_path, capsys):
    code = run(["transform", tmp_path / "nope.mc", "-o", tmp_path])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_transform_invalid_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.mc"
    bad.write_text("int f( {")
    assert run(["transform", bad, "-o", tmp_path]) == 2
    err = capsys.readouterr().err
    assert "bad.mc" in err


def test_transform_provenance_sidecar(tmp_path):
    code = run(["transform", corpus_path("fig5.mc"), "-o", tmp_path,
                "--emit-provenance"])
    assert code == 0
    side = json.loads((tmp_path / "fig5.provenance.json").read_text())
    assert side["relational_wrapper_1"] == "R1"
    assert side["y_id1"] == "R1"


def test_prove_fig2_exits_0_and_emits_smt(tmp_path, capsys):
    code = run(["prove", corpus_path("fig2.mc"), "-o", tmp_path, "--bound", 8])
    assert code == 0
    out = capsys.readouterr().out
    assert "Valid" in out and "R1" in out
    smt = tmp_path / "smt" / "relational_wrapper_1__Rpp.smt2"
    assert smt.exists()
    index = json.loads((tmp_path / "vc_index.json").read_text())
    wrapper = index["vcs"]["relational_wrapper_1__Rpp"]
    assert wrapper["status"] == "valid"


def test_prove_counterexample_exits_1(tmp_path, capsys):
    code = run(["prove",
                corpus_path("comparators/cmp_sign_bad.mc"), "-o", tmp_path])
    assert code == 1
    assert "Counterexample" in capsys.readouterr().out


def test_prove_strict_flags_unknowns(tmp_path):
    # the factorial unfolding at inlining depth 1 keeps residual tables on
    # one side only, so the proof stays out of bounded reach
    src = tmp_path / "u.mc"
    src.write_text("""
/*@ assigns \\result \\from n;
    relational R:
      \\forall int n;
      \\callset(\\call(f, n + 1, id1), \\call(f, n, id2))
      ==> n >= 0 ==> \\callresult(id1) == \\callresult(id2) + 3;
*/
int f(int n) {
  int r = 0;
  if (n <= 0) {
    r = 0;
  } else {
    int t = 0;
    t = f(n - 1);
    r = t + 1;
  }
  return r;
}
""")
    assert run(["prove", src, "-o", tmp_path, "--strict"]) == 3
    assert run(["prove", src, "-o", tmp_path]) == 0


def test_prove_json_output(tmp_path, capsys):
    code = run(["prove", corpus_path("fig5.mc"), "-o", tmp_path, "--json"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["vcs"]["relational_wrapper_1__Rpp"]["status"] == "valid"


def test_assume_lemmas_adds_hypothesis(tmp_path, capsys):
    code = run(["prove", corpus_path("crypt.mc"), "-o", tmp_path,
                "--assume-lemmas", "--json"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    client = data["vcs"]["run__round_trip"]
    assert "Relational_lemma_1" in client["hypotheses"]
    assert client["status"] == "valid"


def test_test_finds_counterexample_and_check_confirms(tmp_path, capsys):
    cmp_bad = corpus_path("comparators/cmp_sign_bad.mc")
    code = run(["test", cmp_bad, "-o", tmp_path, "--budget", 4, "--seed", 42])
    assert code == 1
    cex = tmp_path / "cmp_sign_bad.P1.cex.json"
    assert cex.exists()
    data = json.loads(cex.read_text())
    assert data["property"] == "P1"

    code = run(["check", cmp_bad, cex])
    assert code == 1  # violation confirmed
    out = capsys.readouterr().out
    assert "fail" in out


def test_test_seed_reproducible(tmp_path):
    cmp_bad = corpus_path("comparators/cmp_sign_bad.mc")
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    assert run(["test", cmp_bad, "-o", out1, "--budget", 4, "--seed", 7]) == 1
    assert run(["test", cmp_bad, "-o", out2, "--budget", 4, "--seed", 7]) == 1
    a = (out1 / "cmp_sign_bad.P1.cex.json").read_text()
    b = (out2 / "cmp_sign_bad.P1.cex.json").read_text()
    assert a == b


def test_skip_proved_after_prove(tmp_path, capsys):
    fig2 = corpus_path("fig2.mc")
    assert run(["prove", fig2, "-o", tmp_path]) == 0
    code = run(["test", fig2, "-o", tmp_path, "--skip-proved", "--budget", 2])
    assert code == 0
    assert "skipped" in capsys.readouterr().out


def test_check_on_passing_implementation(tmp_path):
    # a vector that satisfies the fixed comparator: replay passes
    vec = {"property": "P1", "assignment": {"x1": 1, "x2": 2}}
    path = tmp_path / "v.cex.json"
    path.write_text(json.dumps(vec))
    code = run(["check", corpus_path("comparators/cmp_sign_ok.mc"), path])
    assert code == 0


def test_check_malformed_json_exits_2(tmp_path, capsys):
    path = tmp_path / "broken.cex.json"
    path.write_text("{ not json")
    code = run(["check", corpus_path("fig2.mc"), path])
    assert code == 2
    assert "malformed" in capsys.readouterr().err


def test_check_empty_vector_file(tmp_path):
    path = tmp_path / "empty.cex.json"
    path.write_text("[]")
    assert run(["check", corpus_path("fig2.mc"), path]) == 0
