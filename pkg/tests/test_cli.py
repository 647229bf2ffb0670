import json
import subprocess
import sys

import pytest

from legendrian235.cli import main
from legendrian235.exact import parse
from legendrian235.legcurve import CurveSpec, classify
from legendrian235.liealg import SIGMA_SYM3, gl2_basis, heis_build, sym3_embed
from legendrian235.linalg import MatF
from legendrian235.models235 import model_invariants
from legendrian235.ode4 import ODE4, legendrian_invariants


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    assert doc.pop("schema") == "1"
    return doc


@pytest.mark.parametrize("argv, expected", [
    (["rolling", "--rho", "3/1"], {"kind": "RationalNormal"}),
    (["models", "--name", "N6"], {"fA": "s^4-60s^2+576", "I": "-1/7"}),
    (["equiv", "--a", "4/1", "--b", "1/4"], {"equivalent": True}),
])
def test_documented_examples(capsys, argv, expected):
    doc = run_json(capsys, *argv)
    for k, v in expected.items():
        assert doc[k] == v
    _, again, _ = run(capsys, *argv)
    assert json.loads(again) == dict(doc, schema="1")


def test_rolling_is_minimal(capsys):
    assert run_json(capsys, "rolling", "--rho", "3/1") == {"kind": "RationalNormal"}
    doc = run_json(capsys, "rolling", "--rho", "2", "--with-representative")
    assert doc["representative"]["name"] == "L"


def test_models_round_trip(capsys):
    doc = run_json(capsys, "models", "--name", "N7c")
    inv = model_invariants("N7c")
    assert MatF.from_rows([[parse(x) for x in row] for row in doc["A"]]) == inv.A
    assert parse(doc["I"]) == inv.I_cls
    assert parse(doc["fA"]) == inv.fA.as_ratfunc()


def test_models_with_param(capsys):
    doc = run_json(capsys, "models", "--name", "N7c", "--param", "1")
    assert doc["I"] == "-1/6"


def test_models_verify_all(capsys):
    doc = run_json(capsys, "models", "--verify-all")
    assert doc["ok"] and len(doc["results"]) == 4


def test_invariants(capsys):
    doc = run_json(capsys, "invariants", "--q0", "280000/(t^2-200)^4")
    assert doc["I_lit"] == "1/7" and doc["I_cls"] == "-1/7"
    assert parse(doc["R"]) == legendrian_invariants(parse("280000/(t^2-200)^4")).R
    short = run_json(capsys, "invariants", "--q0", "c2=-5,c0=4")
    assert short == doc
    zero = run_json(capsys, "invariants", "--q0", "0")
    assert zero["rational_normal"] and zero["I_lit"] == "undefined"


def test_classify_and_friends(capsys):
    spec = json.dumps({"A": [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -2]],
                       "z": [1, 1, 1, 1]})
    doc = run_json(capsys, "classify", "--spec", spec)
    ref = classify(CurveSpec(MatF.diag([2, 1, -1, -2]), [1, 1, 1, 1]))
    assert parse(doc["I"]) == ref.invariant_cls and doc["r_squared"] == "4"
    assert run_json(capsys, "aut-dim", "--spec", spec) == {"aut_dim": 2}
    sig = run_json(capsys, "sigma", "--spec", spec)
    assert sig["dim"] == 1
    assert sig["sigma"][1][2] == "-2"


def test_symbolic_spec(capsys, tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"A": [["r", 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, "-r"]],
                                "z": [1, 1, 1, 1]}))
    doc = run_json(capsys, "classify", "--spec", f"@{path}")
    assert parse(doc["I"]) == parse("(r^2+1)^2/((r^2-9)(9r^2-1))")
    assert run_json(capsys, "aut-dim", "--spec", str(path)) == {"aut_dim": 2}


def test_prolong_from_files(capsys, tmp_path):
    alg = tmp_path / "heis.json"
    alg.write_text(json.dumps(heis_build(SIGMA_SYM3).to_json()))
    g0 = tmp_path / "g0.json"
    g0.write_text(json.dumps([sym3_embed(X).to_json() for X in gl2_basis()]))
    doc = run_json(capsys, "prolong", "--algebra", str(alg), "--g0", str(g0), "--max", "5")
    assert doc["dims"] == [4, 1, 0] and doc["total"] == 14


def test_lf_check(capsys):
    doc = run_json(capsys, "lf-check", "--c2", "-5", "--c0", "4", "--t", "0.1,0.3,0.7")
    assert doc["ok"] and doc["max_residual"] < 1e-9
    code, _, err = run(capsys, "lf-check", "--c2", "0", "--c0", "1")
    assert code == 1 and json.loads(err)["error"] == "DomainError"


def test_transform_ode(capsys):
    doc = run_json(capsys, "transform-ode", "--ode", '{"p0": "1/(t^2+1)"}',
                   "--lam", "(2t+1)/(t+1)", "--mu", "1/(t+1)^3")
    assert doc["is_LF"] and doc["legendrian_class"]
    out = ODE4(**{k: parse(v) for k, v in doc["ode"].items()})
    assert out.is_LF
    pulled = run_json(capsys, "transform-ode", "--ode", "{}", "--lam", "t^3+t", "--mu", "1",
                      "--pullback")
    assert set(pulled["pullback"]) == {"p0", "p1", "p2", "p3"}


@pytest.mark.parametrize("argv, code", [
    (["classify", "--spec", "{bad"], 2),
    (["classify"], 2),
    (["rolling", "--rho", "x"], 2),
    (["invariants", "--q0", "t+"], 2),
    (["nonsense"], 2),
    (["rolling", "--rho", "0"], 1),
    (["classify", "--A", "[[1,0,0,0],[0,2,0,0],[0,0,3,0],[0,0,0,4]]", "--z", "[1,1,1,1]"], 1),
    (["models", "--name", "X9"], 1),
    (["transform-ode", "--ode", "{}", "--lam", "t^2", "--mu", "1"], 1),
])
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == ""
    if code == 1:
        assert json.loads(err)["schema"] == "1"


def test_pretty_output(capsys):
    code, out, _ = run(capsys, "models", "--name", "N6", "--pretty")
    assert code == 0
    assert "fA: s^4-60s^2+576" in out and "[  0 -18   0 -42]" in out


def test_help_documents_grammar(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "Expression grammar" in out


def test_verify_selected(capsys):
    code, out, err = run(capsys, "verify", "--suite", "3,8")
    assert code == 0
    doc = json.loads(out)
    assert [r["criterion"] for r in doc["results"]] == [3, 8]
    assert "[PASS]" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "legendrian235", "equiv", "--a", "4", "--b", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["equivalent"] is False
