from __future__ import annotations

import json

import pytest

from supercurve.cli import main, run
from supercurve.scenario import ScenarioError, parse_expression, parse_scenario

TRIVIAL = """
[base]
algebra = complex
[curve]
q = 1
[bundle "O"]
expect_h1 = {h1}
[run]
h1 O
residue-suite 5
"""


def _write(tmp_path, text, name="s.sc"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_parse_error_names_token_and_line(tmp_path, capsys):
    text = '[base]\nalgebra = complex\n[curve]\nq = 1\n[glue "0"]\ntheta1 = z^3*theta3\n'
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text, source="bad.sc")
    assert "theta3" in str(exc.value) and "bad.sc:6" in str(exc.value)
    assert main(["--scenario", str(_write(tmp_path, text))]) == 2
    assert "theta3" in capsys.readouterr().err


@pytest.mark.parametrize("bad", ["z +* 2", "foo*z", "z^(1/2)", "1.5*z"])
def test_bad_expressions_rejected(bad):
    sc = parse_scenario("[base]\nalgebra = complex\n[curve]\nq = 1\n")
    with pytest.raises(ValueError):
        parse_expression(bad, sc.curve.alg)
    text = f'[base]\nalgebra = complex\n[curve]\nq = 1\n[bundle "L"]\nxi 0 = {bad}\n'
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text, source="x.sc")
    assert "x.sc:6" in str(exc.value)


def test_unknown_command(tmp_path):
    text = TRIVIAL.format(h1="0|0") + "frobnicate O\n"
    with pytest.raises(ScenarioError):
        parse_scenario(text)


def test_trivial_h1_and_residue_suite(tmp_path, capsys):
    p = _write(tmp_path, TRIVIAL.format(h1="0|0"))
    assert main(["--scenario", str(p), "--seed", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    res = doc["reports"][0]["results"]
    assert res[0]["dims"] == {"even": 0, "odd": 0} and res[0]["status"] == "CONFIRMED"
    assert res[1]["totals"] == ["0"] * 5


def test_falsified_expectation_exits_one(tmp_path, capsys):
    p = _write(tmp_path, TRIVIAL.format(h1="1|0"))
    assert main(["--scenario", str(p)]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["summary"]["FALSIFIED"] == 1


def test_runtime_error_reported(tmp_path):
    text = """
[base]
algebra = grassmann(b)
[curve]
q = 1
[divisor "D"]
at 1 = z - 1
[run]
abel-check D
"""
    sc = parse_scenario(text)
    rep = run(sc)
    assert rep["results"][0]["status"] == "ERROR"
    assert "degree" in rep["results"][0]["error"]
    assert main(["--scenario", str(_write(tmp_path, text))]) == 2


def test_missing_file(tmp_path):
    assert main(["--scenario", str(tmp_path / "nope.sc")]) == 2


def test_json_output_is_deterministic(tmp_path, capsys):
    p = _write(tmp_path, TRIVIAL.format(h1="0|0"))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["--scenario", str(p), "--seed", "9", "--json", str(a)]) == 0
    assert main(["--scenario", str(p), "--seed", "9", "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    out = capsys.readouterr().out
    assert "CONFIRMED" in out and "FALSIFIED=0" in out
