import json
import subprocess
import sys

import jsonschema
import pytest

from sl2quant.cli import run_command
from sl2quant.report import load_schema

COMMANDS = [
    ["verify", "classical-identities"],
    ["derive", "qh2", "--max-degree", "4"],
    ["derive", "constraints"],
    ["verdict", "--casimir", "0"],
    ["verdict", "--casimir", "c"],
    ["check", "basis", "--r", "2", "--s", "7/3", "--levels", "12"],
    ["check", "recursion", "--s", "4", "--n-max", "40"],
    ["build", "trivial-quantization", "--pairs", "20"],
    ["check", "confluence", "--trials", "100"],
    ["check", "module", "--samples", "5"],
]


def _run(argv, capsys):
    code, report = run_command(argv)
    out = capsys.readouterr().out
    return code, report, out


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_json_report_valid(argv, capsys):
    code, report, out = _run(argv + ["--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    assert doc["verdict"] == "pass"


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_text_and_json_agree(argv, capsys):
    _, rep_text, text = _run(argv + ["--format", "text"], capsys)
    _, rep_json, _ = _run(argv + ["--format", "json"], capsys)
    assert [c.id for c in rep_text.checks] == [c.id for c in rep_json.checks]
    for c in rep_text.checks:
        assert c.id in text


def _strip_times(doc):
    for c in doc["checks"]:
        c.pop("elapsed_ms")
    return doc


def test_deterministic(capsys):
    argv = ["check", "recursion", "--s", "6", "--seed", "17", "--format", "json"]
    _, _, a = _run(argv, capsys)
    _, _, b = _run(argv, capsys)
    assert _strip_times(json.loads(a)) == _strip_times(json.loads(b))


def test_verdict_outcomes(capsys):
    _, rep, _ = _run(["verdict", "--casimir", "0"], capsys)
    assert rep.data["outcome"] == "consistent_trivial"
    assert rep.data["alpha"] == "0" and rep.data["gamma"] == "0"
    assert rep.data["conclusion"] == "Q(P_(2)(M)) = {0}"
    _, rep, _ = _run(["verdict", "--casimir", "c"], capsys)
    assert rep.data["outcome"] == "inconsistent"
    assert "no polynomial quantization" in rep.data["conclusion"]


def test_basis_example(capsys):
    _, rep, _ = _run(["check", "basis", "--r", "3", "--s", "7/3", "--levels", "16"], capsys)
    assert rep.data["rank"] == 16


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["verdict", "--casimir", "x"], "--casimir"),
        (["check", "basis", "--r", "3", "--levels", "5"], "--levels"),
        (["check", "recursion", "--s", "3"], "--s"),
        (["derive", "qh2", "--max-degree", "1"], "--max-degree"),
        (["check", "basis", "--r", "1", "--levels", "8", "--s", "1/0"], "--s"),
        (["nonsense"], "nonsense"),
    ],
)
def test_usage_errors(argv, flag, capsys):
    code, report = run_command(argv)
    err = capsys.readouterr().err
    assert code == 2 and report is None
    assert flag in err


def test_failing_check_exit_code(monkeypatch, capsys):
    from sl2quant import quantize

    def broken(cs, zero):
        v = real(cs, zero)
        v.verdict = "undetermined"
        return v

    real = quantize.case_analysis
    monkeypatch.setattr(quantize, "case_analysis", broken)
    code, report = run_command(["verdict", "--casimir", "c"])
    capsys.readouterr()
    assert code == 1 and report.verdict == "fail"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "sl2quant", "derive", "constraints"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "alpha*(alpha^2*(C + 9) - c) = 0" in out.stdout
