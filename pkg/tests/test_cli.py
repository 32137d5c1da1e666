import json
import subprocess
import sys

import pytest

from bifurcus.cli import main


def run(*args):
    return subprocess.run([sys.executable, "-m", "bifurcus", *args], capture_output=True, text=True)


def test_example1_check(tmp_path, capsys):
    out = tmp_path / "ex1.svg"
    assert main(["--system", "lambda*x - x^3", "--param", "lambda", "--out", str(out), "--check"]) == 0
    stdout = capsys.readouterr().out
    assert "pitchfork at (0, 0)" in stdout
    assert "max residual" in stdout
    assert out.read_text().startswith("<?xml")


def test_not_affine_exits_2(capsys):
    assert main(["--system", "lambda^2*x", "--param", "lambda"]) == 2
    assert "ParameterNotAffine" in capsys.readouterr().err


def test_bad_syntax_exits_2(capsys):
    assert main(["--system", "2x + lambda"]) == 2


def test_bad_range_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["--system", "lambda - x", "--x-range", "3:1"])
    assert info.value.code == 2


def test_example3_polar(tmp_path, capsys):
    out = tmp_path / "ex3.svg"
    code = main(["--system", "lambda - lambda*r^2 + r^4", "--state", "r", "--param", "lambda",
                 "--multiply-state", "--domain-min", "0", "--out", str(out)])
    assert code == 0
    assert out.exists()


def test_format_from_suffix(tmp_path):
    for suffix in ("csv", "json"):
        out = tmp_path / f"d.{suffix}"
        assert main(["--system", "lambda*x - x^3", "--out", str(out)]) == 0
        text = out.read_text()
        if suffix == "json":
            assert json.loads(text)["schema_version"] == 1
        else:
            assert text.startswith("branch_id,")


def test_check_failure_exits_3_and_names_column(tmp_path, capsys):
    code = main(["--system", "c + (1+2*c)*x - x^3", "--param", "c", "--check", "--tol", "1e-15",
                 "--grid", "50"])
    assert code == 3
    err = capsys.readouterr().err
    assert "c=" in err and "check failed" in err


def test_trace_and_report(tmp_path, capsys):
    rep = tmp_path / "r.json"
    assert main(["--system", "c + (1+2*c)*x - x^3", "--param", "c", "--trace", "--check",
                 "--grid", "100", "--report", str(rep)]) == 0
    out = capsys.readouterr().out
    assert "horizontal asymptote x=−0.5" in out
    assert json.loads(rep.read_text())["kind"] == "comparison_report"


def test_runs_are_byte_identical(tmp_path):
    args = ["--system", "c + (1+0.5*c)*x - x^3", "--param", "c"]
    for fmt in ("svg", "csv", "json"):
        a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        assert run(*args, "--out", str(a)).returncode == 0
        assert run(*args, "--out", str(b)).returncode == 0
        assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    res = run("--system", "lambda*x - x^3", "--param", "lambda")
    assert res.returncode == 0
    assert "1 bifurcation point" in res.stdout
