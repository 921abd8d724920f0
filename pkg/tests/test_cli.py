import csv
import pathlib
import subprocess
import sys

import numpy as np
import pytest

from costly_attention import cli
from costly_attention.config import load_scenario
from costly_attention.errors import NumericError

ROOT = pathlib.Path(__file__).resolve().parent.parent / "scenarios"
TRI = str(ROOT / "triangular.yaml")


def read_table(path):
    lines = pathlib.Path(path).read_text().splitlines()
    rows = list(csv.reader(lines[1:]))
    return lines[0], rows[0], rows[1:]


def column(rows, header, name):
    i = header.index(name)
    return np.array([float(r[i]) for r in rows])


def test_curves_two_thirds(tmp_path):
    assert cli.main(["curves", TRI, "--theta", str(2 / 3), "--points", "121", "--out", str(tmp_path)]) == 0
    first, header, rows = read_table(tmp_path / "curves_net.csv")
    c, net = column(rows, header, "c"), column(rows, header, "net")
    assert net[0] == 0.0
    assert np.all(np.abs(net[c >= 5 / 6 - 1e-12]) <= 1e-15)
    assert c[np.argmax(net)] == pytest.approx(0.5)
    up, down = np.diff(net[c <= 0.5]), np.diff(net[(c >= 0.5) & (c <= 5 / 6)])
    assert np.all(up > 0) and np.all(down < 0)
    _, header, rows = read_table(tmp_path / "curves_payoff.csv")
    assert header == ["theta", "payoff", "dW"]


def test_solve_below_prior_mean(tmp_path, capsys):
    assert cli.main(["solve", str(ROOT / "point_low.yaml"), "--out", str(tmp_path)]) == 0
    _, header, rows = read_table(tmp_path / "solve.csv")
    assert float(rows[0][header.index("theta")]) == 0.0
    assert float(rows[0][header.index("payoff")]) == 1.0
    assert "theta*=0 payoff=1" in capsys.readouterr().out


def test_solve_point_above_prior_mean(tmp_path):
    assert cli.main(["solve", str(ROOT / "point_high.yaml"), "--out", str(tmp_path)]) == 0
    _, header, rows = read_table(tmp_path / "solve.csv")
    assert float(rows[0][header.index("theta")]) == pytest.approx(0.6 - np.sqrt(0.12), abs=1e-12)


def test_validate_nonconvex_policy(tmp_path, capsys):
    code = cli.main(["validate", TRI, "--policy", str(ROOT / "policies" / "nonconvex.csv"), "--out", str(tmp_path)])
    assert code == 2
    out = capsys.readouterr().out
    assert "policy fails" in out and "x=0.7" in out


def test_validate_good_policy(tmp_path, capsys):
    assert cli.main(["validate", TRI, "--policy", str(ROOT / "policies" / "censor_040.yaml")]) == 0
    assert "feasible and convex" in capsys.readouterr().out


def test_bad_scenario_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("population:\n  lambda: 0.02\n  cutoff: {family: triangular, peak: 2}\n")
    assert cli.main(["solve", str(bad), "--out", str(tmp_path)]) == 2
    assert f"{bad}:3" in capsys.readouterr().err


def test_numeric_failure_exits_three(tmp_path, monkeypatch, capsys):
    def boom(scn, policy):
        raise NumericError("quadrature did not converge", trace=["panel [0.4, 0.5]", "depth 60"])

    monkeypatch.setattr(cli, "payoff_report", boom)
    code = cli.main(["evaluate", TRI, "--policy", str(ROOT / "policies" / "censor_040.yaml"), "--out", str(tmp_path)])
    assert code == 3
    err = capsys.readouterr().err
    assert "quadrature did not converge" in err and "depth 60" in err


def test_precondition_failure_exits_two(tmp_path):
    # the zero-cost optimum is not interior for a uniform cutoff density
    flat = tmp_path / "flat.yaml"
    flat.write_text("population: {lambda: 0.0, cutoff: {family: uniform}}\n")
    assert cli.main(["statics", str(flat), "--out", str(tmp_path)]) == 2


def test_headers_name_units_and_scenario(tmp_path):
    digest = load_scenario(TRI).digest
    pol = str(ROOT / "policies" / "censor_040.yaml")
    cli.main(["evaluate", TRI, "--policy", pol, "--out", str(tmp_path)])
    cli.main(["benchmark", TRI, "--zeta", "0.6", "--out", str(tmp_path)])
    cli.main(["mechanism", TRI, "--menu", str(ROOT / "policies" / "menu.yaml"), "--cutoffs", "51", "--out", str(tmp_path)])
    for name in ("evaluate.csv", "benchmark.csv", "envelope.csv", "mechanism_violations.csv"):
        first = (tmp_path / name).read_text().splitlines()[0]
        assert first.startswith(f"# scenario {digest}; units: ")


def test_reruns_are_byte_identical(tmp_path):
    pol = str(ROOT / "policies" / "censor_040.yaml")
    runs = [
        ["evaluate", str(ROOT / "mixed.yaml"), "--policy", pol],
        ["curves", TRI, "--theta", "0.3", "--points", "41"],
        ["benchmark", TRI, "--zeta", "0.6"],
        ["improve", str(ROOT / "media.yaml"), "--policy", pol],
        ["oracle", TRI, "--grid", "11", "--samples", "5", "--sim", "5000", "--seed", "3"],
    ]
    for args in runs:
        a, b = tmp_path / "a", tmp_path / "b"
        assert cli.main(args + ["--out", str(a)]) == 0
        assert cli.main(args + ["--out", str(b)]) == 0
        for f in a.iterdir():
            assert f.read_bytes() == (b / f.name).read_bytes(), (args[0], f.name)


def test_evaluate_mixed_population(tmp_path):
    cli.main(["evaluate", str(ROOT / "mixed.yaml"), "--policy", str(ROOT / "policies" / "censor_040.yaml"),
              "--out", str(tmp_path)])
    _, header, rows = read_table(tmp_path / "evaluate.csv")
    assert [r[0] for r in rows] == ["0", "0.02", "all"]
    red, w = column(rows[:2], header, "reduced"), column(rows[:2], header, "weight")
    assert float(rows[2][header.index("reduced")]) == pytest.approx(red @ w, abs=1e-14)


def test_benchmark_outputs(tmp_path):
    cli.main(["benchmark", TRI, "--zeta", "0.6", "--kappa", "0.02", "--out", str(tmp_path)])
    _, header, rows = read_table(tmp_path / "benchmark.csv")
    theta = float(rows[0][header.index("theta")])
    assert theta == pytest.approx(0.6 - np.sqrt(0.12), abs=1e-12)
    assert float(rows[0][header.index("payoff")]) == pytest.approx(1 - theta, abs=1e-12)


def test_benchmark_needs_zeta(tmp_path):
    assert cli.main(["benchmark", TRI, "--out", str(tmp_path)]) == 2


def test_mechanism_menu_is_clean(tmp_path):
    args = ["mechanism", TRI, "--menu", str(ROOT / "policies" / "menu.yaml"), "--cutoffs", "101",
            "--lambdas", "0", "0.02", "0.05", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    _, header, rows = read_table(tmp_path / "mechanism_violations.csv")
    assert rows == []


def test_improve_reports_weak_gain(tmp_path):
    assert cli.main(["improve", str(ROOT / "media.yaml"), "--policy", str(ROOT / "policies" / "censor_040.yaml"),
                     "--out", str(tmp_path)]) == 0
    _, header, rows = read_table(tmp_path / "improve.csv")
    r = rows[0]
    assert float(r[header.index("payoff_out")]) >= float(r[header.index("payoff_in")]) - 1e-8


def test_oracle_table(tmp_path):
    assert cli.main(["oracle", TRI, "--grid", "11", "--samples", "8", "--seed", "1", "--out", str(tmp_path)]) == 0
    _, header, rows = read_table(tmp_path / "oracle.csv")
    ids = [r[0] for r in rows]
    assert ids[:3] == ["optimum", "full", "null"]
    assert len(ids) == 3 + 12 + 8
    red = dict(zip(ids, column(rows, header, "reduced")))
    assert max(v for k, v in red.items() if k != "optimum") <= red["optimum"] + 1e-6


def test_out_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert cli.main(["benchmark", TRI, "--zeta", "0.6"]) == 0
    assert (tmp_path / "env" / "benchmark.csv").exists()


def test_module_entry_point_help():
    out = subprocess.run([sys.executable, "-m", "costly_attention", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for name in ("validate", "solve", "evaluate", "curves", "statics", "benchmark", "mechanism", "improve", "oracle"):
        assert name in out.stdout
