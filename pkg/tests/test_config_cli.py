import csv
import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracbvp import cli
from fracbvp.cli import EXIT_CONFIG, EXIT_HYPOTHESIS, EXIT_NOT_CERTIFIED, EXIT_NOT_CONVERGED, EXIT_OK
from fracbvp.config import ConfigError, RunConfig

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def load(name):
    return json.loads((CONFIGS / name).read_text())


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.json")))
def test_shipped_configs_load(name):
    RunConfig.load(CONFIGS / name)


def test_round_trip():
    cfg = RunConfig.load(CONFIGS / "demo.json")
    again = RunConfig.loads(cfg.dumps())
    assert again.to_dict() == cfg.to_dict()


@settings(max_examples=30, deadline=None)
@given(st.floats(2.1, 3.0), st.floats(0.1, 1.0), st.floats(0.05, 1.0), st.floats(1.1, 4.0),
       st.integers(16, 64), st.floats(1.0, 3.0), st.floats(1e-3, 1.0))
def test_round_trip_property(alpha, beta, gamma_ord, p, N, grading, delta):
    doc = load("demo.json")
    doc["problem"].update(alpha=alpha, beta=beta, gamma=gamma_ord, p=p)
    doc["grid"].update(N=N, grading=grading)
    doc["delta"] = delta
    cfg = RunConfig.from_dict(doc)
    assert RunConfig.loads(cfg.dumps()).to_dict() == cfg.to_dict()


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(extra=1),
    lambda d: d["problem"].update(colour="red"),
    lambda d: d["grid"].update(N=4),
    lambda d: d["problem"].update(alpha=3.5),
    lambda d: d["problem"].update(xis=[0.5, 0.1]),
    lambda d: d["problem"]["a"].update(kind="nope"),
    lambda d: d["problem"].update(B_delta={"kind": "quadratic"}),
    lambda d: d["solver"].update(omega=2.0),
    lambda d: d.update(delta=-0.1),
    lambda d: d["sampler"].update(samples=1) if "sampler" in d else d.update(sampler={"samples": 1}),
])
def test_invalid_configs(mutate):
    doc = load("demo.json")
    mutate(doc)
    with pytest.raises(ConfigError):
        RunConfig.from_dict(doc)


def test_invalid_json():
    with pytest.raises(ConfigError):
        RunConfig.loads("{not json")


@pytest.mark.parametrize("hyp, cert, conv, code", [
    (False, None, None, EXIT_HYPOTHESIS),
    (True, True, None, EXIT_OK),
    (True, False, None, EXIT_NOT_CERTIFIED),
    (True, None, False, EXIT_NOT_CONVERGED),
    (True, None, True, EXIT_OK),
])
def test_exit_code_table(hyp, cert, conv, code):
    assert cli.exit_code(hyp, cert, conv) == code


def test_cli_example41(capsys):
    assert cli.main(["example41"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "1.1283791671" in out and "1.6925687506" in out and "1/3.922" in out


def test_cli_check_example41_certified(capsys):
    assert cli.main(["check", "--config", str(CONFIGS / "example41.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "CERTIFIED" in out and "1.128" in out


def test_cli_check_h1_violation(capsys):
    assert cli.main(["check", "--config", str(CONFIGS / "h1_violation.json")]) == EXIT_HYPOTHESIS
    assert "= 2" in capsys.readouterr().out


def test_cli_check_divergent(capsys):
    code = cli.main(["check", "--config", str(CONFIGS / "divergent_J.json")])
    out = capsys.readouterr().out
    assert code == EXIT_NOT_CERTIFIED
    assert "UNRELIABLE" in out and "tail_flag" in out


def test_cli_check_needs_delta(tmp_path, capsys):
    doc = load("demo.json")
    doc.pop("delta")
    assert cli.main(["check", "--config", write(tmp_path, doc)]) == EXIT_CONFIG


def test_cli_bad_config(tmp_path, capsys):
    doc = load("demo.json")
    doc["grid"]["N"] = 3
    assert cli.main(["check", "--config", write(tmp_path, doc)]) == EXIT_CONFIG
    assert "error" in capsys.readouterr().err
    assert cli.main(["check", "--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG


def test_cli_solve_zero_f(tmp_path, capsys):
    out_csv = tmp_path / "zero.csv"
    assert cli.main(["solve", "--config", str(CONFIGS / "zero_f.json"), "--csv", str(out_csv)]) == EXIT_OK
    assert "iterations = 1" in capsys.readouterr().out
    rows = list(csv.reader(out_csv.open()))
    assert tuple(rows[0]) == cli.CSV_HEADER
    data = np.array(rows[1:], dtype=float)
    assert data.shape == (65, 5) and np.all(data[:, 1:] == 0.0)


def test_cli_solve_demo(tmp_path, capsys):
    out_csv = tmp_path / "demo.csv"
    assert cli.main(["solve", "--config", str(CONFIGS / "demo.json"), "--csv", str(out_csv)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "converged = true" in out and ": hold" in out
    data = np.loadtxt(out_csv, delimiter=",", skiprows=1)
    assert np.all(data[:, 3:] >= 0.0) and np.all(data[:, 3:] <= 0.1)


def test_cli_solve_oracle(tmp_path, capsys):
    code = cli.main(["solve", "--config", str(CONFIGS / "affine_oracle.json"),
                     "--csv", str(tmp_path / "o.csv"), "--oracle"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    diff = float(out.split("||difference|| = ")[1].split()[0])
    assert diff <= 1e-8


def test_cli_solve_oracle_unsupported(tmp_path, capsys):
    code = cli.main(["solve", "--config", str(CONFIGS / "demo.json"),
                     "--csv", str(tmp_path / "o.csv"), "--oracle"])
    assert code == EXIT_CONFIG
    assert "oracle unavailable" in capsys.readouterr().out


def test_cli_solve_not_converged(tmp_path, capsys):
    doc = load("demo.json")
    doc["solver"]["max_iter"] = 2
    out_csv = tmp_path / "partial.csv"
    assert cli.main(["solve", "--config", write(tmp_path, doc), "--csv", str(out_csv)]) == EXIT_NOT_CONVERGED
    assert "converged = false" in capsys.readouterr().out
    assert out_csv.exists()


def test_cli_identities_coarse(capsys):
    assert cli.main(["identities", "--config", str(CONFIGS / "coarse_identities.json")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out and "checks passed" in out


def test_cli_report_path(tmp_path, capsys):
    doc = load("example41.json")
    report = tmp_path / "report.txt"
    doc["outputs"] = {"csv_path": None, "report_path": str(report)}
    assert cli.main(["check", "--config", write(tmp_path, doc)]) == EXIT_OK
    assert report.read_text() == capsys.readouterr().out
