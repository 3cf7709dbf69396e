import json
import os

import pytest

from kacgap.cli import (
    read_eigen_csv,
    read_entropy_csv,
    read_histogram_csv,
    run,
)


def test_usage_error_exit_code():
    assert run([]) == 2
    assert run(["no-such-command"]) == 2
    assert run(["simulate", "--alpha", "3"]) == 2


def test_eigen_example_values(tmp_path, capsys):
    out = tmp_path / "eigen.csv"
    assert run(["eigen", "--ell", "0", "--n-max", "3", "--out", str(out)]) == 0
    rows = read_eigen_csv(str(out))
    assert [r["n"] for r in rows] == [0, 1, 2, 3]
    want = [1.0, -0.5, 0.0, 0.25]
    for row, w in zip(rows, want):
        assert abs(row["kappa"] - w) <= 1e-12
        assert row["ell"] == 0


def test_eigen_csv_header_and_inf(tmp_path):
    out = tmp_path / "eigen.csv"
    run(["eigen", "--ell", "0", "--n-max", "1", "--out", str(out)])
    text = out.read_text()
    assert text.splitlines()[0] == "n,ell,kappa,kappa_hat,kappa_tilde"
    rows = read_eigen_csv(str(out))
    assert rows[0]["kappa_tilde"] == float("inf")


def test_eigen_multi_ell(tmp_path):
    out = tmp_path / "eigen.csv"
    run(["eigen", "--ell-max", "2", "--n-max", "4", "--out", str(out)])
    rows = read_eigen_csv(str(out))
    assert len(rows) == 15
    assert {r["ell"] for r in rows} == {0, 1, 2}


def test_eigen_json(capsys):
    assert run(["eigen", "--ell", "2", "--n-max", "1", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["kappa"] == pytest.approx(0.25)
    assert payload[1]["kappa"] == pytest.approx(-0.375)


def test_gap_json(capsys):
    assert run(["gap"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["gap"] >= 0.0198
    assert payload["mu3"] <= 0.73016 + 1e-6
    assert len(payload["sectors"]) == 9


def test_bounds_antisym(capsys):
    assert run(["bounds", "--sector", "antisym"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["lambda_bound"] == pytest.approx(0.7287658, abs=1e-6)


def test_bounds_small_single(capsys):
    assert run(["bounds", "--sector", "small", "--ell", "0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["evidence"]["break"] == 7
    assert payload["lambda_bound"] <= 0.694


def test_bounds_large(capsys):
    assert run(["bounds", "--sector", "large", "--ell", "70"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["evidence"]["sup_a_at"] == 66


def test_json_numbers_have_12_significant_digits(capsys):
    run(["bounds", "--sector", "antisym"])
    text = capsys.readouterr().out
    payload = json.loads(text)
    # 0.728765877365 carries exactly 12 significant digits
    assert str(payload["lambda_bound"]) == "0.728765877365"


def test_simulate_writes_parseable_artifacts(tmp_path):
    out = tmp_path / "sim"
    code = run(
        [
            "simulate",
            "--alpha",
            "2",
            "--replicas",
            "400",
            "--seed",
            "9",
            "--frames",
            "0,1,2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    ent = read_entropy_csv(str(out / "entropy.csv"))
    assert [e["time"] for e in ent] == [0.0, 1.0, 2.0]
    assert set(ent[0]) == {"time", "H_sampled", "H_implied1", "H_implied2"}
    lefts, rights, dens = read_histogram_csv(str(out / "hist_t1.csv"))
    assert len(dens) == 100
    width = rights[0] - lefts[0]
    assert sum(d * width for d in dens) == pytest.approx(1.0, abs=1e-9)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["replicas"] == 400
    assert summary["backend"] in ("python", "compiled")


def test_simulate_stdout_summary(capsys):
    assert run(["simulate", "--replicas", "200", "--frames", "0,2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["frames"] == [0.0, 2.0]
    assert len(payload["entropy"]["sampled"]) == 2


def test_simulate_bad_frames():
    assert run(["simulate", "--frames", "abc"]) == 2


def test_verify_quick_exits_zero(capsys):
    assert run(["verify", "--quick"]) == 0
    out = capsys.readouterr().out
    assert "overall verdict: pass" in out


def test_verify_json(tmp_path):
    out = tmp_path / "verify.json"
    assert run(["verify", "--quick", "--json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["verdict"] == "pass"
    names = [r["name"] for r in payload["rows"]]
    assert "gap-assembly" in names
