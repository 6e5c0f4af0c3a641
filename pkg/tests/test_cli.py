"""Command-line behavior: determinism, schemas, exit codes."""

import csv
import json
import math

import numpy as np
import pytest

from betadet.cli import main
from betadet.entropy import entropy_J


def run_to(tmp_path, name, argv):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, out


def body_rows(path):
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.reader(lines))


def test_sample_rerun_bit_identical(tmp_path):
    argv = ["sample", "--ensemble", "gram", "--beta", "1", "--n", "100",
            "--paths", "10", "--seed", "7"]
    code_a, a = run_to(tmp_path, "a.csv", argv)
    code_b, b = run_to(tmp_path, "b.csv", argv)
    assert code_a == 0 and code_b == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_header_records_seed(tmp_path):
    code, out = run_to(tmp_path, "s.csv", ["sample", "--seed", "41", "--paths", "1"])
    assert code == 0
    head = out.read_text().splitlines()[:2]
    assert head[0].startswith("# betadet sample schema v1")
    assert "seed=41" in head[1]


def test_sample_worker_count_never_changes_results(tmp_path, monkeypatch):
    argv = ["sample", "--ensemble", "laguerre", "--n", "80", "--paths", "9",
            "--seed", "11"]
    monkeypatch.setenv("BETADET_THREADS", "1")
    _, serial = run_to(tmp_path, "serial.csv", argv)
    monkeypatch.setenv("BETADET_THREADS", "3")
    _, pooled = run_to(tmp_path, "pooled.csv", argv)
    assert serial.read_bytes() == pooled.read_bytes()


def test_sample_jacobi_horizon_index(tmp_path):
    code, out = run_to(tmp_path, "j.csv", [
        "sample", "--ensemble", "jacobi", "--tau1", "1", "--tau2", "2",
        "--n", "200", "--paths", "3", "--seed", "2",
    ])
    assert code == 0
    rows = body_rows(out)[1:]
    per_path = {}
    for r in rows:
        per_path[r[0]] = per_path.get(r[0], 0) + 1
    assert per_path == {"0": 200, "1": 200, "2": 200}
    assert rows[-1][1] == "200"


def test_sample_json_round_trip(tmp_path):
    code, out = run_to(tmp_path, "s.json", [
        "sample", "--ensemble", "gram", "--n", "30", "--paths", "2",
        "--seed", "9", "--format", "json",
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["schema"] == "betadet-sample-v1"
    assert payload["config"]["seed"] == 9
    assert json.loads(json.dumps(payload)) == payload
    assert len(payload["paths"]) == 2
    assert len(payload["paths"][0]["cumlog"]) == 30


def test_exit_codes():
    assert main(["sample", "--ensemble", "gram", "--beta", "0", "--n", "50"]) == 3
    assert main(["sample", "--paths", "0"]) == 3
    assert main(["sample", "--bogus"]) == 2
    assert main(["nosuchcommand"]) == 2
    assert main([]) == 2
    assert main(["rate", "--xi-steps", "0"]) == 3
    assert main(["spectral", "--ensemble", "auxs"]) == 2


def test_rate_branch_transition_at_minus_T(tmp_path):
    code, out = run_to(tmp_path, "r.csv", [
        "rate", "--ensemble", "gram", "--T", "0.5", "--xi-steps", "40",
    ])
    assert code == 0
    rows = body_rows(out)
    assert rows[0] == ["xi", "theta", "rate", "branch", "path_json"]
    lo = hi = 0
    for xi_s, theta_s, rate_s, branch, path_json in rows[1:]:
        xi = float(xi_s)
        assert branch == ("Interior" if xi >= -0.5 else "AffineTail")
        lo += branch == "AffineTail"
        hi += branch == "Interior"
        path = json.loads(path_json)
        assert len(path["points"]) == 16
        assert float(rate_s) >= -1e-12
    assert lo > 0 and hi > 0
    # default grid covers [-T - 0.2, -0.01]
    assert float(rows[1][0]) == pytest.approx(-0.7)
    assert float(rows[-1][0]) == pytest.approx(-0.01)


def test_rate_exactly_at_junction_is_interior(tmp_path):
    code, out = run_to(tmp_path, "rj.csv", [
        "rate", "--ensemble", "gram", "--T", "0.5",
        "--xi-min", "-0.5", "--xi-max", "-0.5", "--xi-steps", "1",
    ])
    assert code == 0
    rows = body_rows(out)
    assert rows[1][3] == "Interior"


def test_rate_infinite_branch_serializes(tmp_path):
    code, out = run_to(tmp_path, "ri.json", [
        "rate", "--ensemble", "gram", "--T", "0.5", "--xi-min", "-0.1",
        "--xi-max", "0.1", "--xi-steps", "3", "--format", "json",
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    last = payload["results"][-1]
    assert last["rate"] == "inf" and last["branch"] == "Infinite"
    assert last["theta"] is None and last["path"] is None
    assert json.loads(json.dumps(payload)) == payload


def test_moments_lln_gap(tmp_path):
    code, out = run_to(tmp_path, "m.csv", [
        "moments", "--ensemble", "gram", "--beta", "1", "--n", "400",
        "--t", "0.5",
    ])
    assert code == 0
    rows = body_rows(out)
    head, row = rows[0], rows[1]
    exact_mean = float(row[head.index("exact_mean")])
    assert abs(exact_mean / 400 + float(entropy_J(0.5))) < 2e-2


def test_moments_sweep_and_json_round_trip(tmp_path):
    code, out = run_to(tmp_path, "m.json", [
        "moments", "--ensemble", "jacobi", "--tau1", "1", "--tau2", "2",
        "--n", "60", "--format", "json",
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["schema"] == "betadet-moments-v1"
    ps = [r["p"] for r in payload["reports"]]
    assert ps == sorted(set(ps)) and 1 <= ps[0] and ps[-1] <= 59
    assert json.loads(json.dumps(payload)) == payload


def test_spectral_mass_and_header(tmp_path):
    code, out = run_to(tmp_path, "sp.csv", [
        "spectral", "--ensemble", "laguerre", "--T", "0.5",
    ])
    assert code == 0
    text = out.read_text()
    assert "log_energy=" in text and "seed=0" in text
    rows = np.array([[float(v) for v in r] for r in body_rows(out)[1:]])
    mass = np.trapezoid(rows[:, 1], rows[:, 0])
    assert abs(mass - 1.0) < 1e-3


def test_spectral_jacobi_mixture_table(tmp_path):
    code, out = run_to(tmp_path, "spj.json", [
        "spectral", "--ensemble", "jacobi", "--tau1", "1", "--tau2", "2",
        "--T", "0.5", "--format", "json",
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["kind"] == "cc"
    assert payload["atom_at_zero"] == 0.0 and payload["atom_at_one"] == 0.0
    # mixture mean u'/(u'+v') = 2/6
    assert payload["notes"]["mean"] == pytest.approx(1.0 / 3.0)
    cdfv = payload["cdf"]
    assert cdfv[0] == pytest.approx(0.0, abs=1e-6)
    assert cdfv[-1] == pytest.approx(1.0, abs=1e-6)


def test_verify_only_filter(tmp_path, capsys):
    code, out = run_to(tmp_path, "v.json", ["verify", "--only", "specfun"])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["passed"] is True
    assert [c["name"] for c in payload["criteria"]] == ["specfun-certification"]
    for key in ("measured", "target", "tolerance"):
        assert key in payload["criteria"][0]
    assert "PASS specfun-certification" in capsys.readouterr().err


def test_verify_no_match_is_usage_error():
    assert main(["verify", "--only", "nosuchsuite"]) == 2
