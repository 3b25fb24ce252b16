import json
import math
import subprocess
import sys

import pytest

from conftest import h2
from repcap import NotConverged, blahut_arimoto_capacity, DiscreteChannel
from repcap.cli import main
from repcap.reporting import canonical_json, curve_csv, manifest_path

BSC011 = ",0,1\n0,0.89,0.11\n1,0.11,0.89\n"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_rate_prints_plain_number(capsys):
    code, out, _ = run(["rate", "--q", "128", "--bits", "31", "--n", "1024"], capsys)
    assert code == 0 and out.strip() == "3.875"


def test_rate_feasibility_json(capsys):
    code, out, _ = run(["rate", "--q", "128", "--bits", "31", "--n", "1024", "--entropy", "8"], capsys)
    data = json.loads(out)
    assert code == 0 and data["checks"]["lossless"]["margin"] == -4224 and not data["checks"]["lossless"]["holds"]


def test_capacity_json(tmp_csv, capsys):
    code, out, _ = run(["capacity", "--channel", tmp_csv("bsc011.csv", BSC011)], capsys)
    assert code == 0
    assert json.loads(out)["capacity"] == pytest.approx(1 - h2(0.11), abs=1e-9)


def test_missing_flag_is_usage_error(capsys):
    code, _, err = run(["capacity"], capsys)
    assert code == 2 and "usage:" in err and "--channel" in err


def test_cost_without_budget_is_usage_error(tmp_csv, capsys):
    code, _, err = run(["capacity", "--channel", tmp_csv("c.csv", BSC011),
                        "--cost", tmp_csv("cost.csv", "symbol,cost\n0,0\n1,1\n")], capsys)
    assert code == 2 and "usage:" in err


def test_computation_error_exit_one(tmp_csv, capsys):
    code, _, err = run(["capacity", "--channel", tmp_csv("bad.csv", ",0,1\n0,0.5,0.6\n1,0.1,0.9\n")], capsys)
    assert code == 1 and "error" in err
    code, _, _ = run(["entropy", "--source", "/nonexistent/file.csv"], capsys)
    assert code == 1


def test_entropy_and_typical_set(tmp_csv, tmp_path, capsys):
    src = tmp_csv("s.csv", "symbol,prob\n0,0.8\n1,0.2\n")
    code, out, _ = run(["entropy", "--source", src], capsys)
    assert json.loads(out)["entropy_rate_bits"] == pytest.approx(h2(0.2), abs=1e-11)
    out_csv = tmp_path / "set.csv"
    code, out, _ = run(["typical-set", "--source", src, "--n", "12", "--epsilon", "0.1", "--out", str(out_csv)], capsys)
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "sequence,log2_prob" and len(lines) == 1 + 66
    summary = json.loads((tmp_path / "set.csv.summary.json").read_text())
    assert summary["size"] == 66 and summary["probability_bounds"]
    assert manifest_path(out_csv).exists()


def test_markov_entropy(tmp_csv, capsys):
    code, out, _ = run(["entropy", "--source", tmp_csv("m.csv", ",0,1\n0,0.9,0.1\n1,0.1,0.9\n"), "--markov"], capsys)
    assert json.loads(out)["entropy_rate_bits"] == pytest.approx(h2(0.1), abs=1e-11)


def test_rd_curve_csv(tmp_csv, tmp_path, capsys):
    src = tmp_csv("s.csv", "symbol,prob\n0,0.7\n1,0.3\n")
    dist = tmp_csv("d.csv", ",0,1\n0,0,1\n1,1,0\n")
    out = tmp_path / "curve.csv"
    assert run(["rd-curve", "--source", src, "--distortion", dist, "--points", "9", "--out", str(out)], capsys)[0] == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    for d, r, _ in rows:
        assert float(r) == pytest.approx(max(0.0, h2(0.3) - h2(float(d))), abs=1e-6)


def test_audit_support(tmp_csv, capsys):
    text = "id,label,z_1,z_2\n1,a,0,0\n2,a,1,2\n3,b,1,2\n4,b,3,1\n"
    code, out, _ = run(["audit-support", "--embeddings", tmp_csv("e.csv", text)], capsys)
    data = json.loads(out)
    assert data["distinct_nonzero_count"] == 2 and data["q_tilde"] == 1.0


def test_collapse_audit(tmp_csv, tmp_path, capsys):
    text = "id,label,v_1,z_1,z_2\na,x,0.5,1,0\nb,x,1.5,1,0\nc,y,2.0,-1,0\nd,y,2.0,-1,0\n"
    out = tmp_path / "r.json"
    code, _, _ = run(["collapse-audit", "--embeddings", tmp_csv("e.csv", text), "--out", str(out)], capsys)
    rep = json.loads(out.read_text())
    assert code == 0 and rep["degenerate_classes"] == ["x"]
    man = json.loads(manifest_path(out).read_text())
    assert man["subcommand"] == "collapse-audit" and len(man["inputs"]["embeddings"]["sha256"]) == 64


def test_canonical_json_rules():
    a = canonical_json({"b": 1 / 3, "a": [2.0, 1e-20]})
    assert a == canonical_json({"a": [2.0, 1e-20], "b": 1 / 3})
    data = json.loads(a)
    assert list(data) == ["a", "b"] and data["b"] == 0.333333333333


def test_nan_from_failed_solve_becomes_null():
    try:
        blahut_arimoto_capacity(DiscreteChannel([[0.9, 0.1, 0.0], [0.0, 0.2, 0.8], [0.3, 0.3, 0.4]]), max_iter=1)
        value = 0.0
    except NotConverged:
        value = math.nan
    data = json.loads(canonical_json({"capacity": value}))
    assert data["capacity"] is None and any("capacity" in w for w in data["warnings"])


def test_curve_csv_lines():
    rows = [{"rate": r, "value": 1 - r, "ci": 0.01} for r in (0.1, 0.2, 0.3, 0.4)]
    text = curve_csv(rows)
    assert len(text.splitlines()) == 5 and text.splitlines()[0] == "rate,value,ci"


def test_simulate_outputs_and_env_override(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"theorem": "thm3", "source": {"kind": "bernoulli", "p": 0.2}, "n": 10,
                               "rates": [0.4, 0.6, 0.8, 1.0], "trials": 300, "seed": 5}))
    monkeypatch.setenv("REPCAP_OUT_DIR", str(tmp_path / "outdir"))
    code, _, _ = run(["simulate", "thm3", "--config", str(cfg), "--out", "rep.json", "--csv", "curve.csv",
                      "--workers", "2"], capsys)
    assert code == 0
    base = tmp_path / "outdir"
    assert len((base / "curve.csv").read_text().splitlines()) == 5
    rep = json.loads((base / "rep.json").read_text())
    assert "workers" not in json.dumps(rep)
    man = json.loads((base / "rep.json.manifest.json").read_text())
    assert man["seed"] == 5 and man["config"]["n"] == 10


def test_simulate_bad_config_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert run(["simulate", "thm3", "--config", str(cfg)], capsys)[0] == 2


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "repcap.cli", "rate", "--q", "1024", "--bits", "32", "--n", "256"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "128"
