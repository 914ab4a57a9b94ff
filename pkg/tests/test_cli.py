import json

import pytest

from simplexmax.cli import main, parse_gram
from simplexmax.errors import InvalidInput


def run(capsys, *argv):
    code = main(["--quiet" if False else argv[0], *argv[1:], "-q"])
    out, err = capsys.readouterr()
    return code, out, err


def test_count_sphere(capsys):
    code, out, _ = run(capsys, "count", "--dim", "5", "--gram", "1", "--lambda-sq", "1")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == "10"
    assert doc["config"]["dim"] == 5 and "elapsed_ms" not in doc


def test_count_pair(capsys):
    code, out, _ = run(capsys, "count", "--dim", "3", "--gram", "1 0; 0 1", "--lambda-sq", "1")
    assert code == 0 and json.loads(out)["count"] == "24"


def test_count_from_simplex_file(tmp_path, capsys):
    f = tmp_path / "s.txt"
    f.write_text("1 0 0\n0 1 0\n")
    code, out, _ = run(capsys, "count", "--dim", "3", "--simplex", str(f), "--lambda-sq", "1")
    assert code == 0 and json.loads(out)["count"] == "24"


def test_malformed_gram_names_token(capsys):
    code, _, err = run(capsys, "count", "--dim", "3", "--gram", "1 0; 0 q", "--lambda-sq", "1")
    assert code == 2 and "'q'" in err


def test_parse_gram_rejects_ragged():
    with pytest.raises(InvalidInput):
        parse_gram("1 0; 0")


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("SIMPLEXMAX_BUDGET", "10")
    code, _, _ = run(capsys, "count", "--dim", "6", "--gram", "1 0; 0 1", "--lambda-sq", "9")
    assert code == 3


def test_unknown_flag_is_usage_error(capsys):
    code, _, _ = run(capsys, "count", "--dim", "3", "--gram", "1", "--lambda-sq", "1", "--fast")
    assert code == 2


def test_timing_goes_to_sidecar(tmp_path, capsys):
    side = tmp_path / "t.json"
    code, out, _ = run(capsys, "count", "--dim", "4", "--gram", "1", "--lambda-sq", "2", "--timing", str(side))
    assert code == 0 and "elapsed_ms" in json.loads(side.read_text())
    assert "elapsed_ms" not in out


def test_maximal_constants_and_delta(tmp_path, capsys):
    delta = tmp_path / "d.txt"
    delta.write_text("3 1\n0 0 0 1.0\n")
    out = tmp_path / "m.txt"
    code, stdout, _ = run(capsys, "maximal", "--input", str(delta), "--input", "const:1", "--gram", "1 0; 0 1", "--lambda-sq", "1", "--output", str(out), "--norms", "2,inf")
    assert code == 0
    summary = json.loads(stdout)
    assert summary["norms"]["inf"] == pytest.approx(1 / 6)
    assert "-1 0 0 0.16666666666666666" in out.read_text().splitlines()
    const = tmp_path / "c.txt"
    code, _, _ = run(capsys, "maximal", "--input", "const:1", "--input", "const:1", "--dim", "3", "--gram", "1 0; 0 1", "--lambda-sq", "1,2", "--box=-1,-1,-1:1,1,1", "--output", str(const))
    assert code == 0
    values = {ln.split()[-1] for ln in const.read_text().splitlines()[1:]}
    assert values == {"1.0"}


def test_maximal_empty_lambda_set(tmp_path, capsys):
    delta = tmp_path / "d.txt"
    delta.write_text("3 1\n0 0 0 1.0\n")
    code, _, err = run(capsys, "maximal", "--input", str(delta), "--input", "const:1", "--gram", "1 0; 0 1", "--lambda-sq", "3", "--output", str(tmp_path / "o.txt"))
    assert code == 2 and "empty lambda set" in err


def test_maximal_dimension_mismatch(tmp_path, capsys):
    a = tmp_path / "a.txt"
    a.write_text("3 1\n0 0 0 1.0\n")
    b = tmp_path / "b.txt"
    b.write_text("2 1\n0 0 1.0\n")
    code, _, err = run(capsys, "maximal", "--input", str(a), "--input", str(b), "--gram", "1 0; 0 1", "--lambda-sq", "1", "--output", str(tmp_path / "o.txt"))
    assert code == 2 and "dimension" in err


def test_region_point_and_export(capsys):
    code, out, _ = run(capsys, "region", "--kind", "ckq", "--k", "2", "--m", "3", "--point", "0.6,0.6")
    assert code == 0 and json.loads(out)["membership"] == "interior"
    code, out, _ = run(capsys, "region", "--kind", "tilde", "--k", "3", "--m", "2", "--export", "csv")
    assert code == 0 and "1/2,1/4,1/4" in out
    code, _, _ = run(capsys, "region", "--kind", "ckq", "--k", "2", "--point", "0.1")
    assert code == 2


def test_region_theorem(capsys):
    code, out, _ = run(capsys, "region", "--theorem", "T2ii", "--k", "2", "--m", "2", "--d", "10", "--p", "3,3", "--r", "3/2")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "not-claimed"
    assert any("2mk+3 = 11" in f for f in doc["failures"])


def test_verify_missing_config(capsys):
    code, _, _ = run(capsys, "verify", "--config", "/nonexistent/cfg.json")
    assert code == 2


def test_verify_failure_exit_code(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    # a band of 1.0 cannot hold over these scales, so the case fails
    cfg.write_text(json.dumps({"campaigns": [{"kind": "l1_bound", "dims": [5], "grams": [[[1]]], "lambda_sq": [1, 2, 4], "band": 1.0}]}))
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    doc = json.loads(out)
    assert code == 1 and doc["summary"]["fail"] == 1


def test_verify_budget_exit_code(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"budget": 10, "campaigns": [{"kind": "second_moment", "dims": [11], "lambda_sq": [1, 2]}]}))
    code, _, _ = run(capsys, "verify", "--config", str(cfg))
    assert code == 3


def test_counterexample_small(capsys):
    code, out, _ = run(capsys, "counterexample", "--d", "7", "--k", "2", "--p", "7/5,inf", "--j-max", "2")
    doc = json.loads(out)
    sums = [b["partial_sum"] for b in doc["blocks"]]
    assert code == 0 and sums[1] > sums[0]
    assert doc["config"]["p"] == "7/5,inf"
