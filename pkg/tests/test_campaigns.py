import json

import pytest

from simplexmax.campaigns import (
    brute_force_count,
    forward_growth,
    load_config,
    run_campaigns,
    run_l1_bound_campaign,
    run_region_crosscheck,
    run_second_moment_campaign,
    run_surrogate_campaign,
    smoke_config_path,
    validate_config,
)
from simplexmax.enumeration import count_simplex_copies
from simplexmax.errors import InvalidInput


def test_forward_growth():
    assert forward_growth([3.0, 2.0, 1.0]) == 1.0
    assert forward_growth([1.0, 3.0, 2.0]) == 3.0
    assert forward_growth([2.0, 1.0, 1.5]) == 1.5
    assert forward_growth([5.0]) == 1.0


@pytest.mark.parametrize("t,lam,d", [([[1]], 2, 3), ([[1, 0], [0, 1]], 2, 4), ([[2, 1], [1, 2]], 1, 3)])
def test_brute_force_oracle_matches_pruned(t, lam, d):
    assert brute_force_count(t, lam, d) == count_simplex_copies(t, lam, d)


def test_degenerate_gram_rejected_at_validation():
    with pytest.raises(InvalidInput, match="positive definite"):
        validate_config({"campaigns": [{"kind": "second_moment", "grams": [[[1, 1], [1, 1]]]}]})


def test_unknown_fields_rejected():
    with pytest.raises(InvalidInput):
        validate_config({"campaigns": [{"kind": "oracle", "colour": 1}]})
    with pytest.raises(InvalidInput):
        validate_config({"campaigns": [{"kind": "nope"}]})
    with pytest.raises(InvalidInput):
        validate_config({"campaign": []})


def test_missing_and_malformed_config(tmp_path):
    with pytest.raises(InvalidInput):
        load_config(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InvalidInput):
        load_config(bad)


def test_below_hypothesis_is_report_only():
    rep = run_second_moment_campaign({"dims": [9], "lambda_sq": [1, 2]})
    assert [c.status for c in rep.cases] == ["report-only"]
    assert not rep.failed


def test_budget_exhaustion_is_skip_not_fail():
    rep = run_second_moment_campaign({"dims": [11], "lambda_sq": [1, 2], "budget": 10})
    assert [c.status for c in rep.cases] == ["skip"]
    assert not rep.failed and rep.budget_exhausted


def test_second_moment_values_recorded_as_strings():
    rep = run_second_moment_campaign({"dims": [11], "lambda_sq": [1, 2]})
    m = rep.cases[0].measured
    assert m["second_moments"] == ["160160", "462529760"]
    assert m["exponent"] == 28


def test_l1_bound_k1_reduces_to_sphere_counts():
    rep = run_l1_bound_campaign({"dims": [5], "grams": [[[1]]], "lambda_sq": [1, 4]})
    assert rep.cases[0].measured["counts"] == ["10", "90"]


def test_l1_bound_k2_reports_finite_ratios():
    rep = run_l1_bound_campaign({"dims": [7], "grams": [[[1, 0], [0, 1]], [[2, 1], [1, 2]], [[1, 0], [0, 2]]], "lambda_sq": [1]})
    for c in rep.cases:
        assert all(r > 0 for r in c.measured["ratios"])


def test_surrogate_campaign_small():
    rep = run_surrogate_campaign({"dims": [3], "cases": 20, "block": 10})
    assert not rep.failed
    const = [c for c in rep.cases if c.key.endswith("constants")][0]
    assert const.measured["equality"] is True
    for c in rep.cases:
        if "empirical_constant" in c.measured:
            assert 0 < c.measured["empirical_constant"] <= 1 + 1e-12


def test_region_crosscheck_small():
    rep = run_region_crosscheck({"theorems": ["T2ii", "T1ii"], "ks": [2], "ms": [2], "samples": 3000, "block": 1500})
    assert not rep.failed
    assert all(c.measured["inconsistencies"] == 0 for c in rep.cases)


def test_reports_are_reproducible():
    cfg = {"seed": 4, "campaigns": [{"name": "s", "kind": "surrogate", "dims": [3], "cases": 10, "block": 5}]}
    a = run_campaigns(validate_config(cfg), threads=1).dumps()
    b = run_campaigns(validate_config(cfg), threads=3).dumps()
    assert a == b
    c = run_campaigns(validate_config(cfg), seed=5).dumps()
    assert c != a


def test_bundled_smoke_config_is_valid():
    cfg = load_config(smoke_config_path())
    assert {c["kind"] for c in cfg["campaigns"]} >= {"second_moment", "l1_bound", "surrogate", "region_crosscheck"}
    json.dumps(cfg)
