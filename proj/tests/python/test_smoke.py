import math

import pytest

import fairsim


def test_default_config_roundtrip():
    cfg = fairsim.default_config()
    assert cfg["grid_width"] == 50
    assert cfg["n_cops"] == 10
    out = fairsim.simulate(cfg, max_ticks=10)
    assert out["config"] == {**cfg, "max_ticks": 10}


def test_simulate_is_deterministic():
    a = fairsim.simulate(seed=3, max_ticks=500)
    b = fairsim.simulate(seed=3, max_ticks=500)
    assert a == b
    assert a["ticks"] == 500
    assert a["events"]
    first = a["events"][0]
    assert set(first) == {"tick", "agent_id", "group", "cell_x", "cell_y", "J", "R"}
    table = a["report"]["g1"]["table"]
    n_g1 = sum(1 for e in a["events"] if e["group"] == "G1")
    assert table["tp"] + table["fp"] + table["fn"] + table["tn"] == n_g1


def test_config_errors_are_value_errors():
    with pytest.raises(fairsim.ConfigError, match="crime_rate"):
        fairsim.simulate(crime_rate=2.0)
    with pytest.raises(ValueError):
        fairsim.sweep({"q0_grid": [0.5]})


def test_metric_helpers():
    assert fairsim.tau1(0.10, 0.05) == pytest.approx(-1.0)
    assert fairsim.tau1(0.1, 0.0) is None
    assert fairsim.fairness_indicator(-1.0, 1.0) == 0
    assert fairsim.fairness_indicator(None, 1.0) == 0
    assert fairsim.fairness_indicator(0.5, 1.0) == 1


def test_small_sweep_and_bandit():
    res = fairsim.sweep(
        {"theta_grid": [0, 1], "q0_grid": [0.8], "replicates": 2, "base": {"max_ticks": 200}}, workers=2
    )
    assert len(res["records"]) == 4
    assert [r["theta"] for r in res["records"]] == [0, 0, 1, 1]

    b = fairsim.bandit({"runs": 2, "pulls": 3, "episode": {"max_ticks": 100}})
    assert len(b["mean_reward"]) == 3
    assert math.isclose(sum(b["aggregate_proportions"]), 1.0)
