import pytest

import commitrep


def test_strategy_names_and_parse():
    assert commitrep.strategy_names() == ["1+", "1A", "1-", "R+", "RA", "R-", "0+", "0A", "0-"]
    assert commitrep.parse_strategy("ra") == "RA"
    with pytest.raises(ValueError):
        commitrep.parse_strategy("Q?")


def test_fixation_anchor():
    rho = commitrep.fixation_probability("RA", "0-", benefit=5.5)
    assert abs(rho - 0.9664) < 0.005
    assert commitrep.fixation_probability("0-", "0A") == 0.01


def test_predictions():
    assert commitrep.predict_reputation("RA", 0.05, "2b", True) == ("high", pytest.approx(0.95))
    assert commitrep.predict_reputation("R-", 0.05, "2b", False)[0] == "zero"
    assert commitrep.absorption_probability(50, 0.05) == pytest.approx(0.0769, abs=1e-4)


def test_run_evolution_is_deterministic():
    a = commitrep.run_evolution(turns=2000, seed=3)
    b = commitrep.run_evolution(turns=2000, seed=3)
    assert a == b
    assert sum(a["snapshots"][-1]["counts"].values()) == 100
    assert sum(a["tail_frequency"].values()) == pytest.approx(1.0)


def test_simulate_reputations():
    out = commitrep.simulate_reputations({"RA": 6, "1A": 3, "R-": 1}, rounds=20000, seed=2)
    assert out["num_observers"] == 7
    assert set(out["strategies"]) == {"RA", "1A", "R-"}


def test_run_config_writes_csv(tmp_path):
    config = {"kind": "fixation", "b_list": [1.5], "out": str(tmp_path / "fix")}
    manifest = commitrep.run_config(config)
    assert "fixation.csv" in manifest["files"]
    text = (tmp_path / "fix" / "fixation.csv").read_text()
    assert text.startswith("# schema: commitrep.fixation/1\n")
    assert commitrep.normalize_config(config)["benefit"] == 5.5


def test_bad_key_raises_config_error():
    with pytest.raises(commitrep.ConfigError):
        commitrep.normalize_config({"no_such_key": 1})
    assert issubclass(commitrep.ConfigError, ValueError)
