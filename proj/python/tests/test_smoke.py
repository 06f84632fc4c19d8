import json
import math
import os
import pathlib

import pytest

import bobw

CONFIGS = pathlib.Path(os.environ.get("BOBW_CONFIG_DIR", pathlib.Path(__file__).resolve().parents[2] / "configs"))


def test_version():
    assert bobw.__version__.count(".") == 2


def test_gibbs_two_arm_example():
    beta = 2.0
    q = bobw.gibbs([0.0, beta * math.log(2.0)], beta)
    assert q == pytest.approx([2 / 3, 1 / 3], abs=1e-15)


def test_gibbs_matches_numeric_argmin():
    scores = [0.4, -1.0, 2.5, 0.0]
    for beta in (0.1, 1.0, 30.0):
        assert bobw.gibbs(scores, beta) == pytest.approx(bobw.ftrl_argmin_numeric(scores, beta), abs=1e-6)


def test_entropy_and_beta():
    assert bobw.entropy([0.5, 0.5, 0.0]) == pytest.approx(math.log(2))
    assert bobw.next_beta(1.0, 1.0, math.log(2), 2) == pytest.approx(1 + 1 / math.sqrt(2))


def test_mgr_scalar_case_is_exact():
    out = bobw.mgr([[1.0]], [1.0], [1.0], delta=0.5, iterations=3)
    assert out[0][0] == 1 - 0.5**4


def test_mgr_mean_tracks_series():
    pts, w, p = [[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5], [0.6, 0.3]
    sigma = [[0.5 * 0.6, 0.0], [0.0, 0.5 * 0.3]]
    expected = bobw.mgr_expectation(sigma, 0.5, 5)
    n = 4000
    acc = [[0.0, 0.0], [0.0, 0.0]]
    for s in range(n):
        est = bobw.mgr(pts, w, p, 0.5, 5, seed=s)
        for i in range(2):
            for j in range(2):
                acc[i][j] += est[i][j] / n
    for i in range(2):
        for j in range(2):
            assert acc[i][j] == pytest.approx(expected[i][j], abs=0.03)


def test_simulate_gap_instance():
    r = bobw.simulate("gap", "bobw_real_ftrl", horizon=500, seed=1)
    assert len(r["regret"]) == 500
    assert r["bias_violations"] == 0
    assert r["entropy_violations"] == 0
    assert r["regret"][-1] > 0
    again = bobw.simulate("gap", "bobw_real_ftrl", horizon=500, seed=1)
    assert again["regret"] == r["regret"]


def test_simulate_rejects_unknown_agent():
    with pytest.raises(ValueError):
        bobw.simulate("gap", "greedy", horizon=10)


def test_config_roundtrip_and_errors(tmp_path):
    cfg = bobw.load_config(CONFIGS / "smoke.yaml")
    assert cfg["horizons"] == [300, 3000]
    assert len(bobw.config_hash(str(CONFIGS / "smoke.yaml"))) == 16
    bad = tmp_path / "bad.yaml"
    bad.write_text((CONFIGS / "smoke.yaml").read_text().replace("noise_bound", "noise_bnd"))
    with pytest.raises(bobw.ConfigError, match=r"bad.yaml:\d+:\d+: unknown key"):
        bobw.load_config(bad)


def test_run_config_and_plotdata(tmp_path):
    rep = bobw.run_config(str(CONFIGS / "smoke.yaml"), output_root=str(tmp_path), threads=1)
    assert rep["ok"]
    assert [a["T"] for a in rep["aggregates"]] == [300, 3000]
    out = pathlib.Path(rep["output_dir"])
    text = bobw.plotdata(str(out / "manifest.json"), "loglog")
    assert "# slope" in text
    assert (out / rep["cells"][0]["file"]).read_text().startswith("#schema_version=1\n")


def test_generated_arms_with_history(tmp_path):
    cfg = tmp_path / "gen.yaml"
    text = (CONFIGS / "reactive.yaml").read_text()
    text = text.replace("horizons: [1000, 4000]", "horizons: [200]").replace("count: 4", "count: 1")
    cfg.write_text(text)
    loaded = bobw.load_config(cfg)
    assert loaded["environment"]["base_params"] == {"arms": 4, "seed": 2024, "norm": 0.5}
    rep = bobw.run_config(str(cfg), output_root=str(tmp_path), threads=1)
    assert rep["ok"]
    hist = json.loads((pathlib.Path(rep["output_dir"]) / rep["cells"][0]["history_file"]).read_text())
    assert len(hist["params"]) == 200
    assert hist["arms"] == 4 and hist["dim"] == 3
    assert all(math.hypot(*arm) <= 0.5 + 1e-12 for rnd in hist["params"] for arm in rnd)


def test_verify_quick():
    results = bobw.verify("quick")
    assert all(r["passed"] or r["informational"] for r in results)
