import json
import math

import numpy as np
import pytest

import gmphd_reid as g


def test_default_config_is_typed():
    cfg = g.default_config()
    assert set(cfg) == set(g.config_keys())
    assert cfg["eta"] == pytest.approx(0.65)
    assert cfg["T_ts"] == 3
    assert cfg["use_appearance"] is True


def test_resolve_config_rejects_bad_values():
    assert g.resolve_config({"T_ts": 5})["T_ts"] == "5"
    with pytest.raises(ValueError):
        g.resolve_config({"p_d": 1.5})
    with pytest.raises(g.InputError):
        g.resolve_config({"no_such_key": 1})


def test_appearance_likelihood_closed_form():
    assert g.appearance_likelihood(1.0) == pytest.approx(0.880797, abs=1e-6)
    assert g.appearance_likelihood(0.0) == 0.5
    assert g.appearance_likelihood(-1.0) == pytest.approx(0.119203, abs=1e-6)


def test_solve_min_cost_rectangular():
    cost = np.array([[4.0, 1.0, 5.0], [2.0, 3.0, 9.0]])
    assert g.solve_min_cost(cost) == [1, 0]
    assert g.solve_min_cost(np.zeros((0, 3))) == []


def test_tracker_keeps_identity_on_a_moving_box():
    tracker = g.Tracker({"use_appearance": False, "lambda_t": 1.0})
    ids = set()
    for k in range(20):
        boxes = np.array([[100.0 + 2 * k, 200.0, 40.0, 80.0]])
        out = tracker.step(boxes, np.array([0.9]))
        if k >= 2:
            assert len(out) == 1
            ids.add(out[0][0])
    assert ids == {1}
    assert tracker.frame == 20
    assert 0.5 < tracker.mass < 1.0


def test_tracker_with_features_and_shape_errors():
    tracker = g.Tracker()
    feats = np.ones((1, 8), dtype=np.float32)
    tracker.step(np.array([[10.0, 10.0, 20.0, 40.0]]), np.array([1.0]), feats)
    with pytest.raises(ValueError):
        tracker.step(np.array([[10.0, 10.0, 20.0, 40.0]]), np.array([1.0, 0.5]))


def test_synthesize_track_evaluate(tmp_path):
    scenario = {"preset": {"name": "well_separated", "targets": 3}, "frames": 40, "seed": 2}
    g.synthesize(json.dumps(scenario), str(tmp_path))
    out = tmp_path / "res.txt"
    summary = g.track(str(tmp_path / "det.txt"), str(tmp_path / "seqinfo.ini"), str(out),
                      provider="file", features=str(tmp_path / "features.txt"))
    assert "tracked 40 frames" in summary
    report = g.evaluate(str(tmp_path / "gt.txt"), str(out))
    assert 0.0 < report["mota"] <= 1.0
    assert not math.isnan(report["idf1"])
    perfect = g.evaluate(str(tmp_path / "gt.txt"), str(tmp_path / "gt.txt"))
    assert perfect["mota"] == 1.0


def test_track_missing_feature_file(tmp_path):
    g.synthesize(json.dumps({"preset": {"name": "well_separated", "targets": 1}, "frames": 5}), str(tmp_path))
    with pytest.raises(ValueError, match="missing.txt"):
        g.track(str(tmp_path / "det.txt"), str(tmp_path / "seqinfo.ini"), str(tmp_path / "r.txt"),
                provider="file", features=str(tmp_path / "missing.txt"))


def test_ablate_rows():
    scenario = {"preset": {"name": "signature_occlusion", "targets": 3}, "frames": 45}
    rows = g.ablate(json.dumps(scenario), [0, 3])
    assert [r["row"] for r in rows] == [
        "motion_only", "appearance_reid", "appearance_reid_addon", "sweep_tp_0", "sweep_tp_3"]
    assert rows[0]["appearance"] is False and rows[2]["t_ts"] == 3
