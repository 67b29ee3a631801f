import json
import math

import numpy as np
import pytest

import uwbresp


def test_peak_factor_closed_forms():
    assert uwbresp.peak_factor(np.ones(4)) == pytest.approx(1.0, abs=1e-12)
    line = np.zeros(11)
    line[3] = 2.0
    assert uwbresp.peak_factor(line) == pytest.approx(math.sqrt(11), abs=1e-12)


def test_default_config_round_trips():
    cfg = json.loads(uwbresp.default_config())
    assert cfg["scene"]["body_wall_m"] == 0.4
    assert cfg["dims"]["M"] == 1024


def test_simulate_and_detect():
    data, dt_fast, dt_slow = uwbresp.simulate()
    assert data.shape == (1024, 200)
    assert dt_slow == 0.1
    report = uwbresp.detect(data, dt_fast, dt_slow)
    assert len(report["detections"]) == 1
    assert report["detections"][0]["respiration_freq_hz"] == pytest.approx(0.4, abs=0.05)


def test_simulate_is_deterministic():
    a, _, _ = uwbresp.simulate('{"scene": {"rng_seed": 9}}')
    b, _, _ = uwbresp.simulate('{"scene": {"rng_seed": 9}}')
    assert np.array_equal(a, b)


def test_profile_shape():
    data, dt_fast, dt_slow = uwbresp.simulate()
    p, f = uwbresp.peak_factor_profile(data, dt_fast, dt_slow)
    assert p.shape == (1024,) and f.shape == (1024,)
    assert np.all(p >= 1.0 - 1e-12)


def test_zero_radargram_has_no_detections():
    report = uwbresp.detect(np.zeros((64, 200)), 1 / 39e9, 0.1)
    assert report["detections"] == []


def test_file_round_trip(tmp_path):
    data = np.random.default_rng(3).standard_normal((8, 16))
    path = str(tmp_path / "g.uwbr")
    uwbresp.write_radargram(path, data, 1 / 39e9, 0.1)
    back, dt_fast, dt_slow = uwbresp.read_radargram(path)
    assert np.array_equal(back, data)
    assert (dt_fast, dt_slow) == (1 / 39e9, 0.1)


def test_sweep_single_cell():
    rows, ordered = uwbresp.sweep([0.4], [0.4])
    assert ordered
    assert len(rows) == 1 and rows[0][:2] == (0.4, 0.4)


def test_errors_raise():
    with pytest.raises(uwbresp.Error):
        uwbresp.simulate('{"scene": {"body_wall_m": -1}}')
    with pytest.raises(ValueError):
        uwbresp.detect(np.full((4, 200), np.nan), 1 / 39e9, 0.1)
    with pytest.raises(uwbresp.Error):
        uwbresp.read_radargram("/nonexistent/file.uwbr")
