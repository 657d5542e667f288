import json

import annrot


def test_rho_n_basic_families():
    identity = json.dumps({"family": "identity"})
    assert annrot.rho_n(identity, 0.3, 0.0, 5) == 0.0

    rigid = json.dumps({"family": "rigid", "turns": 1.0 / 3.0})
    assert abs(annrot.rho_n(rigid, 0.1, 2.0, 7) - 1.0 / 3.0) < 1e-12

    twist = json.dumps({"family": "twist"})
    assert abs(annrot.rho_n(twist, 0.0, -1.25, 40) + 1.25) < 1e-12


def test_displacement_trace():
    twist = json.dumps({"family": "twist"})
    pts, total, escaped = annrot.displacement_trace(twist, 0.0, 0.5, 10)
    assert len(pts) == 11
    assert not escaped
    assert abs(total - 5.0) < 1e-12


def test_reference_specs_parse():
    skew = json.loads(annrot.reference_skew_spec(0.0))
    assert skew["family"] == "skew_het"
    tilted = json.loads(annrot.reference_tilted_spec())
    assert tilted["family"] == "power"
    assert tilted["q"] == 128


def test_run_config_and_check_record():
    annrot.set_worker_count(2)
    cfg = {
        "schema": "annrot-config-v1",
        "op": "rho-k",
        "map": {"family": "rigid", "turns": 0.25},
        "y_lo": -1.0,
        "y_hi": 1.0,
        "grid_res": 24,
        "m": 1,
        "horizon": 100,
        "plan": {"grid_nx": 8, "grid_ny": 8, "jitter": 0.0, "seed": 1},
    }
    record_json, exit_code, message = annrot.run_config(json.dumps(cfg))
    assert exit_code == 0, message
    record = json.loads(record_json)
    intervals = record["payload"]["rho_k"]["estimate"]["intervals"]
    assert len(intervals) == 1
    lo, hi = intervals[0]
    assert lo <= 0.25 <= hi
    assert annrot.check_record(record_json) == []


def test_schema_errors_surface_as_exceptions():
    import pytest

    with pytest.raises(annrot.SchemaError):
        annrot.run_config(json.dumps({"op": "rho-zz", "map": "identity"}))
