import math
import random

import pytest

import ddt


def test_ks_extremes():
    raw, norm, p = ddt.measure("ks", [1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert raw == 0.0 and norm == 0.0 and p is None
    raw, _, _ = ddt.measure("ks", [1.0, 2.0], [5.0, 6.0])
    assert raw == 1.0


def test_baseline_has_p_value():
    _, _, p = ddt.measure("wilcox", list(range(30)), [x + 100 for x in range(30)])
    assert p > 0.99


def test_unknown_measure():
    with pytest.raises(ddt.ArgumentError, match="nope"):
        ddt.measure("nope", [1.0], [2.0])
    with pytest.raises(ValueError):
        ddt.measure("nope", [1.0], [2.0])


def test_bad_rows():
    rows = [[0.1 * i] for i in range(600)]
    rows[317] = [math.nan]
    with pytest.raises(ddt.ValidationError, match="317"):
        ddt.scan(rows, "ncd")
    with pytest.raises(ddt.ArgumentError):
        ddt.scan([], "ncd")
    with pytest.raises(ddt.ArgumentError):
        ddt.scan(rows[:100], "ncd", bogus=1)


def test_tables_required():
    rows = [[random.random()] for _ in range(500)]
    with pytest.raises(ddt.ArgumentError):
        ddt.scan(rows, "poset")


def test_handle_lifecycle(range_tables):
    h = ddt.calibration_load(str(range_tables))
    assert "ks" in h.measures()
    p = h.lookup("ks", 0.5)
    assert 0.0 <= p <= 1.0
    _, _, cal = ddt.measure("ks", [1.0, 2.0, 3.0], [1.5, 2.5, 3.5], h)
    assert cal is not None
    h.close()
    assert h.closed
    with pytest.raises(ddt.StateError):
        h.lookup("ks", 0.5)
    with pytest.raises(ddt.StateError):
        ddt.measure("ks", [1.0], [2.0], h)


def test_missing_tables(tmp_path):
    with pytest.raises(Exception):
        ddt.calibration_load(str(tmp_path / "none"))


def test_shift_is_found():
    rng = random.Random(4)
    rows = [[rng.gauss(0, 1), rng.gauss(0, 1)] for _ in range(500)]
    rows += [[rng.gauss(3, 1), rng.gauss(3, 1)] for _ in range(250)]
    recs = ddt.scan(rows, "mmd_u2", step=250, permutations=200)
    assert [r["verdict"] for r in recs] == ["same", "different"]
