import csv
import json

import pytest

import ddt

FLAT = ("window_start", "method", "raw", "normalized", "p_value", "verdict")

METHODS = {
    "poset": {"measures": "ks,hellinger,cvm"},
    "ncd": {"bootstrap": 40},
    "martingale": {},
}


def read_rows(path):
    with open(path) as f:
        r = csv.reader(f)
        next(r)
        return [[float(v) for v in row[1:]] for row in r]


@pytest.mark.parametrize("kind", ["average", "variance"])
@pytest.mark.parametrize("method", sorted(METHODS))
def test_cli_parity(tmp_path, run, range_tables, kind, method):
    series = tmp_path / "s.csv"
    run("--seed", 5, "--out", series, "gen", "--kind", kind, "--d", 2, "--blocks", 5)
    opts = METHODS[method]

    args = ["--seed", 9, "--format", "json", "scan", series, "--method", method, "--step", 250]
    for k, v in opts.items():
        args += [f"--{k}", *str(v).split(",")]
    tables = None
    if method == "poset":
        args += ["--calib-dir", range_tables]
        tables = ddt.calibration_load(str(range_tables))
    cli = [json.loads(line) for line in run(*args).splitlines() if line.strip()]

    py = ddt.scan(read_rows(series), method, step=250, seed=9, tables=tables, **opts)
    assert len(py) == len(cli) > 0
    for a, b in zip(py, cli):
        for key in FLAT:
            if isinstance(b[key], float):
                assert a[key] == pytest.approx(b[key], rel=1e-12, abs=1e-15), key
            else:
                assert a[key] == b[key], key
        if method == "martingale":
            assert a["delta_reject"] == b["delta_reject"]
            assert a["reset"] == b["reset"]
