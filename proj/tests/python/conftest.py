import os
import shutil
import subprocess
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


def _cli():
    path = os.environ.get("DDT_CLI") or shutil.which("ddt")
    if path:
        return path
    local = ROOT / "build" / "tools" / "ddt"
    return str(local) if local.exists() else None


@pytest.fixture(scope="session")
def cli():
    path = _cli()
    if path is None:
        pytest.skip("ddt command-line tool not built")
    return path


@pytest.fixture(scope="session")
def run(cli):
    def go(*args):
        return subprocess.run([cli, *map(str, args)], check=True, capture_output=True, text=True).stdout
    return go


@pytest.fixture(scope="session")
def range_tables(tmp_path_factory, run):
    out = tmp_path_factory.mktemp("tables")
    run("--seed", 3, "calibrate", "--pairs", 300, "--out-dir", out)
    return out
