"""Two-window change detection."""
import json

from ._core import (
    ArgumentError,
    EvaluationError,
    Handle,
    MethodSettings,
    ParseError,
    RangeError,
    StateError,
    ValidationError,
    __version__,
    calibration_load,
    measure,
)
from . import _core

_SETTINGS = {
    "measures", "quorum", "alpha", "bootstrap", "swap_fraction", "level", "sigma",
    "permutations", "significance", "epsilon", "t", "reset_floor", "strangeness", "pcheck",
}


def scan(rows, method, window=250, ref_start=0, step=0, seed=1, tables=None, **settings):
    """Scan `rows` (a list of equal-length float sequences) and return one dict per window.

    `step` 0 compares a single window right after the reference.
    Extra keyword arguments set method options, e.g. measures="ks,hellinger", quorum=0.5.
    """
    s = MethodSettings()
    for key, value in settings.items():
        if key == "lambda_" or key == "lam":
            s.lambda_ = value
        elif key == "measures" and isinstance(value, str):
            s.measures = [m for m in value.split(",") if m]
        elif key in _SETTINGS:
            setattr(s, key, value)
        else:
            raise ArgumentError(f"unknown setting '{key}'")
    rows = [list(map(float, r)) for r in rows]
    return json.loads(_core.scan_json(rows, method, window, ref_start, step, seed, s, tables))


__all__ = [
    "ArgumentError", "EvaluationError", "Handle", "MethodSettings", "ParseError", "RangeError",
    "StateError", "ValidationError", "calibration_load", "measure", "scan", "__version__",
]
