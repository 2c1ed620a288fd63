"""Curve files (JSON) and tables (CSV).

A curve file is ``{"ell": float, "points": [[x, y, z], ...], "meta": {...}}``.
The json module writes floats with ``repr``, which round-trips doubles
exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .curve import DiscreteClosedCurve, make_curve
from .errors import SymknotsError


def curve_to_dict(curve: DiscreteClosedCurve, meta=None) -> dict:
    return {
        "ell": float(curve.ell),
        "points": [[float(v) for v in row] for row in curve.points],
        "meta": dict(meta or {}),
    }


def curve_from_dict(data) -> tuple[DiscreteClosedCurve, dict]:
    try:
        ell = float(data["ell"])
        points = np.array(data["points"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise SymknotsError("parse", f"not a curve file: {exc}") from None
    meta = data.get("meta") or {}
    return make_curve(ell, points), dict(meta)


def write_curve(path, curve: DiscreteClosedCurve, meta=None):
    Path(path).write_text(json.dumps(curve_to_dict(curve, meta), indent=1) + "\n")


def read_curve(path) -> tuple[DiscreteClosedCurve, dict]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SymknotsError("parse", f"cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise SymknotsError("parse", f"{path}: expected a JSON object")
    return curve_from_dict(data)


def _cell(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def write_table(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def read_table(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]
