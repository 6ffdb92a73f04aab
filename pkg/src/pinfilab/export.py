"""CSV and JSON serialization of trajectories, phase grids and reports.

Floats are written with 17 significant digits so every value re-parses to
the identical double.  Out-of-domain curve values are written as empty
strings.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .phase import ZONE_BY_CODE, PhaseGrid
from .simulation import Trajectory

__all__ = [
    "TRAJECTORY_COLUMNS",
    "PHASE_COLUMNS",
    "CURVE_COLUMNS",
    "fmt",
    "trajectory_csv",
    "phase_csv",
    "curves_csv",
    "read_trajectory_csv",
    "read_phase_csv",
    "to_json",
]

TRAJECTORY_COLUMNS = (
    "time", "price", "x", "ss_active", "sb_active", "gb_active", "lp_retention",
    "seller_profit_cum", "buyer_surplus_cum", "lp_reward_cum", "lp_imperm_loss",
)
PHASE_COLUMNS = ("x", "g", "zone", "g_ss", "g_sb")
CURVE_COLUMNS = ("x", "g_ss", "g_sb")


def fmt(value: float) -> str:
    if math.isnan(value):
        return ""
    return "%.17g" % value


def _write(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def trajectory_csv(traj: Trajectory) -> str:
    buyer = traj.buyer_surplus_cum
    rows = (
        (
            fmt(traj.time[k]), fmt(traj.price[k]), fmt(traj.x[k]),
            int(traj.ss_active[k]), int(traj.sb_active[k]),
            int(traj.gb_active[k]), int(traj.lp_retention[k]),
            fmt(traj.seller_profit_cum[k]), fmt(buyer[k]),
            fmt(traj.lp_reward_cum[k]), fmt(traj.lp_imperm_loss[k]),
        )
        for k in range(len(traj))
    )
    return _write(rows, TRAJECTORY_COLUMNS)


def phase_csv(grid: PhaseGrid) -> str:
    rows = []
    for i, x in enumerate(grid.xs):
        g_ss, g_sb = fmt(grid.g_ss[i]), fmt(grid.g_sb[i])
        xs = fmt(x)
        for j, g in enumerate(grid.gs):
            rows.append((xs, fmt(g), ZONE_BY_CODE[int(grid.codes[i, j])].value, g_ss, g_sb))
    return _write(rows, PHASE_COLUMNS)


def curves_csv(grid: PhaseGrid) -> str:
    rows = ((fmt(x), fmt(grid.g_ss[i]), fmt(grid.g_sb[i])) for i, x in enumerate(grid.xs))
    return _write(rows, CURVE_COLUMNS)


def _parse(cell: str) -> float:
    return float("nan") if cell == "" else float(cell)


def _read(path_or_text: str | Path, header: tuple[str, ...]) -> list[list[str]]:
    text = Path(path_or_text).read_text() if isinstance(path_or_text, Path) else path_or_text
    rows = list(csv.reader(io.StringIO(text)))
    if tuple(rows[0]) != header:
        raise ValueError(f"unexpected header {rows[0]}")
    return rows[1:]


def read_trajectory_csv(source: str | Path) -> dict[str, np.ndarray]:
    rows = _read(source, TRAJECTORY_COLUMNS)
    out = {}
    for c, name in enumerate(TRAJECTORY_COLUMNS):
        if name.endswith("_active") or name == "lp_retention":
            out[name] = np.array([r[c] == "1" for r in rows], dtype=bool)
        else:
            out[name] = np.array([_parse(r[c]) for r in rows], dtype=np.float64)
    return out


def read_phase_csv(source: str | Path) -> dict[str, np.ndarray]:
    rows = _read(source, PHASE_COLUMNS)
    return {
        "x": np.array([_parse(r[0]) for r in rows]),
        "g": np.array([_parse(r[1]) for r in rows]),
        "zone": np.array([r[2] for r in rows]),
        "g_ss": np.array([_parse(r[3]) for r in rows]),
        "g_sb": np.array([_parse(r[4]) for r in rows]),
    }


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return None if math.isnan(value) else value
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def to_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=False) + "\n"
