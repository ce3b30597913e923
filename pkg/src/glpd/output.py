"""CSV writers with a fixed number format, so reruns are byte-identical."""
from __future__ import annotations

import csv
import math
from pathlib import Path

CURVE_HEADER = ("step", "displacement_mm", "force_N", "newton_iters", "tangent_mode")
SNAPSHOT_HEADER = ("elem", "gp", "x", "y", "s11", "s22", "s33", "s12", "f", "E", "sigma_eq")
LOG_HEADER = ("step", "iter", "residual_N", "mode")
POINT_HEADER = (
    "step", "s11", "s22", "s33", "s12", "s13", "s23",
    "sigma_eq", "sigma_m", "f", "E", "phi", "iterations", "status",
)
TANGENT_HEADER = ("case", "block", "max_rel_error", "fd_step")


def fmt(v) -> str:
    if isinstance(v, (bool, int, str)):
        return str(v)
    v = float(v)
    if math.isnan(v):
        return "nan"
    out = f"{v:.12e}"
    return "0.000000000000e+00" if out.startswith("-0.000000000000e") else out


def write_csv(path, header, rows) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def read_csv(path) -> list[dict]:
    with open(Path(path), newline="") as fh:
        return list(csv.DictReader(fh))
