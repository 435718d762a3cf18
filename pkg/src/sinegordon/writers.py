"""CSV tables and legacy-VTK snapshots."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .energy import EnergySample
from .grid import Field, GridSpec

ENERGY_HEADER = ["n", "t", "kinetic", "gradient", "potential", "total"]
ERROR_HEADER = ["level", "dt", "h", "t", "err_u", "err_v", "err_grad_u", "order_u", "order_v"]


def _num(x: float) -> str:
    # 17 significant digits round-trip every double
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x:.16e}"


def write_energy_csv(path, series) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ENERGY_HEADER)
        for s in series:
            w.writerow([s.n] + [_num(getattr(s, k)) for k in ENERGY_HEADER[1:]])


def read_energy_csv(path) -> list[EnergySample]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [EnergySample(int(r["n"]), *(float(r[k]) for k in ENERGY_HEADER[1:]))
                for r in reader]


def write_error_csv(path, rows) -> None:
    """One line per (level, checkpoint); order cells are empty on the coarsest level."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ERROR_HEADER)
        for row in rows:
            for t in sorted(row.errors):
                e = row.errors[t]
                w.writerow([row.level, _num(row.dt), _num(row.h), _num(t), _num(e.err_u),
                            _num(e.err_v), _num(e.err_grad_u),
                            _num(row.observed_order_u.get(t)), _num(row.observed_order_v.get(t))])


def read_error_csv(path) -> list[dict]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for r in csv.DictReader(fh):
            rec = {k: (float(v) if v != "" else None) for k, v in r.items()}
            rec["level"] = int(r["level"])
            out.append(rec)
    return out


def write_vtk_snapshot(path, field: Field | np.ndarray, grid: GridSpec, t: float,
                       name: str = "u") -> None:
    """Legacy ASCII STRUCTURED_POINTS file with one scalar array, i varying fastest."""
    values = field.values if isinstance(field, Field) else np.asarray(field, dtype=float)
    n = grid.n
    lines = [
        "# vtk DataFile Version 3.0",
        f"sine-Gordon snapshot t={t:.17g}",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {n} {n} 1",
        f"ORIGIN {grid.x_min:.17g} {grid.y_min:.17g} 0",
        f"SPACING {grid.h:.17g} {grid.h:.17g} 1",
        f"POINT_DATA {n * n}",
        f"SCALARS {name} double 1",
        "LOOKUP_TABLE default",
    ]
    lines += [f"{x:.17g}" for x in values.T.ravel()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_vtk_snapshot(path) -> dict:
    """Parse a file written by :func:`write_vtk_snapshot`; raises ``ValueError`` if malformed."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if len(lines) < 10 or not lines[0].startswith("# vtk DataFile Version"):
        raise ValueError("not a legacy VTK file")
    if lines[2].strip() != "ASCII" or lines[3].strip() != "DATASET STRUCTURED_POINTS":
        raise ValueError("expected ASCII STRUCTURED_POINTS")
    head = {}
    for ln in lines[4:10]:
        key, *rest = ln.split()
        head[key] = rest
    dims = [int(d) for d in head["DIMENSIONS"]]
    npts = int(head["POINT_DATA"][0])
    if dims[0] * dims[1] * dims[2] != npts:
        raise ValueError("DIMENSIONS and POINT_DATA disagree")
    if "SCALARS" not in head or head.get("LOOKUP_TABLE") != ["default"]:
        raise ValueError("missing SCALARS / LOOKUP_TABLE")
    data = np.array([float(x) for x in lines[10:] if x.strip()])
    if data.size != npts:
        raise ValueError(f"expected {npts} values, found {data.size}")
    return {
        "title": lines[1],
        "dimensions": dims,
        "origin": [float(x) for x in head["ORIGIN"]],
        "spacing": [float(x) for x in head["SPACING"]],
        "name": head["SCALARS"][0],
        "values": data.reshape(dims[1], dims[0]).T,
    }
