"""
Writers for grid fields (CSV) and summaries or reports (JSON).

Field files start with two comment lines, the grid header
``# nx ny xmin xmax ymin ymax`` and its values, then a commented column row,
then one line per node. Floats are printed with 17 significant digits so a
reread reproduces the doubles exactly.
"""

import json
import math
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from ..geometry.distance import DistanceField
from ..geometry.grid import Grid
from ..solver.obstacle import Solution

PathLike = Union[str, Path]

GRID_HEADER = "# nx ny xmin xmax ymin ymax"
INTEGER_COLUMNS = {"i", "j", "label", "label_bar", "location"}


def _prepare(path: PathLike) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def write_field_csv(path: PathLike, grid: Grid, columns: Dict[str, np.ndarray]) -> Path:
    """Write ``i,j,x,y`` followed by the given per-node columns."""
    out = _prepare(path)
    ii, jj = np.meshgrid(np.arange(grid.nx), np.arange(grid.ny), indexing="ij")
    pts = grid.points
    names = ["i", "j", "x", "y", *columns]
    data = [ii, jj, pts[..., 0], pts[..., 1], *(np.asarray(c) for c in columns.values())]
    table = np.stack([np.asarray(c, dtype=float).ravel() for c in data], axis=1)
    fmt = ["%d" if name in INTEGER_COLUMNS else "%.17g" for name in names]
    header = "\n".join(
        [
            GRID_HEADER[2:],
            f"{grid.nx} {grid.ny} {grid.xmin!r} {grid.xmax!r} {grid.ymin!r} {grid.ymax!r}",
            ",".join(names),
        ]
    )
    np.savetxt(out, table, fmt=fmt, delimiter=",", header=header, comments="# ")
    return out


def read_field_csv(path: PathLike) -> Tuple[Grid, Dict[str, np.ndarray]]:
    """Inverse of ``write_field_csv``; columns come back as (nx, ny) arrays."""
    with open(path, encoding="utf-8") as f:
        lines = [f.readline() for _ in range(3)]
    if lines[0].strip() != GRID_HEADER:
        raise ValueError(f"{path}: missing grid header")
    nx, ny, *box = lines[1].lstrip("# ").split()
    grid = Grid(int(nx), int(ny), *(float(v) for v in box))
    names = lines[2].lstrip("# ").strip().split(",")
    table = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    columns = {name: table[:, k].reshape(grid.shape) for k, name in enumerate(names)}
    return grid, columns


def write_distance_field(path: PathLike, field: DistanceField) -> Path:
    return write_field_csv(
        path,
        field.grid,
        {"d": field.d, "dbar": field.dbar, "label": field.ridge_label},
    )


def write_ridge_field(path: PathLike, field: DistanceField) -> Path:
    return write_field_csv(
        path,
        field.grid,
        {
            "residual": field.residual,
            "residual_bar": field.residual_bar,
            "label": field.ridge_label,
            "label_bar": field.ridge_label_bar,
        },
    )


def write_solution(path: PathLike, solution: Solution) -> Path:
    return write_field_csv(path, solution.grid, {"u": solution.u, "label": solution.regions.labels})


def _finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    if isinstance(value, np.generic):
        return _finite(value.item())
    return value


def write_json(path: PathLike, payload: Union[Dict, List]) -> Path:
    """JSON with non-finite floats written as null."""
    out = _prepare(path)
    out.write_text(json.dumps(_finite(payload), indent=2) + "\n", encoding="utf-8")
    return out
