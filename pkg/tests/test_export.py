import json

import numpy as np
from numpy.testing import assert_array_equal

from gaugeplastic.geometry import Grid, RidgeLabel, sample_field
from gaugeplastic.problem import read_field_csv, write_distance_field, write_field_csv, write_json, write_solution
from gaugeplastic.problem.export import GRID_HEADER


def test_field_csv_reads_back_exactly(tmp_path, rng):
    grid = Grid(5, 4, -1.0, 1.0, -0.3, 0.7)
    values = rng.normal(size=grid.shape)
    values[2, 1] = np.nan
    labels = rng.integers(0, 4, size=grid.shape)
    path = write_field_csv(tmp_path / "out" / "field.csv", grid, {"v": values, "label": labels})

    lines = path.read_text().splitlines()
    assert lines[0] == GRID_HEADER
    assert lines[2] == "# i,j,x,y,v,label"
    assert len(lines) == 3 + 5 * 4

    back_grid, columns = read_field_csv(path)
    assert back_grid == grid
    assert_array_equal(columns["v"], values)
    assert_array_equal(columns["label"], labels)
    assert_array_equal(columns["x"], grid.points[..., 0])


def test_distance_field_columns(tmp_path, torsion_problem):
    path = write_distance_field(tmp_path / "distance_field.csv", torsion_problem.field)
    _, columns = read_field_csv(path)
    assert set(columns) == {"i", "j", "x", "y", "d", "dbar", "label"}
    inside = torsion_problem.field.inside
    assert_array_equal(columns["d"][inside], torsion_problem.field.d[inside])
    assert_array_equal(columns["label"], torsion_problem.field.ridge_label)


def test_distance_field_labels_carry_the_ridge(tmp_path, unit_square, euclid):
    field = sample_field(unit_square, euclid, Grid.covering(unit_square.bounding_box, 17))
    _, columns = read_field_csv(write_distance_field(tmp_path / "distance_field.csv", field))
    assert columns["label"][4, 4] == RidgeLabel.MULTIPLICITY
    assert columns["label"][8, 4] == RidgeLabel.OFF


def test_solution_csv(tmp_path, torsion_solution):
    _, columns = read_field_csv(write_solution(tmp_path / "u.csv", torsion_solution))
    assert_array_equal(columns["u"], torsion_solution.u)
    assert_array_equal(columns["label"], torsion_solution.regions.labels)


def test_json_writes_null_for_non_finite(tmp_path):
    payload = {"a": float("inf"), "b": [1.0, float("nan")], "c": np.float64(2.5)}
    path = write_json(tmp_path / "nested" / "summary.json", payload)
    assert json.loads(path.read_text()) == {"a": None, "b": [1.0, None], "c": 2.5}
