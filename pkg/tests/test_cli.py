import json

import pytest

from gaugeplastic.main import (
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_SOLVER_FAILURE,
    RunConfig,
    build_parser,
    main,
)
from gaugeplastic.problem import load_problem, parse_problem, read_field_csv


@pytest.fixture
def torsion_file(problems_dir):
    return str(problems_dir / "torsion_disk.toml")


def test_no_arguments_prints_help(capsys):
    assert main([]) == EXIT_OK
    assert "gaugeplastic" in capsys.readouterr().out


def test_parser_flags():
    args = build_parser().parse_args(
        ["gauge-eval", "p.toml", "--point", "1", "2", "--point", "0", "1", "--set", "grid.n=40"]
    )
    assert args.point == [[1.0, 2.0], [0.0, 1.0]]
    assert args.set == ["grid.n=40"]


def test_run_config_rejects_unknown_subcommand():
    with pytest.raises(ValueError):
        RunConfig("plot", "p.toml")


def test_solve_writes_outputs(torsion_file, tmp_path):
    assert main(["solve", torsion_file, "--grid", "33", "--out", str(tmp_path)]) == EXIT_OK
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["converged"]
    assert summary["plastic_cell_count"] > 0
    assert summary["grid"] == [33, 33]
    grid, columns = read_field_csv(tmp_path / "u.csv")
    assert grid.shape == (33, 33)
    assert set(columns) >= {"u", "label"}


def test_gauge_eval(torsion_file, tmp_path):
    code = main(["gauge-eval", torsion_file, "--grid", "17", "--point", "0.5", "0", "--out", str(tmp_path)])
    assert code == EXIT_OK
    report = json.loads((tmp_path / "gauge_eval.json").read_text())
    assert report["points"][0]["gauge"] == pytest.approx(0.5)
    assert report["points"][0]["grad_gauge"] == pytest.approx([1.0, 0.0])


def test_ridge_subcommand(problems_dir, tmp_path):
    path = str(problems_dir / "square_euclid.toml")
    assert main(["ridge", path, "--grid", "33", "--out", str(tmp_path)]) == EXIT_OK
    _, columns = read_field_csv(tmp_path / "ridge.csv")
    assert {"residual", "label", "label_bar"} <= set(columns)
    assert not (tmp_path / "u.csv").exists()


def test_distance_field_subcommand(torsion_file, tmp_path):
    assert main(["distance-field", torsion_file, "--grid", "17", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "distance_field.csv").exists()


def test_verify_elastic_torsion(torsion_file, tmp_path, capsys):
    code = main(["verify", torsion_file, "--grid", "33", "--tau", "1", "--out", str(tmp_path)])
    assert code == EXIT_OK
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["passed"]
    assert "gradient_constraint" in capsys.readouterr().out


def test_dump_config_round_trip(torsion_file, tmp_path, capsys):
    code = main(
        ["solve", torsion_file, "--grid", "40", "--set", "solver.max_iters=7", "--dump-config", "--out", str(tmp_path)]
    )
    assert code == EXIT_OK
    dumped = parse_problem(capsys.readouterr().out)
    assert dumped == load_problem(torsion_file, ["grid.n=40", "solver.max_iters=7"])
    assert not (tmp_path / "u.csv").exists()


def test_unparseable_file(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[grid\nn = 3\n")
    assert main(["solve", str(bad), "--out", str(tmp_path)]) == EXIT_INPUT_ERROR
    assert main(["solve", str(tmp_path / "missing.toml"), "--out", str(tmp_path)]) == EXIT_INPUT_ERROR


def test_infeasible_eps_is_an_input_error(torsion_file, tmp_path):
    args = ["solve", torsion_file, "--grid", "33", "--set", "solver.method=penalized", "--eps", "5"]
    code = main(args + ["--out", str(tmp_path)])
    assert code == EXIT_INPUT_ERROR


def test_iteration_cap_is_a_solver_failure(torsion_file, tmp_path):
    code = main(["solve", torsion_file, "--grid", "33", "--set", "solver.max_iters=1", "--out", str(tmp_path)])
    assert code == EXIT_SOLVER_FAILURE
    assert not json.loads((tmp_path / "summary.json").read_text())["converged"]
