import numpy as np
import pytest

from gaugeplastic.errors import ProblemParseError, ProblemValidationError
from gaugeplastic.geometry import CornerClass, DiskBody, Location, ReflectedBody
from gaugeplastic.problem import (
    ProblemConfig,
    apply_overrides,
    build_problem,
    dump_problem,
    format_validation_message,
    load_problem,
    parse_problem,
    validate_output_dir,
    validate_problem_path,
)
from gaugeplastic.solver import QuadraticSource

ANNULUS_LOOPS = """
name = "ring"

[domain]
kind = "loops"
loops = [
    [{ type = "circular", center = [0.0, 0.0], radius = 1.0, angle0 = 0.0, angle1 = 6.283185307179586 }],
    [{ type = "circular", center = [0.0, 0.0], radius = 0.5, angle0 = 6.283185307179586, angle1 = 0.0 }],
]
"""

HALF_ELLIPSE_LOOPS = """
[domain]
kind = "loops"
loops = [
    [
        { type = "elliptic", a = 2.0, b = 1.0, angle0 = 0.0, angle1 = 3.141592653589793 },
        { type = "segment", start = [-2.0, 0.0], end = [2.0, 0.0] },
    ],
]
"""


def test_empty_file_gives_defaults():
    config = parse_problem("")
    assert config.body.kind == "disk"
    assert config.domain.kind == "disk"
    assert config.grid.n == 128
    assert config.solver.method == "double_obstacle"
    assert config.solver.max_iters == 500
    assert config.functional.tau == 1.0


def test_dump_round_trip(problems_dir):
    for path in sorted(problems_dir.glob("*.toml")):
        config = load_problem(path)
        assert parse_problem(dump_problem(config)) == config, path.name


def test_overrides_are_toml_literals():
    config = parse_problem(
        "[grid]\nn = 64\n",
        ["grid.n=33", "functional.tau=2.5", "solver.step_rule=gradient", "name=\"run\""],
    )
    assert config.grid.n == 33
    assert config.functional.tau == 2.5
    assert config.solver.step_rule == "gradient"
    assert config.name == "run"


def test_malformed_override():
    with pytest.raises(ProblemParseError):
        apply_overrides({}, ["grid.n"])
    with pytest.raises(ProblemParseError):
        apply_overrides({"name": "x"}, ["name.sub=1"])


def test_unknown_key_names_its_field():
    with pytest.raises(ProblemParseError) as info:
        parse_problem("[solver]\nbogus = 1\n")
    assert info.value.field == "solver.bogus"


def test_syntax_error_carries_position():
    with pytest.raises(ProblemParseError) as info:
        parse_problem('name = "x"\n[grid\nn = 3\n')
    assert info.value.line == 2


def test_odd_polygon_vertices():
    with pytest.raises(ProblemParseError) as info:
        parse_problem('[body]\nkind = "polygon"\nvertices = [1.0, 0.0, 0.0]\n')
    assert info.value.field.startswith("body")


def test_penalized_method_needs_eps():
    with pytest.raises(ProblemParseError):
        parse_problem('[solver]\nmethod = "penalized"\n')
    config = parse_problem('[solver]\nmethod = "penalized"\neps = 0.02\n')
    assert config.solver.eps == 0.02


def test_grid_below_minimum_resolution():
    with pytest.raises(ProblemParseError) as info:
        parse_problem("[grid]\nn = 8\n")
    assert info.value.field == "grid.n"


def test_missing_and_binary_files(tmp_path):
    with pytest.raises(ProblemParseError):
        load_problem(tmp_path / "missing.toml")
    binary = tmp_path / "blob.toml"
    binary.write_bytes(bytes(range(256)) * 4)
    with pytest.raises(ProblemParseError):
        load_problem(binary)


def test_oversized_file_rejected(tmp_path):
    big = tmp_path / "big.toml"
    big.write_text("# padding\n" * 30000)
    result = validate_problem_path(str(big))
    assert not result.is_valid
    assert "exceeds" in format_validation_message(result)


def test_unexpected_extension_warns(tmp_path):
    path = tmp_path / "problem.txt"
    path.write_text('name = "x"\n')
    result = validate_problem_path(str(path))
    assert result.is_valid and result.warnings


def test_output_dir_must_be_a_directory(tmp_path):
    target = tmp_path / "file"
    target.write_text("")
    assert not validate_output_dir(str(target)).is_valid
    assert validate_output_dir(str(tmp_path / "new" / "dir")).is_valid


def test_build_loops_domain():
    problem, result = build_problem(parse_problem(ANNULUS_LOOPS + "\n[grid]\nn = 33\n"))
    assert len(problem.domain.loops) == 2
    assert problem.grid.shape == (33, 33)
    assert result.is_valid


def test_build_loops_with_elliptic_arc():
    config = parse_problem(HALF_ELLIPSE_LOOPS + "\n[grid]\nn = 65\nny = 17\n")
    problem, result = build_problem(config)
    domain = problem.domain
    assert result.is_valid
    assert [arc.kind for arc in domain.arcs] == ["parametric", "segment"]
    assert domain.contains(np.array([0.0, 0.5])) == Location.INSIDE
    assert domain.contains(np.array([0.0, -0.5])) == Location.OUTSIDE
    # Curvature of the ellipse at (0, b) is b/a²
    assert domain.boundary_frame(0, 0.5).curvature == pytest.approx(0.25)
    assert parse_problem(dump_problem(config)) == config


def test_elliptic_arc_needs_positive_axes():
    with pytest.raises(ProblemValidationError):
        build_problem(parse_problem(HALF_ELLIPSE_LOOPS.replace("b = 1.0", "b = -1.0")))


def test_ellipse_preset():
    problem, _ = build_problem(parse_problem('[domain]\nkind = "ellipse"\nparams = { a = 2.0, b = 1.0 }\n'))
    assert problem.domain.boundary_frame(0, 0.0).curvature == pytest.approx(2.0)


def test_clockwise_outer_loop_is_a_validation_error():
    counterclockwise = "angle0 = 0.0, angle1 = 6.283185307179586"
    text = ANNULUS_LOOPS.replace(counterclockwise, "angle0 = 6.283185307179586, angle1 = 0.0", 1)
    with pytest.raises(ProblemValidationError):
        build_problem(parse_problem(text))


def test_bad_preset_parameters():
    with pytest.raises(ProblemValidationError):
        build_problem(parse_problem('[domain]\nkind = "disk"\nparams = { width = 2.0 }\n'))


def test_build_reflected_body_and_quadratic_source():
    config = parse_problem(
        '[body]\nkind = "disk"\nradius = 2.0\nreflect = true\n'
        '[functional]\ng = "quadratic"\nc = 1.0\ntau = 3.0\n[grid]\nn = 33\n'
    )
    problem, _ = build_problem(config)
    assert isinstance(problem.body, ReflectedBody)
    assert isinstance(problem.functional.g, QuadraticSource)
    assert problem.functional.tau == 3.0


def test_build_warns_about_linear_source_and_soft_corners(problems_dir):
    config = load_problem(problems_dir / "annular_sector.toml", ["grid.n=33", "grid.ny=17"])
    problem, result = build_problem(config)
    assert any("linear g" in w for w in result.warnings)
    assert any(CornerClass.NONSTRICT_REENTRANT.value in w for w in result.warnings)
    assert all(c.corner_class != CornerClass.STRICT_REENTRANT for c in problem.domain.corners)


def test_example_problems_build(problems_dir):
    for path in sorted(problems_dir.glob("*.toml")):
        config = load_problem(path, ["grid.n=17"] + (["grid.ny=17"] if "annular" in path.name else []))
        problem, _ = build_problem(config)
        assert np.any(problem.inside), path.name


def test_default_config_builds():
    problem, _ = build_problem(ProblemConfig(grid={"n": 17}))
    assert isinstance(problem.body, DiskBody)
