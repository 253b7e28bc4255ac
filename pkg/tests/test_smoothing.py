import numpy as np
import pytest

from gaugeplastic.errors import HypothesisError
from gaugeplastic.geometry import PolygonBody, l_shape_domain
from gaugeplastic.solver import run_smoothing_pipeline, smoothing_pipeline

DIAMOND = PolygonBody([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


def test_reentrant_corner_rejected(euclid, problem_factory):
    problem = problem_factory(l_shape_domain(1.0), euclid, n=33)
    with pytest.raises(HypothesisError):
        run_smoothing_pipeline(problem, 2)


def test_level_range(torsion_problem):
    with pytest.raises(ValueError):
        run_smoothing_pipeline(torsion_problem, 0)
    with pytest.raises(ValueError):
        run_smoothing_pipeline(torsion_problem, 11)


def test_smooth_body_is_left_alone(unit_disk, euclid, problem_factory):
    problem = problem_factory(unit_disk, euclid, n=33)
    result = run_smoothing_pipeline(problem, 3)
    assert result.hausdorff == [0.0, 0.0, 0.0]
    assert all(body is euclid for body in result.bodies)
    assert result.differences == pytest.approx([0.0, 0.0], abs=1e-14)
    assert result.warnings == []


def test_polygonal_body_stages(unit_square, problem_factory):
    problem = problem_factory(unit_square, DIAMOND, n=33)
    result = run_smoothing_pipeline(problem, 4)
    assert len(result.solutions) == 4
    assert len(result.differences) == 3
    assert all(b < a for a, b in zip(result.hausdorff, result.hausdorff[1:]))
    assert all(body.is_smooth and body.is_strictly_convex for body in result.bodies)
    assert all(solution.converged for solution in result.solutions)
    assert result.final is result.solutions[-1]
    assert np.isfinite(result.constraint_audit)


def test_smoothing_pipeline_returns_solutions(unit_square, problem_factory):
    problem = problem_factory(unit_square, DIAMOND, n=25)
    solutions = smoothing_pipeline(problem, 2)
    assert len(solutions) == 2
    assert solutions[0].grid == problem.grid


@pytest.mark.slow
def test_polygonal_body_converges(unit_square, problem_factory):
    problem = problem_factory(unit_square, DIAMOND, n=65)
    result = run_smoothing_pipeline(problem, 8)
    assert result.differences_decrease()
    assert result.constraint_audit <= 1.01
