import dataclasses
import json

import numpy as np
import pytest

from gaugeplastic.geometry import square_body
from gaugeplastic.solver import solve_double_obstacle, solve_penalized
from gaugeplastic.verify import (
    Check,
    CheckStatus,
    VerificationReport,
    VerifyConfig,
    check_ep_characterization,
    check_euler_lagrange_signs,
    check_gradient_constraint,
    check_laplacian_monotonicity,
    check_ridge_noncontact,
    check_segment_plasticity,
    check_variational_inequality,
    check_w2inf_stability,
    interior_second_difference,
    run_all,
)


def test_torsion_solution_passes_every_check(torsion_solution):
    report = run_all(torsion_solution)
    assert report.passed, report.to_json()
    assert report["w2inf_stability"].status == CheckStatus.SKIPPED
    assert report["gradient_constraint"].status == CheckStatus.PASS
    assert report.warnings == []


@pytest.mark.parametrize(
    "check",
    [
        check_ep_characterization,
        check_ridge_noncontact,
        check_segment_plasticity,
        check_variational_inequality,
        check_euler_lagrange_signs,
    ],
)
def test_structural_checks_pass_on_torsion(torsion_solution, check):
    result = check(torsion_solution)
    assert result.status == CheckStatus.PASS, result.to_dict()


def test_scaled_solution_breaks_gradient_constraint(torsion_solution):
    broken = dataclasses.replace(torsion_solution, u=1.5 * torsion_solution.u)
    result = check_gradient_constraint(broken)
    assert result.status == CheckStatus.FAIL
    assert result.measured > result.threshold
    assert result.locations


def test_zero_function_meets_gradient_constraint(torsion_solution):
    zero = dataclasses.replace(torsion_solution, u=np.zeros_like(torsion_solution.u))
    result = check_gradient_constraint(zero)
    assert result.status == CheckStatus.PASS
    assert result.measured == 0.0


def test_laplacian_monotone_on_disk(torsion_problem):
    result = check_laplacian_monotonicity(torsion_problem.field, n_rays=20)
    assert result.status == CheckStatus.PASS
    assert result.measured == 1.0


def _distance_as_solution(template, problem):
    inside = problem.inside
    return dataclasses.replace(
        template,
        problem=problem,
        u=np.where(inside, problem.field.d, 0.0),
        solved=inside,
        lower=-problem.field.dbar,
        upper=problem.field.d,
    )


def test_kinked_function_fails_w2inf_stability(torsion_solution, torsion_problem):
    # d = 1 - |x| has a kink at the center, so second differences grow like 1/h
    sequence = [_distance_as_solution(torsion_solution, torsion_problem.with_resolution(n)) for n in (17, 33, 65)]
    maxima = [interior_second_difference(s) for s in sequence]
    assert maxima[1] / maxima[0] == pytest.approx(2.0, rel=1e-6)
    result = check_w2inf_stability(sequence)
    assert result.status == CheckStatus.FAIL
    assert result.measured == pytest.approx(2.0, rel=1e-6)


def test_w2inf_needs_three_solutions(torsion_solution):
    assert check_w2inf_stability([torsion_solution]).status == CheckStatus.SKIPPED


def test_nonregular_body_skips_and_marks_exploratory(unit_square, problem_factory):
    problem = problem_factory(unit_square, square_body(), n=33)
    solution = solve_double_obstacle(problem)
    report = run_all(solution)
    assert report["ep_characterization"].status == CheckStatus.SKIPPED
    assert report["laplacian_monotonicity"].status == CheckStatus.SKIPPED
    assert report["ridge_noncontact"].exploratory


def test_penalized_solution_skips_box_checks(unit_disk, euclid, problem_factory):
    problem = problem_factory(unit_disk, euclid, n=33, eps=0.1)
    solution = solve_penalized(problem, 0.1, 1e-4)
    report = run_all(solution, config=VerifyConfig(segment_samples=10))
    assert report["variational_inequality"].status == CheckStatus.SKIPPED
    assert report["euler_lagrange_signs"].status == CheckStatus.SKIPPED
    assert report["feasibility"].exploratory


def test_nonconverged_solution_is_flagged(torsion_solution):
    stopped = dataclasses.replace(torsion_solution, converged=False)
    assert run_all(stopped).warnings


def test_report_serialisation():
    report = VerificationReport(
        [
            Check("a", CheckStatus.PASS, "anchor", measured=float("inf"), threshold=1.0),
            Check("b", CheckStatus.FAIL, "anchor", measured=2.0, threshold=1.0, exploratory=True),
            Check("c", CheckStatus.SKIPPED, "anchor", reason="no data"),
        ]
    )
    assert report.passed
    data = json.loads(report.to_json())
    assert data["checks"][0]["measured"] is None
    assert data["counts"] == {"pass": 1, "fail": 1, "skipped": 1}
    with pytest.raises(KeyError):
        report["missing"]


def test_failed_check_fails_report():
    report = VerificationReport([Check("a", CheckStatus.FAIL, "anchor", measured=2.0, threshold=1.0)])
    assert not report.passed


@pytest.mark.slow
def test_torsion_solutions_are_w2inf_stable(unit_disk, euclid, problem_factory):
    sequence = [solve_double_obstacle(problem_factory(unit_disk, euclid, n=n)) for n in (33, 65, 129)]
    result = check_w2inf_stability(sequence)
    assert result.status == CheckStatus.PASS
    assert result.measured <= 1.2


@pytest.mark.slow
def test_rounded_annular_sector_structural_checks(problems_dir):
    from gaugeplastic.problem import build_problem, load_problem

    config = load_problem(problems_dir / "annular_sector.toml")
    problem, _ = build_problem(config)
    solution = solve_double_obstacle(problem, config.solver.build())
    report = run_all(solution, config=config.verify.build())
    for name in ("variational_inequality", "euler_lagrange_signs", "segment_plasticity", "ridge_noncontact"):
        assert report[name].status == CheckStatus.PASS, report[name].to_dict()
