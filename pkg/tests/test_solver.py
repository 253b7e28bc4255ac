import numpy as np
import pytest
from numpy.testing import assert_allclose

from gaugeplastic.errors import InfeasibleEpsError
from gaugeplastic.solver import (
    FunctionalSpec,
    LinearSource,
    QuadraticForm,
    QuadraticSource,
    Region,
    SolverConfig,
    build_obstacles,
    energy,
    half_square,
    penalty,
    solve_double_obstacle,
    solve_penalized,
)
from gaugeplastic.solver.discretization import covered_fraction
from gaugeplastic.solver.obstacle import penalty_deriv, penalty_potential


def test_quadratic_form_validation():
    with pytest.raises(ValueError):
        QuadraticForm(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        QuadraticForm(np.array([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(ValueError):
        QuadraticForm(np.eye(3))
    with pytest.raises(ValueError):
        QuadraticSource(c=-1.0)


def test_ellipticity_bounds():
    F = QuadraticForm(np.array([[2.0, 0.0], [0.0, 0.5]]))
    assert F.ellipticity == pytest.approx((0.5, 2.0))
    Z = np.array([[1.0, 2.0]])
    assert F.value(Z) == pytest.approx([0.5 * (2.0 + 2.0)])
    assert_allclose(F.grad(Z), [[2.0, 1.0]])


def test_functional_audit():
    assert FunctionalSpec(half_square(), LinearSource(4.0)).audit() != []
    assert FunctionalSpec(half_square(), QuadraticSource(1.0, 1.0)).audit() == []
    bounded = FunctionalSpec(half_square(), QuadraticSource(1.0, 1.0), {"c8": 2.0, "q": 3.0})
    assert len(bounded.audit()) == 2


def test_with_tau_keeps_source_kind():
    spec = FunctionalSpec(half_square(), QuadraticSource(2.0, 1.0)).with_tau(5.0)
    assert isinstance(spec.g, QuadraticSource)
    assert spec.g.c == 2.0 and spec.tau == 5.0


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(step_rule="bfgs")
    with pytest.raises(ValueError):
        SolverConfig(backtrack=1.0)


def test_penalty_shape():
    delta = 1e-2
    t = np.array([-1.0, 0.0, 0.5 * delta, delta, 2 * delta])
    assert_allclose(penalty(t, delta), [0.0, 0.0, 0.25, 1.0, 3.0])
    # continuous at δ from both sides
    assert penalty(delta * (1 + 1e-12), delta) == pytest.approx(1.0)
    assert penalty_deriv(delta, delta) == pytest.approx(2.0 / delta)


def test_penalty_potential_is_primitive():
    delta = 1e-2
    t = np.linspace(-0.02, 0.05, 41)
    step = 1e-7
    fd = (penalty_potential(t + step, delta) - penalty_potential(t - step, delta)) / (2 * step)
    assert_allclose(fd, penalty(t, delta), atol=1e-5)


def test_stiffness_is_five_point_laplacian(unit_square, euclid, problem_factory):
    problem = problem_factory(unit_square, euclid, n=17)
    disc = problem.discretization
    K = disc.stiffness(np.eye(2)).toarray()
    center = disc.index[8, 8]
    assert K[center, center] == pytest.approx(4.0, rel=1e-5)
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        assert K[center, disc.index[8 + di, 8 + dj]] == pytest.approx(-1.0, rel=1e-5)
    assert K[center, disc.index[9, 9]] == pytest.approx(0.0, abs=1e-12)
    assert_allclose(K, K.T, atol=1e-12)


def test_energy_of_zero(torsion_problem):
    assert energy(torsion_problem, np.zeros(torsion_problem.grid.shape)) == 0.0


def test_covered_fraction():
    values = np.array([[1.0, 2.0, 3.0], [-1.0, -2.0, -3.0], [1.0, -1.0, -1.0], [-1.0, 1.0, 1.0], [1.0, 0.0, -1.0]])
    assert_allclose(covered_fraction(values), [1.0, 0.0, 0.25, 0.75, 0.5])


def test_energy_quadrature_covers_the_domain(unit_square, euclid, torsion_problem, problem_factory):
    square = problem_factory(unit_square, euclid, n=17)
    assert np.all(square.discretization.tri_cover == 1.0)
    disc = torsion_problem.discretization
    h = torsion_problem.grid.h
    assert abs(np.sum(disc.tri_area * disc.tri_cover) - np.pi) <= 3 * np.pi * h**2
    # The cut triangles counted at full area overshoot by a boundary strip
    assert np.sum(disc.tri_area) - np.pi > 10 * h**2


@pytest.mark.slow
def test_energy_converges_at_second_order(unit_square, euclid, problem_factory):
    energies = []
    for n in (33, 65, 129):
        solution = solve_double_obstacle(problem_factory(unit_square, euclid, tau=1.0, n=n))
        assert solution.converged
        assert not np.any(solution.regions.plastic)
        energies.append(energy(solution.problem, solution.u))
    slope = np.log2(abs(energies[0] - energies[1]) / abs(energies[1] - energies[2]))
    assert slope >= 1.8


def test_obstacles_without_mollification(torsion_problem):
    obstacles = build_obstacles(torsion_problem, 0.0)
    field = torsion_problem.field
    assert_allclose(obstacles.upper, field.d)
    assert_allclose(obstacles.lower, -field.dbar)
    assert obstacles.delta == 0.0


def test_torsion_disk(torsion_solution):
    solution = torsion_solution
    h = solution.grid.h
    assert solution.converged
    assert solution.kkt_residual <= 1e-10
    assert solution.evaluate([0.0, 0.0])[0] == pytest.approx(0.75, abs=2e-2)

    inside = solution.solved
    assert np.all(solution.u[inside] <= solution.upper[inside] + 1e-12)
    assert np.all(solution.u[inside] >= solution.lower[inside] - 1e-12)
    assert np.all(solution.u[~inside] == 0.0)

    r = np.hypot(solution.grid.points[..., 0], solution.grid.points[..., 1])
    plastic = solution.regions.plastic_plus
    assert not np.any(solution.regions.plastic_minus)
    assert np.min(r[plastic]) >= 0.5 - 2 * h
    ring = inside & (r >= 0.5 + 3 * h) & (r <= 1.0 - 2 * h)
    assert np.mean(plastic[ring]) >= 0.95
    assert np.any(solution.regions.labels == Region.FREE_BOUNDARY)


def test_torsion_energy_history_decreases(torsion_solution):
    history = torsion_solution.energy_history
    assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))
    assert torsion_solution.energy == pytest.approx(energy(torsion_solution.problem, torsion_solution.u))


def test_weak_source_gives_elastic_solution(unit_disk, euclid, problem_factory):
    problem = problem_factory(unit_disk, euclid, tau=1.0, n=129)
    solution = solve_double_obstacle(problem)
    assert solution.converged
    r2 = np.sum(solution.grid.points**2, axis=-1)
    inside = solution.solved
    assert_allclose(solution.u[inside], (1 - r2[inside]) / 4, atol=5e-3)
    assert not np.any(solution.regions.plastic)


def test_projected_gradient_rule_decreases_energy(torsion_problem):
    solution = solve_double_obstacle(torsion_problem, SolverConfig(max_iters=50, step_rule="gradient"))
    history = solution.energy_history
    assert len(history) > 1
    assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))
    assert solution.method == "double_obstacle/gradient"


def test_iteration_cap_returns_best_iterate(torsion_problem):
    solution = solve_double_obstacle(torsion_problem, SolverConfig(max_iters=1))
    assert not solution.converged
    assert solution.iterations == 1
    assert np.isfinite(solution.energy)


def test_penalized_tracks_double_obstacle(unit_disk, euclid, torsion_solution, problem_factory):
    eps, delta = 0.05, 1e-4
    problem = problem_factory(unit_disk, euclid, tau=4.0, n=65, eps=eps)
    solution = solve_penalized(problem, eps, delta)
    assert solution.converged and solution.method == "penalized"
    solved = solution.solved
    assert np.any(solved)
    gap = np.max(np.abs(solution.u - torsion_solution.u)[solved])
    assert gap <= 6 * eps + 10 * delta


def test_penalized_needs_feasible_eps(unit_disk, euclid, problem_factory):
    problem = problem_factory(unit_disk, euclid, n=33)
    with pytest.raises(InfeasibleEpsError):
        solve_penalized(problem, 1.0, 1e-4)
    with pytest.raises(ValueError):
        solve_penalized(problem, 0.0, 1e-4)


def test_problem_rejects_coarse_grid(unit_disk, euclid, problem_factory):
    with pytest.raises(ValueError):
        problem_factory(unit_disk, euclid, n=9)


def test_with_resolution_resamples_field(torsion_problem):
    finer = torsion_problem.with_resolution(33)
    assert finer.grid.shape == (33, 33)
    assert finer.field.d.shape == (33, 33)


@pytest.mark.slow
def test_torsion_disk_benchmark(unit_disk, euclid, problem_factory):
    problem = problem_factory(unit_disk, euclid, tau=4.0, n=257)
    solution = solve_double_obstacle(problem)
    h = solution.grid.h
    assert solution.converged
    assert solution.evaluate([0.0, 0.0])[0] == pytest.approx(0.75, abs=5e-3)
    r = np.hypot(solution.grid.points[..., 0], solution.grid.points[..., 1])
    plastic = solution.regions.plastic_plus
    assert np.min(r[plastic]) >= 0.5 - 2 * h
    elastic = solution.regions.labels == Region.ELASTIC
    assert np.max(r[elastic]) <= 0.5 + 2 * h


@pytest.mark.slow
def test_weak_source_energy_matches_exact_value(unit_disk, euclid, problem_factory):
    # u = (1 - r²)/4 gives ∫ ½|Du|² - u = π/16 - π/8
    solution = solve_double_obstacle(problem_factory(unit_disk, euclid, tau=1.0, n=257))
    assert solution.converged
    assert energy(solution.problem, solution.u) == pytest.approx(-np.pi / 16, rel=1e-3)


@pytest.mark.slow
def test_contact_and_gradient_plastic_sets_agree(unit_disk, euclid, problem_factory):
    regions = solve_double_obstacle(problem_factory(unit_disk, euclid, tau=4.0, n=257)).regions
    defined = ~np.isnan(regions.node_gauge)
    contact = regions.plastic & defined
    dual = regions.gradient_plastic & defined
    assert np.count_nonzero(contact & dual) / np.count_nonzero(contact | dual) >= 0.97


@pytest.mark.slow
def test_penalized_agrees_with_double_obstacle(unit_disk, euclid, problem_factory):
    eps, delta = 0.02, 1e-4
    reference = solve_double_obstacle(problem_factory(unit_disk, euclid, tau=4.0, n=257))
    solution = solve_penalized(problem_factory(unit_disk, euclid, tau=4.0, n=257, eps=eps), eps, delta)
    solved = solution.solved
    assert np.max(np.abs(solution.u - reference.u)[solved]) <= eps + 5 * delta
