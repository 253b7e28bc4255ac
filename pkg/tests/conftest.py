from pathlib import Path

import numpy as np
import pytest

from gaugeplastic.geometry import DiskBody, Grid, disk_domain, square_domain
from gaugeplastic.solver import FunctionalSpec, LinearSource, Problem, half_square, solve_double_obstacle

PROBLEMS_DIR = Path(__file__).resolve().parents[1] / "problems"


def make_problem(domain, body, tau=4.0, n=65, eps=0.0):
    grid = Grid.covering(domain.bounding_box, n)
    return Problem(domain, body, FunctionalSpec(half_square(), LinearSource(tau)), grid, eps)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def unit_disk():
    return disk_domain(1.0)


@pytest.fixture(scope="session")
def unit_square():
    return square_domain(1.0)


@pytest.fixture(scope="session")
def euclid():
    return DiskBody(1.0)


@pytest.fixture(scope="session")
def torsion_problem(unit_disk, euclid):
    return make_problem(unit_disk, euclid, tau=4.0, n=65)


@pytest.fixture(scope="session")
def torsion_solution(torsion_problem):
    return solve_double_obstacle(torsion_problem)


@pytest.fixture(scope="session")
def problems_dir():
    return PROBLEMS_DIR


@pytest.fixture(scope="session")
def problem_factory():
    return make_problem
