import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..errors import HypothesisError
from ..geometry.convex_body import ConvexBody, hausdorff_distance, smooth_approximation
from ..geometry.domain import CornerClass
from .obstacle import Solution, SolverConfig, solve_double_obstacle
from .problem import Problem

logger = logging.getLogger(__name__)

MAX_LEVEL = 10


@dataclass
class PipelineResult:
    """Stage solutions for K_k = polar(B_k), B_k the level-k smoothing of K°."""

    solutions: List[Solution]
    bodies: List[ConvexBody]
    differences: List[float]
    hausdorff: List[float]
    constraint_audit: float
    warnings: List[str] = field(default_factory=list)

    @property
    def final(self) -> Solution:
        return self.solutions[-1]

    def differences_decrease(self, start_level: int = 3) -> bool:
        """Successive L∞ differences decrease from ``start_level`` on."""
        tail = self.differences[max(start_level - 2, 0) :]
        return all(b < a for a, b in zip(tail, tail[1:]))


def smoothing_pipeline(problem: Problem, k_max: int, cfg: Optional[SolverConfig] = None) -> List[Solution]:
    """Solve with the smoothed bodies K_1 … K_{k_max}; see ``run_smoothing_pipeline``."""
    return run_smoothing_pipeline(problem, k_max, cfg).solutions


def run_smoothing_pipeline(problem: Problem, k_max: int, cfg: Optional[SolverConfig] = None) -> PipelineResult:
    """Solve the problem for smooth uniformly convex approximations of K.

    The constraint set K° is approximated from outside by B_k, and stage k
    solves with K_k = polar(B_k) ⊆ K. Differences are measured in L∞ over the
    inside nodes; the final solution is audited against the original γ°_K.

    Raises:
        HypothesisError: the domain has a strict reentrant corner.
        ValueError: k_max outside 1..10.
    """
    if not 1 <= k_max <= MAX_LEVEL:
        raise ValueError(f"k_max must lie in 1..{MAX_LEVEL}, got {k_max}")
    warnings: List[str] = []
    for corner in problem.domain.corners:
        if corner.corner_class == CornerClass.STRICT_REENTRANT:
            raise HypothesisError(
                f"the smoothing pipeline needs a domain without reentrant corners; "
                f"corner at {corner.point.tolist()} opens {np.degrees(corner.opening_angle):.1f} degrees"
            )
        if corner.corner_class == CornerClass.NONSTRICT_REENTRANT:
            warnings.append(f"tangent-continuous corner at {corner.point.tolist()}")
    for message in warnings:
        logger.warning("Smoothing pipeline: %s", message)

    target = problem.body.polar_body()
    solutions: List[Solution] = []
    bodies: List[ConvexBody] = []
    hausdorff: List[float] = []
    differences: List[float] = []
    inside = problem.inside

    for k in range(1, k_max + 1):
        outer = smooth_approximation(target, k)
        body_k = problem.body if outer is target else outer.polar_body()
        stage = problem.with_body(body_k)
        solution = solve_double_obstacle(stage, cfg)
        if solutions:
            differences.append(float(np.max(np.abs(solution.u - solutions[-1].u)[inside], initial=0.0)))
        solutions.append(solution)
        bodies.append(body_k)
        hausdorff.append(hausdorff_distance(outer, target))
        logger.info(
            "Smoothing level %d: Hausdorff %.3e, energy %.10g%s",
            k,
            hausdorff[-1],
            solution.energy,
            f", change {differences[-1]:.3e}" if differences else "",
        )

    final = solutions[-1]
    audit = problem.discretization.max_gauge_of_gradient(problem.body, final.u_active)
    return PipelineResult(solutions, bodies, differences, hausdorff, audit, warnings)
