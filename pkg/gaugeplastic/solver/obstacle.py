"""
Solvers for the gradient-constrained minimization through its double-obstacle
form -d̄_K ≤ u ≤ d_K, and a penalized approximation with mollified obstacles.
"""

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import Dict, List, Optional

import numpy as np
import scipy.sparse as sp
from scipy import ndimage
from scipy.interpolate import RegularGridInterpolator
from scipy.sparse.linalg import spsolve

from ..errors import InfeasibleEpsError, MaxItersExceededError, NewtonStallError
from ..geometry.convex_body import as_points
from ..geometry.grid import Grid
from .problem import Problem

logger = logging.getLogger(__name__)

# Armijo constants
SUFFICIENT_DECREASE = 1e-4
MIN_STEP = 1e-14
# Obstacle gap δ_ε = DELTA_FACTOR·C₁·ε, inside the admissible window (4C₁ε, 5C₁ε).
DELTA_FACTOR = 4.5


class Region(IntEnum):
    ELASTIC = 0
    PLASTIC_PLUS = 1
    PLASTIC_MINUS = 2
    FREE_BOUNDARY = 3
    EXTERIOR = 4


@dataclass
class SolverConfig:
    max_iters: int = 500
    step_rule: str = "newton"
    tol: float = 1e-10
    backtrack: float = 0.5

    def __post_init__(self):
        if self.step_rule not in ("newton", "gradient"):
            raise ValueError(f"unknown step rule {self.step_rule!r}; use 'newton' or 'gradient'")
        if self.max_iters < 1 or self.tol <= 0.0 or not 0.0 < self.backtrack < 1.0:
            raise ValueError("solver config needs max_iters >= 1, tol > 0 and backtrack in (0, 1)")


@dataclass
class Obstacles:
    lower: np.ndarray
    upper: np.ndarray
    eps: float
    delta: float
    feasible: np.ndarray


def _mollifier(grid: Grid, eps: float) -> np.ndarray:
    """Standard mollifier exp(-1/(1-|x/ε|²)) sampled on the grid offsets, summing to one."""
    mx = int(np.floor(eps / grid.hx))
    my = int(np.floor(eps / grid.hy))
    ox = grid.hx * np.arange(-mx, mx + 1)
    oy = grid.hy * np.arange(-my, my + 1)
    r2 = (ox[:, None] ** 2 + oy[None, :] ** 2) / eps**2
    kernel = np.zeros_like(r2)
    inner = r2 < 1.0
    kernel[inner] = np.exp(-1.0 / (1.0 - r2[inner]))
    return kernel / kernel.sum()


def build_obstacles(problem: Problem, eps: Optional[float] = None) -> Obstacles:
    """Obstacles φ_ε = -η_ε * d̄_K + δ_ε and ψ_ε = η_ε * d_K; ε = 0 gives (-d̄_K, d_K)."""
    eps = problem.mollification_eps if eps is None else float(eps)
    if eps < 0.0:
        raise ValueError(f"mollification eps must be >= 0, got {eps}")
    field_ = problem.field
    inside = field_.inside
    if eps == 0.0:
        return Obstacles(-field_.dbar, field_.d.copy(), 0.0, 0.0, inside.copy())

    kernel = _mollifier(problem.grid, eps)
    if kernel.size == 1:
        logger.warning("eps = %g is below the grid spacing; mollification has no effect", eps)
    delta = DELTA_FACTOR * problem.body.c_upper * eps
    upper = ndimage.convolve(field_.d, kernel, mode="constant", cval=0.0)
    lower = -ndimage.convolve(field_.dbar, kernel, mode="constant", cval=0.0) + delta
    upper[~inside] = 0.0
    lower[~inside] = 0.0

    feasible = inside & (lower < upper)
    if not np.any(feasible):
        raise InfeasibleEpsError(f"eps = {eps:g} leaves no node with φ_ε < ψ_ε")
    logger.info("Mollified obstacles: eps=%g, delta=%g, %d feasible nodes", eps, delta, np.count_nonzero(feasible))
    return Obstacles(lower, upper, eps, delta, feasible)


def energy(problem: Problem, u: np.ndarray) -> float:
    """Discrete I[u]: F(∇_T u) integrated over T ∩ U plus lumped g(u).

    Differs from the solver's objective only on triangles cut by ∂U, which the
    objective counts at full area.
    """
    disc = problem.discretization
    u = np.asarray(u, dtype=float)
    v = disc.from_grid(u) if u.shape == problem.grid.shape else u
    density = problem.functional.F.value(disc.gradients(v))
    return float((disc.tri_area * disc.tri_cover) @ density + disc.weights @ problem.functional.g.value(v))


@dataclass
class RegionMap:
    labels: np.ndarray
    gradient_plastic: np.ndarray
    node_gauge: np.ndarray
    tol_plastic: float
    dual_tol: float

    @property
    def plastic_plus(self) -> np.ndarray:
        return self.labels == Region.PLASTIC_PLUS

    @property
    def plastic_minus(self) -> np.ndarray:
        return self.labels == Region.PLASTIC_MINUS

    @property
    def plastic(self) -> np.ndarray:
        return self.plastic_plus | self.plastic_minus

    def counts(self) -> Dict[str, int]:
        return {region.name.lower(): int(np.count_nonzero(self.labels == region)) for region in Region}


@dataclass
class Solution:
    u: np.ndarray
    energy: float
    iterations: int
    kkt_residual: float
    converged: bool
    problem: Problem
    lower: np.ndarray
    upper: np.ndarray
    method: str
    solved: np.ndarray
    energy_history: List[float] = field(default_factory=list)

    @property
    def grid(self) -> Grid:
        return self.problem.grid

    @property
    def u_active(self) -> np.ndarray:
        return self.problem.discretization.from_grid(self.u)

    @cached_property
    def regions(self) -> RegionMap:
        return classify_regions(self)

    def evaluate(self, x) -> np.ndarray:
        interp = RegularGridInterpolator((self.grid.x, self.grid.y), self.u, method="linear")
        return interp(as_points(x))

    def max_gauge_of_gradient(self) -> float:
        return self.problem.discretization.max_gauge_of_gradient(self.problem.body, self.u_active)

    def summary(self) -> Dict[str, object]:
        return {
            "method": self.method,
            "energy": self.energy,
            "iterations": self.iterations,
            "kkt_residual": self.kkt_residual,
            "converged": self.converged,
            "max_gauge_of_gradient": self.max_gauge_of_gradient(),
            "plastic_cell_count": int(np.count_nonzero(self.regions.plastic)),
        }


def _quadratic_parts(problem: Problem):
    disc = problem.discretization
    K = disc.stiffness(problem.functional.F.A)
    w = disc.weights
    g = problem.functional.g

    def objective(u):
        return float(0.5 * u @ (K @ u) + w @ g.value(u))

    def gradient(u):
        return K @ u + w * g.deriv(u)

    return K, w, g, objective, gradient


def solve_double_obstacle(problem: Problem, cfg: Optional[SolverConfig] = None) -> Solution:
    """Minimize the discrete energy over -d̄_K ≤ u ≤ d_K on the inside nodes.

    ``cfg.step_rule`` selects projected Newton with an ε-binding set along the
    projection arc ("newton") or projected gradient with backtracking
    ("gradient"). On iteration exhaustion the best iterate is returned with
    ``converged=False``.
    """
    cfg = cfg or SolverConfig()
    disc = problem.discretization
    obstacles = build_obstacles(problem, 0.0)
    lo = disc.from_grid(obstacles.lower)
    up = disc.from_grid(obstacles.upper)

    K, w, g, objective, gradient = _quadratic_parts(problem)
    H = sp.csr_matrix(K + sp.diags(w * g.second_deriv(np.zeros_like(w))))
    diag = H.diagonal()
    c8, c9 = problem.functional.F.ellipticity
    step0 = 1.0 / (c9 * 8.0 / problem.grid.h**2 + float(np.max(g.second_deriv(np.zeros(1)))))
    binding_cap = 1e-3 * max(1.0, float(np.max(up, initial=0.0)))

    u = np.clip(np.zeros_like(lo), lo, up)
    current = objective(u)
    history = [current]
    kkt = np.inf
    converged = False
    iterations = 0

    for iterations in range(1, cfg.max_iters + 1):
        gr = gradient(u)
        kkt = float(np.max(np.abs(u - np.clip(u - gr / diag, lo, up)), initial=0.0))
        if kkt <= cfg.tol:
            converged = True
            iterations -= 1
            break

        if cfg.step_rule == "newton":
            eps_k = min(binding_cap, kkt)
            bind = ((u <= lo + eps_k) & (gr > 0.0)) | ((u >= up - eps_k) & (gr < 0.0))
            free = np.flatnonzero(~bind)
            d = np.where(bind, -gr / diag, 0.0)
            if free.size:
                d[free] = spsolve(sp.csc_matrix(H[free][:, free]), -gr[free])
            slope = -(gr[free] @ d[free])
            alpha = 1.0
            while True:
                trial = np.clip(u + alpha * d, lo, up)
                value = objective(trial)
                decrease = SUFFICIENT_DECREASE * (alpha * slope + gr[bind] @ (u[bind] - trial[bind]))
                if current - value >= decrease:
                    break
                alpha *= cfg.backtrack
                if alpha < MIN_STEP:
                    break
        else:
            alpha = step0
            while True:
                trial = np.clip(u - alpha * gr / w, lo, up)
                value = objective(trial)
                move = trial - u
                if value <= current + gr @ move + 0.5 / alpha * (w @ (move * move)):
                    break
                alpha *= cfg.backtrack
                if alpha < MIN_STEP:
                    break

        if alpha < MIN_STEP or value > current:
            logger.warning("Line search stalled at iteration %d (kkt %.3e)", iterations, kkt)
            break
        u = trial
        current = value
        history.append(current)
        logger.debug("iter %d: energy %.12g, kkt %.3e, step %.3e", iterations, current, kkt, alpha)

    if not converged:
        logger.warning(
            "Double-obstacle solve stopped after %d iterations without converging (kkt %.3e)",
            iterations,
            kkt,
        )

    logger.info(
        "Double-obstacle solve (%s): %d iterations, energy %.10g, kkt %.3e",
        cfg.step_rule,
        iterations,
        current,
        kkt,
    )
    return Solution(
        u=disc.to_grid(u),
        energy=energy(problem, u),
        iterations=iterations,
        kkt_residual=kkt,
        converged=converged,
        problem=problem,
        lower=obstacles.lower,
        upper=obstacles.upper,
        method=f"double_obstacle/{cfg.step_rule}",
        solved=disc.active.copy(),
        energy_history=history,
    )


def penalty(t: np.ndarray, delta: float) -> np.ndarray:
    """β_δ: zero on (-∞, 0], t²/δ² on (0, δ], (2t - δ)/δ beyond; C¹, convex, increasing."""
    t = np.asarray(t, dtype=float)
    return np.where(t <= 0.0, 0.0, np.where(t <= delta, t * t / delta**2, (2.0 * t - delta) / delta))


def penalty_deriv(t: np.ndarray, delta: float) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.where(t <= 0.0, 0.0, np.where(t <= delta, 2.0 * t / delta**2, 2.0 / delta))


def penalty_potential(t: np.ndarray, delta: float) -> np.ndarray:
    """Primitive of β_δ vanishing on (-∞, 0]."""
    t = np.asarray(t, dtype=float)
    return np.where(
        t <= 0.0,
        0.0,
        np.where(t <= delta, t**3 / (3.0 * delta**2), delta / 3.0 + (t * t - delta * t) / delta),
    )


def solve_penalized(
    problem: Problem,
    eps: Optional[float] = None,
    delta: float = 1e-4,
    cfg: Optional[SolverConfig] = None,
) -> Solution:
    """Damped Newton on -div DF(Du) + g'(u) - β_δ(φ_ε - u) + β_δ(u - ψ_ε) = 0.

    Unknowns are the nodes of U_ε = {φ_ε < ψ_ε}; the remaining inside nodes
    carry the boundary value u = φ_ε.
    """
    cfg = cfg or SolverConfig()
    eps = problem.mollification_eps if eps is None else float(eps)
    if eps <= 0.0:
        raise ValueError("the penalized solve needs eps > 0")
    if delta <= 0.0:
        raise ValueError("the penalized solve needs delta > 0")

    disc = problem.discretization
    obstacles = build_obstacles(problem, eps)
    lo = disc.from_grid(obstacles.lower)
    up = disc.from_grid(obstacles.upper)
    free_mask = disc.from_grid(obstacles.feasible).astype(bool)
    free = np.flatnonzero(free_mask)

    K, w, g, objective, gradient = _quadratic_parts(problem)
    K_ff = sp.csc_matrix(K[free][:, free])

    def merit(u):
        return objective(u) + w[free] @ (
            penalty_potential(lo[free] - u[free], delta) + penalty_potential(u[free] - up[free], delta)
        )

    def residual(u):
        r = gradient(u) - w * penalty(lo - u, delta) + w * penalty(u - up, delta)
        return r[free]

    u = np.where(free_mask, np.clip(0.0, lo, up), lo)
    current = merit(u)
    res = residual(u)
    kkt = float(np.max(np.abs(res / w[free]), initial=0.0))
    history = [objective(u)]
    converged = False
    iterations = 0

    for iterations in range(1, cfg.max_iters + 1):
        curvature = g.second_deriv(u[free])
        curvature = curvature + penalty_deriv(lo[free] - u[free], delta) + penalty_deriv(u[free] - up[free], delta)
        J = K_ff + sp.diags(w[free] * curvature)
        step = spsolve(sp.csc_matrix(J), -res)
        slope = float(res @ step)

        alpha = 1.0
        while True:
            trial = u.copy()
            trial[free] += alpha * step
            value = merit(trial)
            if value <= current + SUFFICIENT_DECREASE * alpha * slope:
                break
            alpha *= cfg.backtrack
            if alpha < MIN_STEP:
                raise NewtonStallError(
                    f"penalized Newton stalled at iteration {iterations} (residual {kkt:.3e})"
                )

        u = trial
        current = value
        res = residual(u)
        kkt = float(np.max(np.abs(res / w[free]), initial=0.0))
        history.append(objective(u))
        size = alpha * float(np.max(np.abs(step), initial=0.0))
        logger.debug("iter %d: merit %.12g, residual %.3e, step %.3e", iterations, current, kkt, size)
        if size <= cfg.tol:
            converged = True
            break

    if not converged:
        raise MaxItersExceededError(
            f"penalized Newton did not converge in {cfg.max_iters} iterations (residual {kkt:.3e})"
        )

    logger.info(
        "Penalized solve: eps=%g, delta=%g, %d iterations, residual %.3e",
        eps,
        delta,
        iterations,
        kkt,
    )
    return Solution(
        u=disc.to_grid(u),
        energy=energy(problem, u),
        iterations=iterations,
        kkt_residual=kkt,
        converged=True,
        problem=problem,
        lower=obstacles.lower,
        upper=obstacles.upper,
        method="penalized",
        solved=disc.to_grid(free_mask.astype(float)) > 0.5,
        energy_history=history,
    )


def classify_regions(
    solution: Solution,
    problem: Optional[Problem] = None,
    tol_plastic: Optional[float] = None,
    dual_tol: Optional[float] = None,
) -> RegionMap:
    """Elastic/plastic labels by obstacle contact, plus the gradient-gauge labels.

    Defaults: ``tol_plastic = 1e-9·(1 + max d_K)`` and ``dual_tol = h/2``.
    """
    problem = problem or solution.problem
    disc = problem.discretization
    inside = solution.solved
    u = solution.u
    if tol_plastic is None:
        tol_plastic = 1e-9 * (1.0 + float(np.max(solution.upper, initial=0.0)))
    if dual_tol is None:
        dual_tol = 0.5 * problem.grid.h

    plus = inside & (solution.upper - u <= tol_plastic)
    minus = inside & ~plus & (u - solution.lower <= tol_plastic)
    labels = np.full(problem.grid.shape, Region.EXTERIOR, dtype=int)
    labels[inside] = Region.ELASTIC
    labels[plus] = Region.PLASTIC_PLUS
    labels[minus] = Region.PLASTIC_MINUS

    plastic = plus | minus
    near_plastic = ndimage.binary_dilation(plastic, structure=ndimage.generate_binary_structure(2, 1))
    labels[(labels == Region.ELASTIC) & near_plastic] = Region.FREE_BOUNDARY

    grads = disc.node_gradients(disc.from_grid(u))
    node_gauge = np.full(problem.grid.shape, np.nan)
    defined = ~np.isnan(grads[:, 0])
    values = np.full(len(grads), np.nan)
    values[defined] = problem.body.polar_gauge(grads[defined])
    node_gauge[disc.active] = values
    with np.errstate(invalid="ignore"):
        gradient_plastic = inside & (node_gauge >= 1.0 - dual_tol)

    return RegionMap(labels, gradient_plastic, node_gauge, float(tol_plastic), float(dual_tol))
