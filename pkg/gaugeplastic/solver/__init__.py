from .discretization import Discretization
from .functional import FunctionalSpec, LinearSource, QuadraticForm, QuadraticSource, half_square
from .obstacle import (
    Obstacles,
    Region,
    RegionMap,
    Solution,
    SolverConfig,
    build_obstacles,
    classify_regions,
    energy,
    penalty,
    solve_double_obstacle,
    solve_penalized,
)
from .problem import Problem
from .smoothing import PipelineResult, run_smoothing_pipeline, smoothing_pipeline

__all__ = [
    "Discretization",
    "FunctionalSpec",
    "LinearSource",
    "Obstacles",
    "PipelineResult",
    "Problem",
    "QuadraticForm",
    "QuadraticSource",
    "Region",
    "RegionMap",
    "Solution",
    "SolverConfig",
    "build_obstacles",
    "classify_regions",
    "energy",
    "half_square",
    "penalty",
    "run_smoothing_pipeline",
    "smoothing_pipeline",
    "solve_double_obstacle",
    "solve_penalized",
]
