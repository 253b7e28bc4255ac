import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    GaugePlasticError,
    HypothesisError,
    InfeasibleEpsError,
    ProblemParseError,
    ProblemValidationError,
    SolverError,
)
from .geometry.convex_body import unit_directions
from .problem import (
    ProblemConfig,
    build_problem,
    dump_problem,
    format_validation_message,
    load_problem,
    validate_output_dir,
    write_distance_field,
    write_json,
    write_ridge_field,
    write_solution,
)
from .solver import Problem, Solution, run_smoothing_pipeline, solve_double_obstacle, solve_penalized
from .solver_settings import settings
from .verify import VerificationReport, run_all

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("gauge-eval", "distance-field", "ridge", "solve", "verify", "pipeline")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_SOLVER_FAILURE = 3


@dataclass
class RunConfig:
    subcommand: str
    problem_path: str
    output_dir: str = field(default_factory=lambda: settings.OUTPUT_DIR)
    overrides: List[str] = field(default_factory=list)
    dump_config: bool = False
    points: List[Tuple[float, float]] = field(default_factory=list)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")


def _body_report(problem: Problem, points: Sequence[Tuple[float, float]]) -> Dict[str, object]:
    body = problem.body
    x = np.asarray(points, dtype=float) if points else unit_directions(8)
    rows = []
    for p in x:
        row = {
            "point": p.tolist(),
            "gauge": float(body.gauge(p)),
            "polar_gauge": float(body.polar_gauge(p)),
        }
        try:
            row["grad_gauge"] = body.grad_gauge(p).tolist()
        except GaugePlasticError as e:
            row["grad_gauge"] = None
            row["note"] = str(e)
        rows.append(row)
    return {
        "body": repr(body),
        "c_lower": body.c_lower,
        "c_upper": body.c_upper,
        "smooth": body.is_smooth,
        "strictly_convex": body.is_strictly_convex,
        "symmetric": body.is_symmetric,
        "points": rows,
    }


def _solve(problem: Problem, config: ProblemConfig) -> Tuple[Solution, Dict[str, object]]:
    solver = config.solver
    cfg = solver.build()
    extra: Dict[str, object] = {}
    if solver.method == "penalized":
        solution = solve_penalized(problem, solver.eps, solver.delta, cfg)
    elif solver.method == "smoothing":
        result = run_smoothing_pipeline(problem, solver.smoothing_levels, cfg)
        solution = result.final
        extra["smoothing"] = {
            "differences": result.differences,
            "hausdorff": result.hausdorff,
            "constraint_audit": result.constraint_audit,
            "differences_decrease": result.differences_decrease(),
            "warnings": result.warnings,
        }
    else:
        solution = solve_double_obstacle(problem, cfg)
    return solution, extra


def _refinements(problem: Problem, config: ProblemConfig, first: Solution) -> List[Solution]:
    """The solution at h together with solves at h/2 and h/4."""
    n = problem.grid.nx
    solutions = [first]
    for m in (2 * n - 1, 4 * n - 3):
        print(f"🧭 Refining to {m}x{m} nodes...")
        solutions.append(_solve(problem.with_resolution(m), config)[0])
    return solutions


def _summary(config: ProblemConfig, problem: Problem, solution: Solution, extra: Dict[str, object]):
    summary = {
        "name": config.name,
        "tau": problem.functional.tau,
        "grid": list(problem.grid.shape),
        "h": problem.grid.h,
        **solution.summary(),
        "regions": solution.regions.counts(),
    }
    summary.update(extra)
    return summary


def _verify(
    config: ProblemConfig, problem: Problem, solution: Solution, out: Path
) -> VerificationReport:
    refinements = _refinements(problem, config, solution) if config.verify.refine else None
    report = run_all(solution, refinements, config.verify.build())
    write_json(out / "report.json", report.to_dict())
    for check in report.checks:
        icon = {"pass": "✅", "fail": "❌", "skipped": "⏭️"}[check.status.value]
        note = " (exploratory)" if check.exploratory else ""
        print(f"{icon} {check.name}: {check.status.value}{note}")
    for warning in report.warnings:
        print(f"⚠️ {warning}")
    return report


def run(config: RunConfig) -> int:
    """Execute one subcommand and return the process exit code."""
    try:
        out_check = validate_output_dir(config.output_dir)
        if not out_check.is_valid:
            print(format_validation_message(out_check))
            return EXIT_INPUT_ERROR

        problem_config = load_problem(config.problem_path, config.overrides)
        if config.dump_config:
            print(dump_problem(problem_config), end="")
            return EXIT_OK

        print(f"🧭 Loading problem '{problem_config.name}' from {config.problem_path}")
        problem, validation = build_problem(problem_config)
        if validation.warnings:
            print(format_validation_message(validation))
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)

        if config.subcommand == "gauge-eval":
            path = write_json(out / "gauge_eval.json", _body_report(problem, config.points))
            print(f"✅ Wrote {path}")
            return EXIT_OK

        if config.subcommand in ("distance-field", "pipeline"):
            path = write_distance_field(out / "distance_field.csv", problem.field)
            print(f"✅ Wrote {path}")

        if config.subcommand in ("ridge", "pipeline"):
            path = write_ridge_field(out / "ridge.csv", problem.field)
            ridge = int(np.count_nonzero(problem.field.ridge_mask()))
            print(f"✅ Wrote {path} ({ridge} ridge nodes)")

        if config.subcommand in ("distance-field", "ridge"):
            return EXIT_OK

        solution, extra = _solve(problem, problem_config)
        if config.subcommand in ("solve", "pipeline"):
            write_solution(out / "u.csv", solution)
            path = write_json(out / "summary.json", _summary(problem_config, problem, solution, extra))
            print(f"✅ Wrote {out / 'u.csv'} and {path}")
        if not solution.converged:
            print(f"❌ Solver did not converge (kkt residual {solution.kkt_residual:.3e})")
            return EXIT_SOLVER_FAILURE
        if config.subcommand == "solve":
            return EXIT_OK

        report = _verify(problem_config, problem, solution, out)
        if not report.passed:
            print("❌ Verification failed")
            return EXIT_VERIFY_FAILED
        print("✅ All checks passed or skipped")
        return EXIT_OK

    except KeyboardInterrupt:
        print("\n👋 Interrupted")
        return EXIT_SOLVER_FAILURE
    except ProblemParseError as e:
        print(f"❌ Could not parse problem file: {e}")
        return EXIT_INPUT_ERROR
    except (ProblemValidationError, InfeasibleEpsError, HypothesisError) as e:
        print(f"❌ Invalid problem: {e}")
        return EXIT_INPUT_ERROR
    except SolverError as e:
        print(f"❌ Solver failure: {e}")
        return EXIT_SOLVER_FAILURE
    except GaugePlasticError as e:
        print(f"❌ {type(e).__name__}: {e}")
        return EXIT_SOLVER_FAILURE
    except ImportError as e:
        print(f"❌ Import error: {e}")
        print("💡 Make sure all dependencies are installed")
        return EXIT_SOLVER_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Gauge distances, ridges and gradient-constrained minimizers in the plane",
        prog="gaugeplastic",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("problem", help="TOML problem file")
    common.add_argument("--grid", type=int, metavar="N", help="grid nodes per axis")
    common.add_argument("--tau", type=float, metavar="X", help="source strength τ")
    common.add_argument("--eps", type=float, metavar="X", help="obstacle mollification radius")
    common.add_argument("--delta", type=float, metavar="X", help="penalty width")
    common.add_argument("--out", default=settings.OUTPUT_DIR, metavar="DIR", help="output directory")
    common.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a problem-file entry, e.g. solver.max_iters=200",
    )
    common.add_argument("--dump-config", action="store_true", help="print the effective problem file and exit")

    helps = {
        "gauge-eval": "Evaluate the gauge, its polar and gradient at sample points",
        "distance-field": "Sample d_K and d̄_K on the grid",
        "ridge": "Label ridge nodes of d_K and d̄_K",
        "solve": "Solve the gradient-constrained problem",
        "verify": "Solve and run the structural checks",
        "pipeline": "Distance field, solve and verify in sequence",
    }
    for name in SUBCOMMANDS:
        sub = subparsers.add_parser(name, parents=[common], help=helps[name])
        if name == "gauge-eval":
            sub.add_argument(
                "--point",
                nargs=2,
                type=float,
                action="append",
                default=[],
                metavar=("X", "Y"),
                help="evaluation point (repeatable)",
            )
    return parser


def _flag_overrides(args: argparse.Namespace) -> List[str]:
    overrides = list(args.set)
    for flag, key in (("grid", "grid.n"), ("tau", "functional.tau"), ("eps", "solver.eps"), ("delta", "solver.delta")):
        value = getattr(args, flag)
        if value is not None:
            overrides.append(f"{key}={value!r}")
    return overrides


def main(argv: Optional[Sequence[str]] = None):
    """Main function that runs when the gaugeplastic command is called"""
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)

    # If no subcommand is provided, show help
    if not argv:
        parser.print_help()
        return EXIT_OK

    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_INPUT_ERROR

    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    config = RunConfig(
        subcommand=args.command,
        problem_path=args.problem,
        output_dir=args.out,
        overrides=_flag_overrides(args),
        dump_config=args.dump_config,
        points=[tuple(p) for p in getattr(args, "point", [])],
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
