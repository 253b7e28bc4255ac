"""
TOML problem files.

A problem file holds the body, domain, functional, grid, solver and verify
blocks of one run. Every numeric default lives in the schema below, so a file
dumped with ``dump_problem`` reparses to the same configuration.
"""

import logging
import re
import tomllib
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import tomli_w
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..errors import GaugePlasticError, ProblemParseError, ProblemValidationError
from ..geometry.convex_body import (
    ConvexBody,
    DiskBody,
    EllipseBody,
    PBallBody,
    PolygonBody,
    ReflectedBody,
    fourier_body,
    square_body,
)
from ..geometry.domain import BoundaryArc, CircularArc, CornerClass, Domain, SegmentArc
from ..geometry.grid import Grid
from ..geometry.shapes import PRESETS, elliptic_arc
from ..solver.functional import FunctionalSpec, LinearSource, QuadraticForm, QuadraticSource, half_square
from ..solver.obstacle import SolverConfig
from ..solver.problem import MIN_RESOLUTION, Problem
from ..solver_settings import settings
from ..verify.checks import VerifyConfig
from .file_validation import ValidationResult, detect_encoding, validate_problem_path

logger = logging.getLogger(__name__)

_TOML_POSITION = re.compile(r"line (\d+), column (\d+)")


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid")


# Body blocks


class _BodyBlock(_Block):
    reflect: bool = False

    def _base(self) -> ConvexBody:
        raise NotImplementedError

    def build(self) -> ConvexBody:
        body = self._base()
        return ReflectedBody(body) if self.reflect else body


class DiskBodyBlock(_BodyBlock):
    kind: Literal["disk"] = "disk"
    radius: float = 1.0

    def _base(self) -> ConvexBody:
        return DiskBody(self.radius)


class EllipseBodyBlock(_BodyBlock):
    kind: Literal["ellipse"]
    a: float
    b: float

    def _base(self) -> ConvexBody:
        return EllipseBody(self.a, self.b)


class PBallBodyBlock(_BodyBlock):
    kind: Literal["p_ball"]
    p: float

    def _base(self) -> ConvexBody:
        return PBallBody(self.p)


class PolygonBodyBlock(_BodyBlock):
    kind: Literal["polygon"]
    # x0, y0, x1, y1, ...
    vertices: List[float]

    @field_validator("vertices")
    @classmethod
    def _pairs(cls, v: List[float]) -> List[float]:
        if len(v) % 2 or len(v) < 6:
            raise ValueError("polygon vertices must be a flat list of at least three (x, y) pairs")
        return v

    def _base(self) -> ConvexBody:
        return PolygonBody([self.vertices[i : i + 2] for i in range(0, len(self.vertices), 2)])


class SquareBodyBlock(_BodyBlock):
    kind: Literal["square"]
    half_width: float = 1.0

    def _base(self) -> ConvexBody:
        return square_body(self.half_width)


class FourierBodyBlock(_BodyBlock):
    kind: Literal["fourier"]
    cos: List[float]
    sin: List[float] = Field(default_factory=list)

    def _base(self) -> ConvexBody:
        return fourier_body(self.cos, self.sin)


BodyBlock = Annotated[
    Union[DiskBodyBlock, EllipseBodyBlock, PBallBodyBlock, PolygonBodyBlock, SquareBodyBlock, FourierBodyBlock],
    Field(discriminator="kind"),
]


# Domain blocks


class SegmentBlock(_Block):
    type: Literal["segment"]
    start: Tuple[float, float]
    end: Tuple[float, float]

    def build(self) -> SegmentArc:
        return SegmentArc(self.start, self.end)


class CircularArcBlock(_Block):
    type: Literal["circular"]
    center: Tuple[float, float]
    radius: float
    angle0: float
    angle1: float

    def build(self) -> CircularArc:
        return CircularArc(self.center, self.radius, self.angle0, self.angle1)


class EllipticArcBlock(_Block):
    type: Literal["elliptic"]
    center: Tuple[float, float] = (0.0, 0.0)
    a: float
    b: float
    angle0: float
    angle1: float

    def build(self) -> BoundaryArc:
        return elliptic_arc(self.center, self.a, self.b, self.angle0, self.angle1)


ArcBlock = Annotated[Union[SegmentBlock, CircularArcBlock, EllipticArcBlock], Field(discriminator="type")]


class DomainBlock(_Block):
    kind: Literal[
        "disk", "square", "rectangle", "polygon", "l_shape", "ellipse", "annulus", "annular_sector", "loops"
    ] = "disk"
    params: Dict[str, Any] = Field(default_factory=dict)
    loops: Optional[List[List[ArcBlock]]] = None

    @model_validator(mode="after")
    def _loops_match_kind(self):
        if self.kind == "loops" and not self.loops:
            raise ValueError("domain kind 'loops' needs a nonempty 'loops' list")
        if self.kind != "loops" and self.loops:
            raise ValueError(f"domain kind '{self.kind}' does not take 'loops'")
        return self

    def build(self) -> Domain:
        if self.kind == "loops":
            return Domain([[arc.build() for arc in loop] for loop in self.loops])
        try:
            return PRESETS[self.kind](**self.params)
        except TypeError as e:
            raise ProblemValidationError(f"domain '{self.kind}': {e}") from e


# Functional, grid, solver and verify blocks


class FunctionalBlock(_Block):
    F: Literal["half_square", "quadratic_form"] = "half_square"
    A: Optional[List[List[float]]] = None
    g: Literal["linear", "quadratic"] = "linear"
    tau: float = 1.0
    c: float = 0.0
    bound_constants: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _matrix_matches_kind(self):
        if self.F == "quadratic_form" and self.A is None:
            raise ValueError("F = 'quadratic_form' needs the 2x2 matrix A")
        return self

    def build(self) -> FunctionalSpec:
        F = half_square() if self.F == "half_square" else QuadraticForm(self.A)
        g = LinearSource(self.tau) if self.g == "linear" else QuadraticSource(self.c, self.tau)
        return FunctionalSpec(F, g, dict(self.bound_constants) or None)


class GridBlock(_Block):
    n: int = Field(128, ge=MIN_RESOLUTION)
    ny: Optional[int] = Field(None, ge=MIN_RESOLUTION)
    padding: float = Field(0.0, ge=0.0)

    def build(self, domain: Domain) -> Grid:
        return Grid.covering(domain.bounding_box, self.n, self.ny, self.padding)


class SolverBlock(_Block):
    method: Literal["double_obstacle", "penalized", "smoothing"] = "double_obstacle"
    step_rule: Literal["newton", "gradient"] = "newton"
    max_iters: int = Field(500, ge=1)
    tol: float = Field(1e-10, gt=0.0)
    backtrack: float = Field(0.5, gt=0.0, lt=1.0)
    eps: float = Field(0.0, ge=0.0)
    delta: float = Field(1e-4, gt=0.0)
    smoothing_levels: int = Field(8, ge=1, le=10)

    @model_validator(mode="after")
    def _penalized_needs_eps(self):
        if self.method == "penalized" and self.eps == 0.0:
            raise ValueError("the penalized method needs eps > 0")
        return self

    def build(self) -> SolverConfig:
        return SolverConfig(self.max_iters, self.step_rule, self.tol, self.backtrack)


class VerifyBlock(_Block):
    ep_fraction: float = Field(default_factory=lambda: settings.EP_FRACTION_LIMIT, gt=0.0, le=1.0)
    ridge_gap_cells: float = Field(default_factory=lambda: settings.RIDGE_GAP_LIMIT, ge=0.0)
    segment_fraction: float = Field(default_factory=lambda: settings.SEGMENT_FRACTION_LIMIT, gt=0.0, le=1.0)
    w2inf_ratio: float = Field(default_factory=lambda: settings.W2INF_RATIO_LIMIT, gt=0.0)
    segment_samples: int = Field(50, ge=1)
    perturbations: int = Field(20, ge=1)
    seed: int = 0
    # Also solve at h/2 and h/4 for the W^{2,∞} stability check
    refine: bool = False

    def build(self) -> VerifyConfig:
        return VerifyConfig(
            ep_fraction=self.ep_fraction,
            ridge_gap_cells=self.ridge_gap_cells,
            segment_fraction=self.segment_fraction,
            w2inf_ratio=self.w2inf_ratio,
            segment_samples=self.segment_samples,
            perturbations=self.perturbations,
            seed=self.seed,
        )


class ProblemConfig(_Block):
    name: str = "problem"
    body: BodyBlock = Field(default_factory=DiskBodyBlock)
    domain: DomainBlock = Field(default_factory=DomainBlock)
    functional: FunctionalBlock = Field(default_factory=FunctionalBlock)
    grid: GridBlock = Field(default_factory=GridBlock)
    solver: SolverBlock = Field(default_factory=SolverBlock)
    verify: VerifyBlock = Field(default_factory=VerifyBlock)


# Parsing


def _decode_error(e: tomllib.TOMLDecodeError, source: str) -> ProblemParseError:
    match = _TOML_POSITION.search(str(e))
    line, column = (int(match.group(1)), int(match.group(2))) if match else (None, None)
    message = _TOML_POSITION.sub("", str(e)).replace("(at )", "").strip()
    return ProblemParseError(f"{source}: {message}", line=line, column=column)


def _parse_value(raw: str) -> Any:
    try:
        return tomllib.loads(f"value = {raw}")["value"]
    except tomllib.TOMLDecodeError:
        return raw


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """Apply ``section.key=value`` overrides; values are read as TOML literals, else as strings."""
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key.strip():
            raise ProblemParseError(f"override '{item}' is not of the form key=value")
        parts = key.strip().split(".")
        node = data
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ProblemParseError(f"override '{item}' descends into a non-table value", field=key.strip())
            node = child
        node[parts[-1]] = _parse_value(raw.strip())
    return data


def _from_dict(data: Dict[str, Any]) -> ProblemConfig:
    try:
        return ProblemConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        path = ".".join(str(p) for p in first["loc"])
        raise ProblemParseError(first["msg"], field=path or None) from e


def parse_problem(text: str, overrides: Sequence[str] = (), source: str = "<string>") -> ProblemConfig:
    """Parse problem-file text; raises ProblemParseError with line or field diagnostics."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise _decode_error(e, source) from e
    return _from_dict(apply_overrides(data, overrides))


def load_problem(path: Union[str, Path], overrides: Sequence[str] = ()) -> ProblemConfig:
    check = validate_problem_path(str(path))
    if not check.is_valid:
        raise ProblemParseError(f"{path}: {'; '.join(check.errors)}")
    for warning in check.warnings:
        logger.warning("%s: %s", path, warning)
    encoding = detect_encoding(str(path)) or "utf-8"
    try:
        text = Path(path).read_text(encoding=encoding)
    except (UnicodeDecodeError, LookupError) as e:
        raise ProblemParseError(f"{path}: cannot decode file ({e})") from e
    return parse_problem(text, overrides, source=str(path))


def dump_problem(config: ProblemConfig) -> str:
    """TOML text that reparses to ``config``."""
    return tomli_w.dumps(config.model_dump(mode="json", exclude_none=True))


# Building


def build_problem(config: ProblemConfig) -> Tuple[Problem, ValidationResult]:
    """Construct the numerical problem; orientation and body errors become ProblemValidationError."""
    result = ValidationResult()
    try:
        body = config.body.build()
        domain = config.domain.build()
        functional = config.functional.build()
        grid = config.grid.build(domain)
        problem = Problem(domain, body, functional, grid, config.solver.eps)
    except ProblemValidationError:
        raise
    except (GaugePlasticError, ValueError) as e:
        raise ProblemValidationError(str(e)) from e

    for warning in functional.audit():
        result.add_warning(warning)
    for warning in domain.assumption_warnings(body):
        result.add_warning(warning)
    for corner in domain.corners:
        if corner.corner_class == CornerClass.NONREENTRANT:
            continue
        result.add_warning(
            f"{corner.corner_class.value} corner at ({corner.point[0]:.6g}, {corner.point[1]:.6g})"
        )
    for warning in result.warnings:
        logger.warning("%s: %s", config.name, warning)
    return problem, result
