"""
Planar domains with oriented piecewise-C² boundaries.

Arcs are parametrised on t ∈ [0, 1] and oriented so that ν = (-y₂', y₁')
points into the domain: the outer loop runs counterclockwise and holes run
clockwise. Signed curvature κ = (y₁'y₂'' - y₂'y₁'')/|y'|³ is positive where
the boundary bends toward the interior.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum, IntEnum
from functools import cached_property
from typing import Callable, List, Literal, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import CornerPointError, InvalidDomainError
from .convex_body import ConvexBody, as_points, norm, perp

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
CUSP_TOL = 1e-6
STRAIGHT_ANGLE_TOL = 1e-6
SMOOTH_JOIN_TOL = 1e-9
ENDPOINT_TOL = 1e-12


class Location(IntEnum):
    OUTSIDE = 0
    INSIDE = 1
    BOUNDARY = 2


class CornerClass(str, Enum):
    NONREENTRANT = "nonreentrant"
    STRICT_REENTRANT = "strict_reentrant"
    NONSTRICT_REENTRANT = "nonstrict_reentrant"


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _chord_angle(x: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Signed angle swept by the straight path p → q seen from x."""
    a = p - x
    b = q - x
    return np.arctan2(_cross(a, b), np.sum(a * b, axis=-1))


def _segment_distance(x: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    edge = q - p
    length2 = np.sum(edge * edge, axis=-1)
    s = np.clip(np.sum((x - p) * edge, axis=-1) / np.where(length2 > 0, length2, 1.0), 0.0, 1.0)
    return norm(x - (p + s[..., None] * edge))


class BoundaryArc(ABC):
    kind: str = "arc"

    @abstractmethod
    def point(self, t) -> np.ndarray:
        """y(t)."""

    @abstractmethod
    def derivative(self, t) -> np.ndarray:
        """y'(t)."""

    @abstractmethod
    def second_derivative(self, t) -> np.ndarray:
        """y''(t)."""

    @abstractmethod
    def winding_angle(self, x: np.ndarray) -> np.ndarray:
        """Signed angle swept by y(t) - x for points x of shape (N, 2)."""

    @abstractmethod
    def euclidean_distance(self, x: np.ndarray) -> np.ndarray:
        """Euclidean distance from points (N, 2) to the arc."""

    @property
    def start(self) -> np.ndarray:
        return self.point(0.0)

    @property
    def end(self) -> np.ndarray:
        return self.point(1.0)

    def curvature(self, t) -> np.ndarray:
        d1 = self.derivative(t)
        d2 = self.second_derivative(t)
        return _cross(d1, d2) / norm(d1) ** 3

    def unit_normal(self, t) -> np.ndarray:
        d1 = self.derivative(t)
        return perp(d1) / norm(d1)[..., None]

    def sample(self, n: int) -> np.ndarray:
        return self.point(np.linspace(0.0, 1.0, n))

    @cached_property
    def speed_bound(self) -> float:
        return float(np.max(norm(self.derivative(np.linspace(0.0, 1.0, 257)))))


class SegmentArc(BoundaryArc):
    kind = "segment"

    def __init__(self, start, end):
        self.p0 = np.asarray(start, dtype=float)
        self.p1 = np.asarray(end, dtype=float)
        if self.p0.shape != (2,) or self.p1.shape != (2,):
            raise InvalidDomainError("segment endpoints must be 2D points")
        if np.allclose(self.p0, self.p1):
            raise InvalidDomainError("segment has zero length")

    def point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.p0 + t[..., None] * (self.p1 - self.p0)

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(self.p1 - self.p0, t.shape + (2,)).copy()

    def second_derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.zeros(t.shape + (2,))

    def curvature(self, t) -> np.ndarray:
        return np.zeros(np.shape(t))

    def winding_angle(self, x: np.ndarray) -> np.ndarray:
        return _chord_angle(x, self.p0, self.p1)

    def euclidean_distance(self, x: np.ndarray) -> np.ndarray:
        return _segment_distance(x, self.p0, self.p1)

    def __repr__(self) -> str:
        return f"SegmentArc({self.p0.tolist()} -> {self.p1.tolist()})"


class CircularArc(BoundaryArc):
    """Arc of a circle from angle0 to angle1; counterclockwise when angle1 > angle0."""

    kind = "circular_arc"

    def __init__(self, center, radius: float, angle0: float, angle1: float):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.angle0 = float(angle0)
        self.angle1 = float(angle1)
        self.sweep = self.angle1 - self.angle0
        if self.center.shape != (2,) or not self.radius > 0.0:
            raise InvalidDomainError("circular arc needs a 2D center and a positive radius")
        if self.sweep == 0.0 or abs(self.sweep) > TWO_PI + 1e-12:
            raise InvalidDomainError("circular arc sweep must be nonzero and at most 2π")

    def _angle(self, t) -> np.ndarray:
        return self.angle0 + np.asarray(t, dtype=float) * self.sweep

    def point(self, t) -> np.ndarray:
        a = self._angle(t)
        return self.center + self.radius * np.stack([np.cos(a), np.sin(a)], axis=-1)

    def derivative(self, t) -> np.ndarray:
        a = self._angle(t)
        return self.radius * self.sweep * np.stack([-np.sin(a), np.cos(a)], axis=-1)

    def second_derivative(self, t) -> np.ndarray:
        a = self._angle(t)
        return -self.radius * self.sweep**2 * np.stack([np.cos(a), np.sin(a)], axis=-1)

    def curvature(self, t) -> np.ndarray:
        return np.full(np.shape(t), np.sign(self.sweep) / self.radius)

    def winding_angle(self, x: np.ndarray) -> np.ndarray:
        # Split into sub-arcs of at most π/2; each contributes its chord angle
        # plus ±2π inside the circular segment cut off by that chord.
        pieces = int(np.ceil(abs(self.sweep) / (0.5 * np.pi)))
        angles = self.angle0 + self.sweep * np.arange(pieces + 1) / pieces
        half = 0.5 * abs(self.sweep) / pieces
        rel = x - self.center
        dist = norm(rel)
        total = np.zeros(len(x))
        for a0, a1 in zip(angles[:-1], angles[1:]):
            p = self.center + self.radius * np.array([np.cos(a0), np.sin(a0)])
            q = self.center + self.radius * np.array([np.cos(a1), np.sin(a1)])
            mid = 0.5 * (a0 + a1)
            beyond_chord = rel @ np.array([np.cos(mid), np.sin(mid)]) > self.radius * np.cos(half)
            in_segment = beyond_chord & (dist < self.radius)
            total += _chord_angle(x, p, q) + np.sign(self.sweep) * TWO_PI * in_segment
        return total

    def euclidean_distance(self, x: np.ndarray) -> np.ndarray:
        rel = x - self.center
        ang = np.arctan2(rel[:, 1], rel[:, 0])
        offset = np.mod((ang - self.angle0) * np.sign(self.sweep), TWO_PI)
        on_span = offset <= abs(self.sweep)
        radial = np.abs(norm(rel) - self.radius)
        ends = np.minimum(norm(x - self.start), norm(x - self.end))
        return np.where(on_span, np.minimum(radial, ends), ends)

    def __repr__(self) -> str:
        return (
            f"CircularArc(center={self.center.tolist()}, radius={self.radius}, "
            f"angles={self.angle0:.6g}->{self.angle1:.6g})"
        )


class ParametricArc(BoundaryArc):
    """User curve t ↦ y(t) with its first two derivatives, t ∈ [0, 1].

    Membership and Euclidean distance use a dense polyline; everything else
    uses the exact derivatives.
    """

    kind = "parametric"

    def __init__(
        self,
        curve: Callable[[np.ndarray], np.ndarray],
        derivative: Callable[[np.ndarray], np.ndarray],
        second_derivative: Callable[[np.ndarray], np.ndarray],
        polyline_points: int = 2048,
        label: str = "parametric",
    ):
        self._curve = curve
        self._d1 = derivative
        self._d2 = second_derivative
        self.label = label
        self._polyline = np.asarray(curve(np.linspace(0.0, 1.0, polyline_points + 1)), dtype=float)

    def point(self, t) -> np.ndarray:
        return np.asarray(self._curve(np.asarray(t, dtype=float)), dtype=float)

    def derivative(self, t) -> np.ndarray:
        return np.asarray(self._d1(np.asarray(t, dtype=float)), dtype=float)

    def second_derivative(self, t) -> np.ndarray:
        return np.asarray(self._d2(np.asarray(t, dtype=float)), dtype=float)

    def _chunks(self, x: np.ndarray, size: int = 256):
        for lo in range(0, len(x), size):
            yield lo, x[lo : lo + size]

    def winding_angle(self, x: np.ndarray) -> np.ndarray:
        p = self._polyline[:-1]
        q = self._polyline[1:]
        out = np.empty(len(x))
        for lo, block in self._chunks(x):
            out[lo : lo + len(block)] = np.sum(_chord_angle(block[:, None, :], p, q), axis=1)
        return out

    def euclidean_distance(self, x: np.ndarray) -> np.ndarray:
        p = self._polyline[:-1]
        q = self._polyline[1:]
        out = np.empty(len(x))
        for lo, block in self._chunks(x):
            out[lo : lo + len(block)] = np.min(_segment_distance(block[:, None, :], p, q), axis=1)
        return out

    def __repr__(self) -> str:
        return f"ParametricArc(label={self.label!r})"


@dataclass(frozen=True)
class Corner:
    point: np.ndarray
    incoming: int
    outgoing: int
    opening_angle: float
    corner_class: CornerClass

    @property
    def arcs(self) -> Tuple[int, int]:
        return self.incoming, self.outgoing


class BoundaryFrame(NamedTuple):
    point: np.ndarray
    normal: np.ndarray
    curvature: np.ndarray


class Domain:
    """Bounded open set whose boundary is a union of closed arc loops.

    Args:
        loops: The first loop is the outer boundary (counterclockwise), any
            further loops are holes (clockwise).
        validate: Run closure, orientation and corner checks.
    """

    def __init__(self, loops: Sequence[Sequence[BoundaryArc]], validate: bool = True):
        if not loops or any(len(loop) == 0 for loop in loops):
            raise InvalidDomainError("domain needs at least one nonempty loop")
        self.loops: List[List[BoundaryArc]] = [list(loop) for loop in loops]
        self.arcs: List[BoundaryArc] = [arc for loop in self.loops for arc in loop]
        self.loop_of_arc = np.array([k for k, loop in enumerate(self.loops) for _ in loop])
        self.next_arc = np.empty(len(self.arcs), dtype=int)
        self.prev_arc = np.empty(len(self.arcs), dtype=int)
        first = 0
        for loop in self.loops:
            ids = first + np.arange(len(loop))
            self.next_arc[ids] = np.roll(ids, -1)
            self.prev_arc[ids] = np.roll(ids, 1)
            first += len(loop)

        samples = np.concatenate([arc.sample(257) for arc in self.arcs])
        self.bounding_box = (
            float(samples[:, 0].min()),
            float(samples[:, 0].max()),
            float(samples[:, 1].min()),
            float(samples[:, 1].max()),
        )
        xmin, xmax, ymin, ymax = self.bounding_box
        self.diameter = float(np.hypot(xmax - xmin, ymax - ymin))
        self.boundary_tol = 1e-9 * self.diameter

        self._corner_at_start = np.full(len(self.arcs), -1)
        self._corner_at_end = np.full(len(self.arcs), -1)
        self.corners: List[Corner] = []
        if validate:
            self._check_loops()
        self._find_corners()
        if validate:
            self._check_orientation()

    def _loop_offsets(self) -> List[int]:
        offsets, total = [], 0
        for loop in self.loops:
            offsets.append(total)
            total += len(loop)
        return offsets

    def _check_loops(self):
        tol = 1e-9 * self.diameter
        for k, loop in enumerate(self.loops):
            for i, arc in enumerate(loop):
                nxt = loop[(i + 1) % len(loop)]
                if norm(arc.end - nxt.start) > tol:
                    raise InvalidDomainError(
                        f"loop {k} is not closed between arcs {i} and {(i + 1) % len(loop)}"
                    )
                speeds = norm(arc.derivative(np.linspace(0.0, 1.0, 65)))
                if np.any(speeds <= 0.0):
                    raise InvalidDomainError(f"loop {k} arc {i} has a degenerate parametrization")

            pts = np.concatenate([arc.sample(257)[:-1] for arc in loop])
            area = 0.5 * np.sum(_cross(pts, np.roll(pts, -1, axis=0)))
            if k == 0 and area <= 0.0:
                raise InvalidDomainError("outer loop must run counterclockwise")
            if k > 0 and area >= 0.0:
                raise InvalidDomainError(f"hole loop {k} must run clockwise")

    def _find_corners(self):
        offsets = self._loop_offsets()
        for k, loop in enumerate(self.loops):
            for i, arc in enumerate(loop):
                j = (i + 1) % len(loop)
                nxt = loop[j]
                t_in = arc.derivative(1.0)
                t_out = nxt.derivative(0.0)
                t_in = t_in / norm(t_in)
                t_out = t_out / norm(t_out)
                turn = float(np.arctan2(_cross(t_in, t_out), np.dot(t_in, t_out)))
                k_in = float(arc.curvature(1.0))
                k_out = float(nxt.curvature(0.0))
                if abs(turn) <= SMOOTH_JOIN_TOL and abs(k_in - k_out) <= 1e-8 * (
                    1.0 + max(abs(k_in), abs(k_out))
                ):
                    continue

                opening = np.pi - turn
                if opening < CUSP_TOL or opening > TWO_PI - CUSP_TOL:
                    raise InvalidDomainError(f"loop {k} has a cusp at {arc.end.tolist()}")
                if abs(opening - np.pi) <= STRAIGHT_ANGLE_TOL:
                    kind = CornerClass.NONSTRICT_REENTRANT
                elif opening < np.pi:
                    kind = CornerClass.NONREENTRANT
                else:
                    kind = CornerClass.STRICT_REENTRANT

                incoming = offsets[k] + i
                outgoing = offsets[k] + j
                self._corner_at_end[incoming] = len(self.corners)
                self._corner_at_start[outgoing] = len(self.corners)
                self.corners.append(Corner(arc.end.copy(), incoming, outgoing, opening, kind))

        logger.debug(
            "Domain has %d arcs and %d corners (%s)",
            len(self.arcs),
            len(self.corners),
            ", ".join(c.corner_class.value for c in self.corners) or "none",
        )

    def _check_orientation(self):
        eps = 1e-6 * self.diameter
        for arc_id, arc in enumerate(self.arcs):
            inner_point = arc.point(0.5) + eps * arc.unit_normal(0.5)
            if self.contains(inner_point) != Location.INSIDE:
                raise InvalidDomainError(
                    f"arc {arc_id} is wrongly oriented: its normal does not point into the domain"
                )

    def boundary_distance(self, x) -> np.ndarray:
        """Euclidean distance to ∂U."""
        pts = as_points(x)
        flat = pts.reshape(-1, 2)
        dist = np.min([arc.euclidean_distance(flat) for arc in self.arcs], axis=0)
        return dist.reshape(pts.shape[:-1])

    def contains(self, x, tol: Optional[float] = None) -> Union[Location, np.ndarray]:
        """Winding-number classification with a boundary band of width tol."""
        pts = as_points(x)
        flat = pts.reshape(-1, 2)
        tol = self.boundary_tol if tol is None else tol
        winding = np.sum([arc.winding_angle(flat) for arc in self.arcs], axis=0) / TWO_PI
        inside = np.abs(winding) > 0.5
        near = np.min([arc.euclidean_distance(flat) for arc in self.arcs], axis=0) <= tol
        loc = np.where(near, Location.BOUNDARY, np.where(inside, Location.INSIDE, Location.OUTSIDE))
        if pts.ndim == 1:
            return Location(int(loc[0]))
        return loc.reshape(pts.shape[:-1])

    def corner_at(self, arc_id: int, t: float) -> int:
        """Corner index at an arc endpoint, or -1."""
        if t <= ENDPOINT_TOL:
            return int(self._corner_at_start[arc_id])
        if t >= 1.0 - ENDPOINT_TOL:
            return int(self._corner_at_end[arc_id])
        return -1

    def boundary_frame(self, arc_id: int, t) -> BoundaryFrame:
        """Point, unit inward normal ν and signed curvature κ at y(t)."""
        arc = self.arcs[arc_id]
        t_arr = np.asarray(t, dtype=float)
        if np.any((t_arr < 0.0) | (t_arr > 1.0)):
            raise ValueError("arc parameter must lie in [0, 1]")
        for value in np.atleast_1d(t_arr):
            corner = self.corner_at(arc_id, float(value))
            if corner >= 0:
                raise CornerPointError(
                    f"t={float(value):g} on arc {arc_id} is corner {corner}; the normal is not defined"
                )
        return BoundaryFrame(arc.point(t_arr), arc.unit_normal(t_arr), arc.curvature(t_arr))

    def k_normal(self, body: ConvexBody, arc_id: int, t) -> np.ndarray:
        """ν_K = Dγ°(ν), the inward K-normal."""
        frame = self.boundary_frame(arc_id, t)
        return body.grad_polar_gauge(frame.normal)

    def k_curvature(
        self, body: ConvexBody, arc_id: int, t, form: Literal["radius", "hessian"] = "radius"
    ) -> np.ndarray:
        """K-curvature at y(t); identically zero on segments.

        ``form="radius"`` gives κ·r_K(n_K⁻¹(ν̂)). ``form="hessian"`` evaluates
        the defining expression (1/|ν|²)⟨D²γ°(ν)ν', ν^⊥⟩ with ν' the arc-length
        derivative of the inward normal and ν^⊥ the +90° rotation of ν.
        """
        if form not in ("radius", "hessian"):
            raise ValueError(f"unknown k-curvature form: {form!r}")
        frame = self.boundary_frame(arc_id, t)
        arc = self.arcs[arc_id]
        if isinstance(arc, SegmentArc):
            return np.zeros(np.shape(t))
        if form == "hessian":
            nu = frame.normal
            d1 = arc.derivative(t)
            d2 = arc.second_derivative(t)
            speed = norm(d1)[..., None]
            d_nu = perp(d2) / speed - perp(d1) * (np.sum(d1 * d2, axis=-1)[..., None] / speed**3)
            d_nu = d_nu / speed
            hess = body.hess_polar_gauge(nu)
            value = np.einsum("...i,...ij,...j->...", perp(nu), hess, d_nu)
            return value / np.sum(nu * nu, axis=-1)
        kappa = np.asarray(frame.curvature, dtype=float)
        if np.all(kappa == 0.0):
            return kappa
        return kappa * body.radius_of_curvature(frame.normal)

    def assumption_warnings(self, body: ConvexBody, samples: int = 257) -> List[str]:
        """Curved arcs whose inward normal meets a flat direction of ∂K.

        Such points need positive curvature (or a segment) for the K-curvature
        to be defined.
        """
        flats = body.degenerate_normals
        warnings: List[str] = []
        if len(flats) == 0:
            return warnings
        t = np.linspace(0.0, 1.0, samples)
        for arc_id, arc in enumerate(self.arcs):
            if isinstance(arc, SegmentArc):
                continue
            normals = arc.unit_normal(t)
            aligned = np.any(normals @ flats.T >= np.cos(1e-3), axis=1)
            bad = aligned & (arc.curvature(t) <= 0.0)
            if np.any(bad):
                warnings.append(
                    f"arc {arc_id}: inward normal meets a flat direction of K where the "
                    "arc curvature is not positive"
                )
        return warnings

    def __repr__(self) -> str:
        return f"Domain(loops={len(self.loops)}, arcs={len(self.arcs)}, corners={len(self.corners)})"
