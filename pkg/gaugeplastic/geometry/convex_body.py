"""
Convex bodies K and the calculus of their gauge γ_K and polar gauge γ°_K.

Every evaluator is vectorised over a trailing axis of size 2, so ``x`` may be a
single point ``(2,)`` or any stack ``(..., 2)``. Bodies are immutable after
construction.
"""

import logging
from abc import ABC, abstractmethod
from functools import cached_property
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize.elementwise import find_root
from scipy.spatial import ConvexHull, QhullError

from ..errors import (
    AmbiguousNormalError,
    CurvatureDegenerateError,
    HypothesisError,
    InvalidBodyError,
    NondifferentiablePointError,
    ZeroVectorError,
)
from ..solver_settings import settings

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

# Relative tolerance used to decide that two facet values tie.
TIE_RTOL = 1e-12

RadialFunction = Callable[[np.ndarray], np.ndarray]


def as_points(x) -> np.ndarray:
    pts = np.asarray(x, dtype=float)
    if pts.shape[-1:] != (2,):
        raise ValueError(f"expected a trailing axis of size 2, got shape {pts.shape}")
    return pts


def norm(x: np.ndarray) -> np.ndarray:
    return np.hypot(x[..., 0], x[..., 1])


def perp(v: np.ndarray) -> np.ndarray:
    """Rotate by +90 degrees: (v1, v2) -> (-v2, v1)."""
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def unit_directions(n: int, offset: float = 0.0) -> np.ndarray:
    theta = offset + TWO_PI * np.arange(n) / n
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def _require_nonzero(x: np.ndarray, strict: bool = True) -> np.ndarray:
    r = norm(x)
    if strict and np.any(r == 0.0):
        raise ZeroVectorError("derivative requested at the origin")
    return r


def _safe(r: np.ndarray) -> np.ndarray:
    return np.where(r > 0.0, r, 1.0)


def _projector(direction: np.ndarray) -> np.ndarray:
    return direction[..., :, None] * direction[..., None, :]


class ConvexBody(ABC):
    """A compact convex set K in the plane with the origin in its interior."""

    kind: str = "abstract"

    @abstractmethod
    def gauge(self, x) -> np.ndarray:
        """γ_K(x) = inf{λ > 0 : x ∈ λK}."""

    @abstractmethod
    def polar_gauge(self, x) -> np.ndarray:
        """γ°_K(x), the support function of K."""

    @abstractmethod
    def grad_gauge(self, x, strict: bool = True) -> np.ndarray:
        """Dγ_K(x).

        Args:
            x: Points of shape (..., 2).
            strict: When False, kinks and the origin return an arbitrary
                subgradient instead of raising.
        """

    @abstractmethod
    def grad_polar_gauge(self, x, on_ambiguous: str = "raise") -> np.ndarray:
        """Dγ°_K(x): the boundary point of K with outward normal x/|x|."""

    @abstractmethod
    def hess_gauge(self, x) -> np.ndarray:
        """D²γ_K(x) as (..., 2, 2)."""

    @abstractmethod
    def hess_polar_gauge(self, x) -> np.ndarray:
        """D²γ°_K(x) as (..., 2, 2)."""

    @property
    def is_smooth(self) -> bool:
        return True

    @property
    def is_strictly_convex(self) -> bool:
        return True

    @property
    def is_symmetric(self) -> bool:
        return False

    @cached_property
    def gauge_bounds(self) -> Tuple[float, float]:
        """(c_lower, c_upper) with c_lower·|x| ≤ γ(x) ≤ c_upper·|x|, sampled."""
        values = self.gauge(unit_directions(settings.BODY_SAMPLES))
        return float(values.min()), float(values.max())

    @property
    def c_lower(self) -> float:
        return self.gauge_bounds[0]

    @property
    def c_upper(self) -> float:
        return self.gauge_bounds[1]

    @property
    def degenerate_normals(self) -> np.ndarray:
        return np.empty((0, 2))

    @property
    def circumradius(self) -> float:
        """max |y| over y ∈ K."""
        return 1.0 / self.c_lower

    @cached_property
    def diameter(self) -> float:
        dirs = unit_directions(settings.BODY_SAMPLES)
        widths = self.polar_gauge(dirs) + self.polar_gauge(-dirs)
        return float(widths.max())

    def radius_of_curvature(self, n, strict: bool = True) -> np.ndarray:
        """r_K at the boundary point whose outward normal is n.

        Computed from D²γ°(n̂) = r_K·P_{n̂⊥}. With ``strict=False`` directions
        where the curvature of ∂K vanishes give ``inf``.
        """
        n = as_points(n)
        nh = n / _safe(_require_nonzero(n))[..., None]
        try:
            hess = self.hess_polar_gauge(nh)
        except CurvatureDegenerateError:
            if strict:
                raise
            flat = nh.reshape(-1, 2)
            out = np.empty(len(flat))
            for i, direction in enumerate(flat):
                try:
                    out[i] = self.radius_of_curvature(direction)
                except CurvatureDegenerateError:
                    out[i] = np.inf
            return out.reshape(nh.shape[:-1])
        t = perp(nh)
        return np.einsum("...i,...ij,...j->...", t, hess, t)

    def polar_body(self) -> "ConvexBody":
        return PolarBody(self)

    def reflect(self) -> "ConvexBody":
        return ReflectedBody(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(kind={self.kind!r})"


# Quadratic norms (disk, ellipse)


def _quadratic_value(x: np.ndarray, diag: np.ndarray) -> np.ndarray:
    return np.sqrt(diag[0] * x[..., 0] ** 2 + diag[1] * x[..., 1] ** 2)


def _quadratic_grad(x: np.ndarray, diag: np.ndarray, strict: bool) -> np.ndarray:
    _require_nonzero(x, strict)
    value = _quadratic_value(x, diag)
    return diag * x / _safe(value)[..., None]


def _quadratic_hess(x: np.ndarray, diag: np.ndarray) -> np.ndarray:
    _require_nonzero(x)
    value = _quadratic_value(x, diag)
    qx = diag * x
    base = np.zeros(x.shape[:-1] + (2, 2))
    base[..., 0, 0] = diag[0]
    base[..., 1, 1] = diag[1]
    hess = base - _projector(qx) / (value**2)[..., None, None]
    return hess / value[..., None, None]


class EllipseBody(ConvexBody):
    """Axis-aligned ellipse with semi-axes a (along x) and b (along y)."""

    kind = "ellipse"

    def __init__(self, a: float, b: float):
        if not (np.isfinite(a) and np.isfinite(b) and a > 0 and b > 0):
            raise InvalidBodyError(f"ellipse semi-axes must be positive, got {a}, {b}")
        self.a = float(a)
        self.b = float(b)
        self._q = np.array([1.0 / self.a**2, 1.0 / self.b**2])
        self._q_inv = np.array([self.a**2, self.b**2])

    def gauge(self, x) -> np.ndarray:
        return _quadratic_value(as_points(x), self._q)

    def polar_gauge(self, x) -> np.ndarray:
        return _quadratic_value(as_points(x), self._q_inv)

    def grad_gauge(self, x, strict: bool = True) -> np.ndarray:
        return _quadratic_grad(as_points(x), self._q, strict)

    def grad_polar_gauge(self, x, on_ambiguous: str = "raise") -> np.ndarray:
        return _quadratic_grad(as_points(x), self._q_inv, True)

    def hess_gauge(self, x) -> np.ndarray:
        return _quadratic_hess(as_points(x), self._q)

    def hess_polar_gauge(self, x) -> np.ndarray:
        return _quadratic_hess(as_points(x), self._q_inv)

    @property
    def is_symmetric(self) -> bool:
        return True

    @cached_property
    def gauge_bounds(self) -> Tuple[float, float]:
        return 1.0 / max(self.a, self.b), 1.0 / min(self.a, self.b)

    @property
    def diameter(self) -> float:
        return 2.0 * max(self.a, self.b)

    def polar_body(self) -> ConvexBody:
        return EllipseBody(1.0 / self.a, 1.0 / self.b)

    def reflect(self) -> ConvexBody:
        return self

    def __repr__(self) -> str:
        return f"EllipseBody(a={self.a}, b={self.b})"


class DiskBody(EllipseBody):
    """Euclidean disk of radius r centred at the origin."""

    kind = "disk"

    def __init__(self, radius: float = 1.0):
        super().__init__(radius, radius)
        self.radius = float(radius)

    def radius_of_curvature(self, n, strict: bool = True) -> np.ndarray:
        n = as_points(n)
        _require_nonzero(n)
        return np.full(n.shape[:-1], self.radius)

    def polar_body(self) -> ConvexBody:
        return DiskBody(1.0 / self.radius)

    def __repr__(self) -> str:
        return f"DiskBody(radius={self.radius})"


# l^p balls


def _lp_value(x: np.ndarray, p: float) -> np.ndarray:
    ax = np.abs(x)
    m = ax.max(axis=-1)
    ms = _safe(m)
    scaled = (ax[..., 0] / ms) ** p + (ax[..., 1] / ms) ** p
    return np.where(m > 0, m * scaled ** (1.0 / p), 0.0)


def _lp_grad(x: np.ndarray, p: float, strict: bool) -> np.ndarray:
    _require_nonzero(x, strict)
    n = _safe(_lp_value(x, p))[..., None]
    return np.sign(x) * (np.abs(x) / n) ** (p - 1.0)


def _lp_hess(x: np.ndarray, p: float, strict: bool = True) -> np.ndarray:
    _require_nonzero(x)
    n = _lp_value(x, p)
    ratio = np.abs(x) / n[..., None]
    if p < 2.0:
        degenerate = np.any(ratio <= 1e-12, axis=-1)
        if strict and np.any(degenerate):
            raise CurvatureDegenerateError(
                f"l^{p:g} norm has unbounded curvature on the coordinate axes"
            )
    s = np.sign(x) * ratio ** (p - 1.0)
    with np.errstate(divide="ignore"):
        diag = ratio ** (p - 2.0)
    hess = -_projector(s)
    hess[..., 0, 0] += diag[..., 0]
    hess[..., 1, 1] += diag[..., 1]
    return (p - 1.0) * hess / n[..., None, None]


class PBallBody(ConvexBody):
    """Unit ball of the l^p norm, 1 < p < ∞. Its polar is the l^q ball."""

    kind = "p_ball"

    def __init__(self, p: float):
        if not (np.isfinite(p) and p > 1.0):
            raise InvalidBodyError(f"p_ball needs 1 < p < inf, got {p}")
        self.p = float(p)
        self.q = self.p / (self.p - 1.0)

    def gauge(self, x) -> np.ndarray:
        return _lp_value(as_points(x), self.p)

    def polar_gauge(self, x) -> np.ndarray:
        return _lp_value(as_points(x), self.q)

    def grad_gauge(self, x, strict: bool = True) -> np.ndarray:
        return _lp_grad(as_points(x), self.p, strict)

    def grad_polar_gauge(self, x, on_ambiguous: str = "raise") -> np.ndarray:
        return _lp_grad(as_points(x), self.q, True)

    def hess_gauge(self, x) -> np.ndarray:
        return _lp_hess(as_points(x), self.p)

    def hess_polar_gauge(self, x) -> np.ndarray:
        return _lp_hess(as_points(x), self.q)

    def radius_of_curvature(self, n, strict: bool = True) -> np.ndarray:
        n = as_points(n)
        nh = n / _safe(_require_nonzero(n))[..., None]
        hess = _lp_hess(nh, self.q, strict)
        t = perp(nh)
        with np.errstate(invalid="ignore"):
            r = np.einsum("...i,...ij,...j->...", t, hess, t)
        return np.where(np.isnan(r), np.inf, r)

    @property
    def is_symmetric(self) -> bool:
        return True

    @cached_property
    def gauge_bounds(self) -> Tuple[float, float]:
        ratio = 2.0 ** (1.0 / self.p - 0.5)
        return min(1.0, ratio), max(1.0, ratio)

    @property
    def degenerate_normals(self) -> np.ndarray:
        if self.p > 2.0:
            return np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        return np.empty((0, 2))

    def polar_body(self) -> ConvexBody:
        return PBallBody(self.q)

    def reflect(self) -> ConvexBody:
        return self

    def __repr__(self) -> str:
        return f"PBallBody(p={self.p})"


# Polygons


class PolygonBody(ConvexBody):
    """Convex polygon given by counterclockwise vertices.

    The gauge is max_i ⟨a_i, x⟩ over the facet vectors a_i = n_i / b_i, which
    is the ray-edge intersection written in closed form. The a_i are the
    vertices of the polar polygon.
    """

    kind = "polygon"

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise InvalidBodyError("polygon needs at least three 2D vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidBodyError("polygon vertices must be finite")

        nxt = np.roll(v, -1, axis=0)
        edges = nxt - v
        lengths = norm(edges)
        if np.any(lengths == 0.0):
            raise InvalidBodyError("polygon has repeated vertices")

        next_edges = np.roll(edges, -1, axis=0)
        cross = edges[:, 0] * next_edges[:, 1] - edges[:, 1] * next_edges[:, 0]
        dot = np.sum(edges * next_edges, axis=1)
        if np.any(cross <= 1e-12 * lengths * np.roll(lengths, -1)):
            raise InvalidBodyError(
                "polygon vertices must be counterclockwise and in strictly convex position"
            )
        turning = np.sum(np.arctan2(cross, dot))
        if abs(turning - TWO_PI) > 1e-9:
            raise InvalidBodyError("polygon boundary winds more than once")
        try:
            hull = ConvexHull(v)
        except QhullError as e:
            raise InvalidBodyError(f"polygon is degenerate: {e}") from e
        if len(hull.vertices) != len(v):
            raise InvalidBodyError("polygon vertices are not in convex position")

        normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1) / lengths[:, None]
        offsets = np.sum(normals * v, axis=1)
        if np.any(offsets <= 0.0):
            raise InvalidBodyError("the origin must lie strictly inside the polygon")

        self.vertices = v
        self.edge_normals = normals
        self._offsets = offsets
        self.facets = normals / offsets[:, None]

    @staticmethod
    def _top_two(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        order = np.argsort(values, axis=-1)
        return order[..., -1], order[..., -2]

    def _tie_mask(self, x: np.ndarray, values: np.ndarray, first, second, scale) -> np.ndarray:
        top = np.take_along_axis(values, first[..., None], axis=-1)[..., 0]
        runner = np.take_along_axis(values, second[..., None], axis=-1)[..., 0]
        return top - runner <= TIE_RTOL * norm(x) * scale

    def gauge(self, x) -> np.ndarray:
        x = as_points(x)
        return np.max(x @ self.facets.T, axis=-1)

    def polar_gauge(self, x) -> np.ndarray:
        x = as_points(x)
        return np.max(x @ self.vertices.T, axis=-1)

    def grad_gauge(self, x, strict: bool = True) -> np.ndarray:
        x = as_points(x)
        _require_nonzero(x, strict)
        values = x @ self.facets.T
        first, second = self._top_two(values)
        if strict:
            scale = np.max(norm(self.facets))
            if np.any(self._tie_mask(x, values, first, second, scale)):
                raise NondifferentiablePointError(
                    "point lies on a ray through a polygon vertex; the gauge has a kink there"
                )
        return self.facets[first]

    def grad_polar_gauge(self, x, on_ambiguous: str = "raise") -> np.ndarray:
        x = as_points(x)
        _require_nonzero(x)
        values = x @ self.vertices.T
        first, second = self._top_two(values)
        result = self.vertices[first]
        scale = np.max(norm(self.vertices))
        ties = self._tie_mask(x, values, first, second, scale)
        if np.any(ties):
            midpoints = 0.5 * (self.vertices[first] + self.vertices[second])
            result = np.where(ties[..., None], midpoints, result)
            if on_ambiguous == "raise":
                raise AmbiguousNormalError(
                    "direction is an edge normal of the polygon; the whole edge maps to it",
                    midpoint=result,
                )
        return result

    def hess_gauge(self, x) -> np.ndarray:
        x = as_points(x)
        self.grad_gauge(x)
        return np.zeros(x.shape[:-1] + (2, 2))

    def hess_polar_gauge(self, x) -> np.ndarray:
        x = as_points(x)
        try:
            self.grad_polar_gauge(x)
        except AmbiguousNormalError as e:
            raise NondifferentiablePointError(
                "polar gauge of a polygon has a kink along edge normals"
            ) from e
        return np.zeros(x.shape[:-1] + (2, 2))

    @property
    def is_smooth(self) -> bool:
        return False

    @property
    def is_strictly_convex(self) -> bool:
        return False

    @cached_property
    def is_symmetric(self) -> bool:
        mirrored = -self.vertices
        distances = np.linalg.norm(self.vertices[:, None, :] - mirrored[None, :, :], axis=-1)
        return bool(np.all(distances.min(axis=1) <= 1e-12 * self.circumradius))

    @cached_property
    def gauge_bounds(self) -> Tuple[float, float]:
        return 1.0 / float(np.max(norm(self.vertices))), 1.0 / float(np.min(self._offsets))

    @property
    def degenerate_normals(self) -> np.ndarray:
        return self.edge_normals

    @property
    def circumradius(self) -> float:
        return float(np.max(norm(self.vertices)))

    @cached_property
    def diameter(self) -> float:
        diffs = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.max(norm(diffs)))

    def polar_body(self) -> ConvexBody:
        return PolygonBody(self.facets)

    def reflect(self) -> ConvexBody:
        return PolygonBody(-self.vertices)

    def __repr__(self) -> str:
        return f"PolygonBody(vertices={self.vertices.tolist()})"


def square_body(half_width: float = 1.0) -> PolygonBody:
    """[-w, w]², whose gauge is the max-norm divided by w."""
    w = float(half_width)
    return PolygonBody([[-w, -w], [w, -w], [w, w], [-w, w]])


# Smooth bodies in polar coordinates


class RadialBody(ConvexBody):
    """Smooth body whose boundary is θ ↦ ρ(θ)(cos θ, sin θ).

    In polar coordinates x = (s, φ) the gauge is γ(x) = s/ρ(φ). The callables
    must accept arrays and be 2π-periodic.
    """

    kind = "smooth"

    def __init__(
        self,
        rho: RadialFunction,
        drho: RadialFunction,
        ddrho: RadialFunction,
        label: str = "smooth",
    ):
        self._rho = rho
        self._drho = drho
        self._ddrho = ddrho
        self.label = label

        theta = TWO_PI * np.arange(settings.BODY_SAMPLES) / settings.BODY_SAMPLES
        r = np.asarray(rho(theta), dtype=float)
        if not np.all(np.isfinite(r)) or np.any(r <= 0.0):
            raise InvalidBodyError("radial function must be finite and positive")
        if abs(float(rho(np.array([0.0]))[0]) - float(rho(np.array([TWO_PI]))[0])) > 1e-9 * r.max():
            raise InvalidBodyError("radial function must be 2π-periodic")
        curvature = self._curvature(theta)
        if curvature.min() < -1e-9 * np.abs(curvature).max():
            raise InvalidBodyError("radial function does not bound a convex set")
        self._sampled_curvature = curvature
        self._sampled_theta = theta

    def _curvature(self, theta: np.ndarray) -> np.ndarray:
        r = self._rho(theta)
        dr = self._drho(theta)
        ddr = self._ddrho(theta)
        return (r**2 + 2.0 * dr**2 - r * ddr) / (r**2 + dr**2) ** 1.5

    def _normal_offset(self, theta: np.ndarray, alpha: np.ndarray) -> np.ndarray:
        return theta - np.arctan2(self._drho(theta), self._rho(theta)) - alpha

    def _inverse_gauss_angle(self, x: np.ndarray) -> np.ndarray:
        """Boundary parameter θ whose outward normal points along x."""
        alpha = np.arctan2(x[..., 1], x[..., 0]).ravel()
        half = 0.5 * np.pi
        res = find_root(
            self._normal_offset,
            (alpha - half, alpha + half),
            args=(alpha,),
            tolerances=dict(xatol=settings.GAUSS_MAP_TOL, fatol=settings.GAUSS_MAP_TOL),
        )
        if not np.all(res.success):
            logger.warning(
                "Inverse Gauss map did not converge for %d directions",
                int(np.count_nonzero(~res.success)),
            )
        return np.asarray(res.x).reshape(x.shape[:-1])

    def boundary_point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        r = self._rho(theta)
        return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)

    def gauge(self, x) -> np.ndarray:
        x = as_points(x)
        return norm(x) / self._rho(np.arctan2(x[..., 1], x[..., 0]))

    def grad_gauge(self, x, strict: bool = True) -> np.ndarray:
        x = as_points(x)
        _require_nonzero(x, strict)
        phi = np.arctan2(x[..., 1], x[..., 0])
        r = self._rho(phi)
        w = 1.0 / r
        dw = -self._drho(phi) / r**2
        e_r = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        e_phi = perp(e_r)
        return w[..., None] * e_r + dw[..., None] * e_phi

    def hess_gauge(self, x) -> np.ndarray:
        x = as_points(x)
        s = _require_nonzero(x)
        phi = np.arctan2(x[..., 1], x[..., 0])
        r = self._rho(phi)
        dr = self._drho(phi)
        ddr = self._ddrho(phi)
        w_plus_ddw = 1.0 / r - ddr / r**2 + 2.0 * dr**2 / r**3
        e_phi = np.stack([-np.sin(phi), np.cos(phi)], axis=-1)
        return (w_plus_ddw / s)[..., None, None] * _projector(e_phi)

    def polar_gauge(self, x) -> np.ndarray:
        x = as_points(x)
        theta = self._inverse_gauss_angle(x)
        return np.sum(x * self.boundary_point(theta), axis=-1)

    def grad_polar_gauge(self, x, on_ambiguous: str = "raise") -> np.ndarray:
        x = as_points(x)
        _require_nonzero(x)
        return self.boundary_point(self._inverse_gauss_angle(x))

    def hess_polar_gauge(self, x) -> np.ndarray:
        x = as_points(x)
        s = _require_nonzero(x)
        curvature = self._curvature(self._inverse_gauss_angle(x))
        if np.any(curvature <= 1e-14):
            raise CurvatureDegenerateError("boundary curvature vanishes in this normal direction")
        xh = x / s[..., None]
        return (1.0 / (curvature * s))[..., None, None] * _projector(perp(xh))

    def radius_of_curvature(self, n, strict: bool = True) -> np.ndarray:
        n = as_points(n)
        _require_nonzero(n)
        curvature = self._curvature(self._inverse_gauss_angle(n))
        degenerate = curvature <= 1e-14
        if strict and np.any(degenerate):
            raise CurvatureDegenerateError("boundary curvature vanishes in this normal direction")
        return np.where(degenerate, np.inf, 1.0 / np.where(degenerate, 1.0, curvature))

    @cached_property
    def is_strictly_convex(self) -> bool:
        flat = self._sampled_curvature <= 1e-10 * self._sampled_curvature.max()
        return not bool(np.any(flat & np.roll(flat, 1)))

    @cached_property
    def degenerate_normals(self) -> np.ndarray:
        flat = self._sampled_curvature <= 1e-10 * self._sampled_curvature.max()
        theta = self._sampled_theta[flat]
        angle = theta - np.arctan2(self._drho(theta), self._rho(theta))
        return np.stack([np.cos(angle), np.sin(angle)], axis=-1)

    def __repr__(self) -> str:
        return f"RadialBody(label={self.label!r})"


def fourier_body(cos_coeffs, sin_coeffs=()) -> RadialBody:
    """Radial body with ρ(θ) = Σ a_k cos kθ + Σ b_k sin kθ (a_0 is the mean radius)."""
    a = np.asarray(cos_coeffs, dtype=float)
    b = np.zeros(len(a))
    b[1 : len(sin_coeffs) + 1] = np.asarray(sin_coeffs, dtype=float)[: max(len(a) - 1, 0)]
    k = np.arange(len(a))

    def _series(theta, order):
        theta = np.asarray(theta, dtype=float)
        angle = theta[..., None] * k
        c, s = np.cos(angle), np.sin(angle)
        if order == 0:
            return np.sum(a * c + b * s, axis=-1)
        if order == 1:
            return np.sum(k * (-a * s + b * c), axis=-1)
        return np.sum(-(k**2) * (a * c + b * s), axis=-1)

    return RadialBody(
        lambda t: _series(t, 0),
        lambda t: _series(t, 1),
        lambda t: _series(t, 2),
        label="fourier",
    )


# Wrappers


class PolarBody(ConvexBody):
    """K° expressed through K: gauge and polar gauge swap roles."""

    def __init__(self, base: ConvexBody):
        self.base = base
        self.kind = f"polar({base.kind})"

    def gauge(self, x) -> np.ndarray:
        return self.base.polar_gauge(x)

    def polar_gauge(self, x) -> np.ndarray:
        return self.base.gauge(x)

    def grad_gauge(self, x, strict: bool = True) -> np.ndarray:
        if strict:
            return self.base.grad_polar_gauge(x)
        x = as_points(x)
        zero = norm(x) == 0.0
        direction = np.where(zero[..., None], np.array([1.0, 0.0]), x)
        grad = self.base.grad_polar_gauge(direction, on_ambiguous="midpoint")
        return np.where(zero[..., None], 0.0, grad)

    def grad_polar_gauge(self, x, on_ambiguous: str = "raise") -> np.ndarray:
        return self.base.grad_gauge(x)

    def hess_gauge(self, x) -> np.ndarray:
        return self.base.hess_polar_gauge(x)

    def hess_polar_gauge(self, x) -> np.ndarray:
        return self.base.hess_gauge(x)

    @property
    def is_smooth(self) -> bool:
        return self.base.is_smooth and self.base.is_strictly_convex

    @property
    def is_strictly_convex(self) -> bool:
        return self.base.is_smooth and self.base.is_strictly_convex

    @property
    def is_symmetric(self) -> bool:
        return self.base.is_symmetric

    @cached_property
    def gauge_bounds(self) -> Tuple[float, float]:
        return 1.0 / self.base.c_upper, 1.0 / self.base.c_lower

    def polar_body(self) -> ConvexBody:
        return self.base

    def reflect(self) -> ConvexBody:
        return PolarBody(self.base.reflect())

    def __repr__(self) -> str:
        return f"PolarBody({self.base!r})"


class ReflectedBody(ConvexBody):
    """-K, with γ_{-K}(x) = γ_K(-x)."""

    def __init__(self, base: ConvexBody):
        self.base = base
        self.kind = f"reflected({base.kind})"

    def gauge(self, x) -> np.ndarray:
        return self.base.gauge(-as_points(x))

    def polar_gauge(self, x) -> np.ndarray:
        return self.base.polar_gauge(-as_points(x))

    def grad_gauge(self, x, strict: bool = True) -> np.ndarray:
        return -self.base.grad_gauge(-as_points(x), strict=strict)

    def grad_polar_gauge(self, x, on_ambiguous: str = "raise") -> np.ndarray:
        try:
            return -self.base.grad_polar_gauge(-as_points(x), on_ambiguous=on_ambiguous)
        except AmbiguousNormalError as e:
            raise AmbiguousNormalError(str(e), midpoint=-e.midpoint) from e

    def hess_gauge(self, x) -> np.ndarray:
        return self.base.hess_gauge(-as_points(x))

    def hess_polar_gauge(self, x) -> np.ndarray:
        return self.base.hess_polar_gauge(-as_points(x))

    def radius_of_curvature(self, n, strict: bool = True) -> np.ndarray:
        return self.base.radius_of_curvature(-as_points(n), strict=strict)

    @property
    def is_smooth(self) -> bool:
        return self.base.is_smooth

    @property
    def is_strictly_convex(self) -> bool:
        return self.base.is_strictly_convex

    @property
    def is_symmetric(self) -> bool:
        return self.base.is_symmetric

    @property
    def gauge_bounds(self) -> Tuple[float, float]:
        return self.base.gauge_bounds

    @property
    def degenerate_normals(self) -> np.ndarray:
        return -self.base.degenerate_normals

    def polar_body(self) -> ConvexBody:
        return ReflectedBody(self.base.polar_body())

    def reflect(self) -> ConvexBody:
        return self.base

    def __repr__(self) -> str:
        return f"ReflectedBody({self.base!r})"


# Approximation and diagnostics


def smooth_approximation(body: ConvexBody, k: int, samples: Optional[int] = None) -> ConvexBody:
    """Smooth, uniformly convex outer approximation B_k ⊇ body.

    The support function is convolved on the circle with a Gaussian of width
    2^{-k}/4. Convolution with a nonnegative kernel keeps h + h'' ≥ 0, so the
    result is again a support function. It is then lifted by R·E|Δθ| (which
    restores containment since h is R-Lipschitz in θ) and by 0.05·2^{-k}·R,
    which adds a disk and makes the boundary uniformly convex.

    Args:
        body: Any valid convex body.
        k: Refinement level, k ≥ 1.
        samples: Number of support-function samples on the circle.

    Returns:
        ``body`` itself when it is already smooth and strictly convex,
        otherwise ``PolarBody(RadialBody(1/h_k))``.
    """
    if k < 1:
        raise ValueError(f"refinement level must be a positive integer, got {k}")
    if body.is_smooth and body.is_strictly_convex:
        return body

    m = samples or settings.SUPPORT_SAMPLES
    step = TWO_PI / m
    theta = step * np.arange(m)
    support = body.polar_gauge(unit_directions(m))
    radius = body.circumradius

    sigma = 2.0**-k / 4.0
    offsets = step * (((np.arange(m) + m // 2) % m) - m // 2)
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    kernel /= kernel.sum()
    smoothed = np.fft.irfft(np.fft.rfft(support) * np.fft.rfft(kernel), n=m)

    lift = radius * (np.sum(kernel * np.abs(offsets)) + step) + 0.05 * 2.0**-k * radius
    support_k = smoothed + lift

    knots = np.append(theta, TWO_PI)
    rho = 1.0 / support_k
    spline = CubicSpline(knots, np.append(rho, rho[0]), bc_type="periodic")
    d1 = spline.derivative(1)
    d2 = spline.derivative(2)

    polar_k = RadialBody(
        lambda t: spline(np.mod(t, TWO_PI)),
        lambda t: d1(np.mod(t, TWO_PI)),
        lambda t: d2(np.mod(t, TWO_PI)),
        label=f"smoothed(k={k})",
    )
    logger.debug("Smoothed %s at level %d (lift %.3e)", body.kind, k, lift)
    return polar_k.polar_body()


def hausdorff_distance(a: ConvexBody, b: ConvexBody, samples: Optional[int] = None) -> float:
    """Sampled sup |h_a - h_b| over unit directions."""
    dirs = unit_directions(samples or settings.BODY_SAMPLES, offset=0.5 / settings.BODY_SAMPLES)
    return float(np.max(np.abs(a.polar_gauge(dirs) - b.polar_gauge(dirs))))


def hessian_bound_diagnostic(body: ConvexBody, samples: int = 256) -> float:
    """Measured C₂ = max 2⟨D²γ(v)w, w⟩ over v ∈ ∂K and w ∈ K ∩ (-K)."""
    if not body.is_smooth:
        raise HypothesisError("the second-difference bound needs a C² gauge")
    dirs = unit_directions(samples, offset=0.25 / samples)
    on_boundary = dirs / body.gauge(dirs)[:, None]
    symmetric_part = dirs / np.maximum(body.gauge(dirs), body.gauge(-dirs))[:, None]
    hess = body.hess_gauge(on_boundary)
    quad = np.einsum("aij,bi,bj->ab", hess, symmetric_part, symmetric_part)
    return float(2.0 * quad.max())
