"""
Asymmetric distance d_K(x) = min over y ∈ ∂U of γ_K(x - y), its closest-point
map, derivatives off the ridge and grid sampling with ridge labels.

The reflected distance d̄_K is d_K for the reflected body K̄ = -K.
"""

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from typing import List, Optional, Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.optimize.elementwise import find_root

from ..errors import (
    CornerShadowError,
    HypothesisError,
    MultiplicityRidgeError,
    OnRidgeError,
    OutsideDomainError,
)
from ..solver_settings import settings
from .convex_body import ConvexBody, as_points, norm, perp
from .domain import Corner, CornerClass, Domain, Location, SegmentArc
from .grid import Grid

logger = logging.getLogger(__name__)

# Fan membership is decided on sines of angles between unit vectors.
FAN_ANGLE_TOL = 1e-9
ROOT_XATOL = 1e-14


class RidgeLabel(IntEnum):
    OFF = 0
    MULTIPLICITY = 1
    CURVATURE = 2
    EXTERIOR = 3


@dataclass
class Hit:
    point: np.ndarray
    arc_id: int
    t: float
    corner_id: int = -1

    @property
    def is_corner(self) -> bool:
        return self.corner_id >= 0


@dataclass
class ClosestPointResult:
    distance: float
    hits: List[Hit]

    @property
    def multiplicity(self) -> int:
        return len(self.hits)


@dataclass
class _Batch:
    """Vectorised closest-point data for a stack of query points."""

    distance: np.ndarray
    point: np.ndarray
    arc: np.ndarray
    t: np.ndarray
    corner: np.ndarray
    multiplicity: np.ndarray
    gap: np.ndarray
    hits: Optional[List[List[Hit]]] = None


def _slope_factory(arc, body: ConvexBody):
    """t ↦ d/dt γ(x - y(t)) = -⟨Dγ(x - y(t)), y'(t)⟩."""

    def slope(t, x0, x1):
        y = arc.point(t)
        w = np.stack([x0 - y[..., 0], x1 - y[..., 1]], axis=-1)
        g = body.grad_gauge(w, strict=False)
        return -np.sum(g * arc.derivative(t), axis=-1)

    return slope


def _endpoint_slope(arc, body: ConvexBody, t: float, X: np.ndarray) -> np.ndarray:
    g = body.grad_gauge(X - arc.point(t), strict=False)
    return -(g @ arc.derivative(t))


def _search_chunk(
    domain: Domain, body: ConvexBody, X: np.ndarray, collect_hits: bool, tol_val: float
) -> _Batch:
    n = len(X)
    n_arcs = len(domain.arcs)
    seeds = np.linspace(0.0, 1.0, settings.CLOSEST_POINT_SEEDS)
    radius = settings.CLUSTER_RADIUS_FACTOR * domain.diameter

    seed_vals = [body.gauge(X[:, None, :] - arc.point(seeds)[None]) for arc in domain.arcs]
    best_seed = np.min([v.min(axis=1) for v in seed_vals], axis=0)

    start_slope = np.empty((n, n_arcs))
    end_slope = np.empty((n, n_arcs))
    for a, arc in enumerate(domain.arcs):
        start_slope[:, a] = _endpoint_slope(arc, body, 0.0, X)
        end_slope[:, a] = _endpoint_slope(arc, body, 1.0, X)

    rows, arcs, ts, vals, minima = [], [], [], [], []
    every_row = np.arange(n)
    for a, arc in enumerate(domain.arcs):
        v = seed_vals[a]

        # Arc endpoints are always candidates; they count as local minima of
        # the boundary loop only if γ(x - y) does not decrease into either arc.
        at_start = (start_slope[:, a] >= 0.0) & (end_slope[:, domain.prev_arc[a]] <= 0.0)
        at_end = (end_slope[:, a] <= 0.0) & (start_slope[:, domain.next_arc[a]] >= 0.0)
        for t_end, column, is_min in ((0.0, 0, at_start), (1.0, -1, at_end)):
            rows.append(every_row)
            arcs.append(np.full(n, a))
            ts.append(np.full(n, t_end))
            vals.append(v[:, column])
            minima.append(is_min)

        inner = v[:, 1:-1]
        local = (inner < v[:, :-2]) & (inner <= v[:, 2:])
        slack = body.c_upper * arc.speed_bound * (seeds[1] - seeds[0])
        r, c = np.nonzero(local & (inner - slack <= best_seed[:, None]))
        if r.size == 0:
            continue
        s = c + 1
        lo, hi = seeds[s - 1], seeds[s + 1]
        slope = _slope_factory(arc, body)
        f_lo = slope(lo, X[r, 0], X[r, 1])
        f_hi = slope(hi, X[r, 0], X[r, 1])
        bracketed = (f_lo < 0.0) & (f_hi > 0.0)
        flat = ~bracketed & (f_lo <= 0.0) & (f_hi >= 0.0)

        t = seeds[s].copy()
        if np.any(bracketed):
            res = find_root(
                slope,
                (lo[bracketed], hi[bracketed]),
                args=(X[r[bracketed], 0], X[r[bracketed], 1]),
                tolerances=dict(xatol=ROOT_XATOL, fatol=0.0, frtol=0.0),
            )
            t[bracketed] = np.clip(res.x, 0.0, 1.0)

        rows.append(r)
        arcs.append(np.full(r.size, a))
        ts.append(t)
        vals.append(body.gauge(X[r] - arc.point(t)))
        minima.append(bracketed | flat)

    rows = np.concatenate(rows)
    arcs = np.concatenate(arcs)
    ts = np.concatenate(ts)
    vals = np.concatenate(vals)
    minima = np.concatenate(minima)
    points = np.empty((len(rows), 2))
    for a, arc in enumerate(domain.arcs):
        sel = arcs == a
        points[sel] = arc.point(ts[sel])

    order = np.lexsort((vals, rows))
    first = order[np.searchsorted(rows[order], every_row)]
    best = vals[first]

    hit_mask = minima & (vals <= best[rows] + tol_val)
    has_hit = np.zeros(n, dtype=bool)
    has_hit[rows[hit_mask]] = True
    hit_mask[first[~has_hit]] = True

    # Second-best separated local minimum, for ridge neighbourhoods.
    separated = minima & (norm(points - points[first][rows]) > radius)
    second = np.full(n, np.inf)
    np.minimum.at(second, rows[separated], vals[separated])
    gap = second - best

    corner_points = np.array([c.point for c in domain.corners]).reshape(-1, 2)

    def corner_of(p: np.ndarray) -> np.ndarray:
        if len(corner_points) == 0:
            return np.full(len(p), -1)
        dist = norm(p[:, None, :] - corner_points[None])
        idx = np.argmin(dist, axis=1)
        return np.where(dist[np.arange(len(p)), idx] <= radius, idx, -1)

    hit_idx = np.nonzero(hit_mask)[0]
    counts = np.bincount(rows[hit_idx], minlength=n)
    multiplicity = np.minimum(counts, 1)
    hits: Optional[List[List[Hit]]] = [[] for _ in range(n)] if collect_hits else None

    hit_idx = hit_idx[np.lexsort((vals[hit_idx], rows[hit_idx]))]
    starts = np.searchsorted(rows[hit_idx], every_row)
    ends = np.searchsorted(rows[hit_idx], every_row, side="right")
    for row in np.nonzero((counts > 1) | collect_hits)[0]:
        reps: List[int] = []
        for k in hit_idx[starts[row] : ends[row]]:
            if all(norm(points[k] - points[j]) > radius for j in reps):
                reps.append(k)
        multiplicity[row] = len(reps)
        if hits is not None:
            corners = corner_of(points[reps])
            hits[row] = [
                Hit(points[k].copy(), int(arcs[k]), float(ts[k]), int(cid))
                for k, cid in zip(reps, corners)
            ]

    return _Batch(
        distance=best,
        point=points[first],
        arc=arcs[first],
        t=ts[first],
        corner=corner_of(points[first]),
        multiplicity=multiplicity,
        gap=gap,
        hits=hits,
    )


def _search(
    domain: Domain,
    body: ConvexBody,
    X: np.ndarray,
    collect_hits: bool = False,
    tol_val: Optional[float] = None,
) -> _Batch:
    chunk = settings.CHUNK_SIZE
    if tol_val is None:
        tol_val = settings.TIE_TOLERANCE_FACTOR * domain.diameter
    parts = [
        _search_chunk(domain, body, X[lo : lo + chunk], collect_hits, tol_val)
        for lo in range(0, len(X), chunk)
    ]
    if not parts:
        empty = np.empty(0)
        return _Batch(empty, np.empty((0, 2)), empty.astype(int), empty, empty.astype(int), empty.astype(int), empty)
    return _Batch(
        distance=np.concatenate([p.distance for p in parts]),
        point=np.concatenate([p.point for p in parts]),
        arc=np.concatenate([p.arc for p in parts]),
        t=np.concatenate([p.t for p in parts]),
        corner=np.concatenate([p.corner for p in parts]),
        multiplicity=np.concatenate([p.multiplicity for p in parts]),
        gap=np.concatenate([p.gap for p in parts]),
        hits=[h for p in parts for h in p.hits] if collect_hits else None,
    )


def _require_inside(domain: Domain, x) -> np.ndarray:
    pts = as_points(x)
    loc = np.atleast_1d(np.asarray(domain.contains(pts)))
    if np.any(loc == Location.OUTSIDE):
        raise OutsideDomainError(f"{np.count_nonzero(loc == Location.OUTSIDE)} query point(s) outside the domain")
    return loc


def closest_points(domain: Domain, body: ConvexBody, x, tol: Optional[float] = None) -> ClosestPointResult:
    """All γ-closest boundary points to an interior point x.

    Args:
        tol: Gauge-value tolerance for reporting ties. Defaults to
            ``TIE_TOLERANCE_FACTOR·diam(U)``.
    """
    pts = as_points(x)
    if pts.shape != (2,):
        raise ValueError("closest_points takes a single point")
    if domain.contains(pts) != Location.INSIDE:
        raise OutsideDomainError(f"{pts.tolist()} is not inside the domain")
    batch = _search(domain, body, pts[None], collect_hits=True, tol_val=tol)
    return ClosestPointResult(float(batch.distance[0]), batch.hits[0])


def distance(domain: Domain, body: ConvexBody, x):
    """d_K(x); boundary points give 0."""
    pts = as_points(x)
    flat = pts.reshape(-1, 2)
    loc = _require_inside(domain, flat)
    out = np.zeros(len(flat))
    inside = loc == Location.INSIDE
    if np.any(inside):
        out[inside] = _search(domain, body, flat[inside]).distance
    if pts.ndim == 1:
        return float(out[0])
    return out.reshape(pts.shape[:-1])


def distance_reflected(domain: Domain, body: ConvexBody, x):
    """d̄_K(x) = d_{-K}(x)."""
    return distance(domain, body.reflect(), x)


# Derivatives


@dataclass
class _LocalFrame:
    """Data of the unique closest point needed by the derivative formulas."""

    x: np.ndarray
    d: float
    y: np.ndarray
    normal: np.ndarray
    kappa: float
    kappa_k: float


def _k_curvature_at(domain: Domain, body: ConvexBody, arc_id: int, t: float, normal: np.ndarray, kappa: float) -> float:
    if isinstance(domain.arcs[arc_id], SegmentArc) or kappa == 0.0:
        return 0.0
    return float(kappa * body.radius_of_curvature(normal))


def _one_sided(domain: Domain, body: ConvexBody, arc_id: int, t: float) -> Tuple[np.ndarray, float, float]:
    arc = domain.arcs[arc_id]
    normal = arc.unit_normal(t)
    kappa = float(arc.curvature(t))
    return normal, kappa, _k_curvature_at(domain, body, arc_id, t, normal, kappa)


def _corner_k_normals(domain: Domain, body: ConvexBody, corner: Corner) -> Tuple[np.ndarray, np.ndarray]:
    n_in = body.grad_polar_gauge(domain.arcs[corner.incoming].unit_normal(1.0))
    n_out = body.grad_polar_gauge(domain.arcs[corner.outgoing].unit_normal(0.0))
    return n_in, n_out


def _fan_sines(n_in: np.ndarray, n_out: np.ndarray, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Sines locating w inside the clockwise fan from n_in to n_out (both negative inside)."""
    wn = w / norm(w)[..., None]
    a = n_in / norm(n_in)
    b = n_out / norm(n_out)
    s_in = a[0] * wn[..., 1] - a[1] * wn[..., 0]
    s_out = wn[..., 0] * b[1] - wn[..., 1] * b[0]
    return s_in, s_out


def _aligned_side(domain: Domain, body: ConvexBody, corner: Corner, w: np.ndarray) -> Tuple[int, float]:
    """Incident arc whose K-normal at the corner is closest in direction to w."""
    n_in, n_out = _corner_k_normals(domain, body, corner)
    wn = w / norm(w)
    if wn @ (n_in / norm(n_in)) >= wn @ (n_out / norm(n_out)):
        return corner.incoming, 1.0
    return corner.outgoing, 0.0


def _require_smooth(body: ConvexBody):
    if not (body.is_smooth and body.is_strictly_convex):
        raise HypothesisError(
            "derivatives of d_K need a smooth strictly convex K; "
            f"{body!r} only supports distance and closest points"
        )


def _unique_hit(domain: Domain, body: ConvexBody, x) -> Tuple[np.ndarray, ClosestPointResult]:
    pts = as_points(x)
    result = closest_points(domain, body, pts)
    if result.multiplicity > 1:
        raise MultiplicityRidgeError(
            f"{pts.tolist()} has {result.multiplicity} closest points", result.multiplicity
        )
    return pts, result


def _smooth_frame(domain: Domain, body: ConvexBody, x: np.ndarray, result: ClosestPointResult) -> _LocalFrame:
    hit = result.hits[0]
    if hit.is_corner:
        corner = domain.corners[hit.corner_id]
        arc_id, t = _aligned_side(domain, body, corner, x - hit.point)
    else:
        arc_id, t = hit.arc_id, hit.t
    normal, kappa, kappa_k = _one_sided(domain, body, arc_id, t)
    return _LocalFrame(x, result.distance, hit.point, normal, kappa, kappa_k)


def _laplacian(body: ConvexBody, frame: _LocalFrame) -> float:
    residual = 1.0 - frame.kappa_k * frame.d
    if abs(residual) < settings.RIDGE_SAFETY_MARGIN:
        raise OnRidgeError(f"1 - κ_K·d_K = {residual:.3g} at {frame.x.tolist()}")
    p = body.grad_polar_gauge(frame.normal)
    h = float(body.polar_gauge(frame.normal))
    return -frame.kappa * float(p @ p) / (h**3 * residual)


def _rank_one_hessian(body: ConvexBody, frame: _LocalFrame) -> np.ndarray:
    lap = _laplacian(body, frame)
    p = body.grad_polar_gauge(frame.normal)
    zeta = perp(p) / norm(p)
    return lap * np.outer(zeta, zeta)


def grad_distance(domain: Domain, body: ConvexBody, x) -> np.ndarray:
    """Dd_K(x) = ν/γ°(ν) at the closest point, or Dγ(x - y) in a reentrant-corner fan."""
    _require_smooth(body)
    pts, result = _unique_hit(domain, body, x)
    hit = result.hits[0]
    if hit.is_corner:
        corner = domain.corners[hit.corner_id]
        if corner.corner_class == CornerClass.STRICT_REENTRANT:
            n_in, n_out = _corner_k_normals(domain, body, corner)
            s_in, s_out = _fan_sines(n_in, n_out, pts - hit.point)
            if s_in <= FAN_ANGLE_TOL and s_out <= FAN_ANGLE_TOL:
                return body.grad_gauge(pts - hit.point)
    frame = _smooth_frame(domain, body, pts, result)
    if abs(1.0 - frame.kappa_k * frame.d) < settings.RIDGE_SAFETY_MARGIN:
        raise OnRidgeError(f"{pts.tolist()} is on the curvature ridge")
    return frame.normal / body.polar_gauge(frame.normal)


def hess_distance(domain: Domain, body: ConvexBody, x) -> np.ndarray:
    """D²d_K(x) = Δd_K·ζζᵀ with ζ a unit vector orthogonal to x - y(x)."""
    _require_smooth(body)
    pts, result = _unique_hit(domain, body, x)
    hit = result.hits[0]
    if not hit.is_corner:
        return _rank_one_hessian(body, _smooth_frame(domain, body, pts, result))

    corner = domain.corners[hit.corner_id]
    w = pts - hit.point
    if corner.corner_class == CornerClass.STRICT_REENTRANT:
        n_in, n_out = _corner_k_normals(domain, body, corner)
        s_in, s_out = _fan_sines(n_in, n_out, w)
        if s_in < -FAN_ANGLE_TOL and s_out < -FAN_ANGLE_TOL:
            return body.hess_gauge(w)
        raise CornerShadowError(
            f"{pts.tolist()} lies on a K-normal ray of the reentrant corner at {corner.point.tolist()}"
        )
    if corner.corner_class == CornerClass.NONSTRICT_REENTRANT:
        sides = []
        for arc_id, t in ((corner.incoming, 1.0), (corner.outgoing, 0.0)):
            normal, kappa, kappa_k = _one_sided(domain, body, arc_id, t)
            sides.append(_rank_one_hessian(body, _LocalFrame(pts, result.distance, hit.point, normal, kappa, kappa_k)))
        if np.allclose(sides[0], sides[1], rtol=1e-9, atol=1e-12):
            return sides[0]
        raise CornerShadowError(
            f"{pts.tolist()} is behind the tangent-continuous corner at {corner.point.tolist()}",
            one_sided=(sides[0], sides[1]),
        )
    return _rank_one_hessian(body, _smooth_frame(domain, body, pts, result))


def ridge_residual(domain: Domain, body: ConvexBody, x) -> float:
    """1 - κ_K(y(x))·d_K(x).

    Nonsmooth bodies and points in a reentrant-corner fan have no curvature
    ridge and give 1.
    """
    pts = as_points(x)
    if domain.contains(pts) != Location.INSIDE:
        raise OutsideDomainError(f"{pts.tolist()} is not inside the domain")
    batch = _search(domain, body, pts[None])
    if batch.multiplicity[0] > 1:
        raise MultiplicityRidgeError(
            f"{pts.tolist()} has {int(batch.multiplicity[0])} closest points", int(batch.multiplicity[0])
        )
    return float(_residuals(domain, body, pts[None], batch)[0])


def _residuals(domain: Domain, body: ConvexBody, X: np.ndarray, batch: _Batch) -> np.ndarray:
    out = np.ones(len(X))
    out[batch.multiplicity > 1] = np.nan
    if not (body.is_smooth and body.is_strictly_convex):
        return out
    single = batch.multiplicity == 1

    smooth_hit = single & (batch.corner < 0)
    for a, arc in enumerate(domain.arcs):
        if isinstance(arc, SegmentArc):
            continue
        rows = np.nonzero(smooth_hit & (batch.arc == a))[0]
        if rows.size == 0:
            continue
        t = batch.t[rows]
        kappa = arc.curvature(t)
        r_k = body.radius_of_curvature(arc.unit_normal(t), strict=False)
        kappa_k = np.where(kappa == 0.0, 0.0, kappa * r_k)
        out[rows] = 1.0 - kappa_k * batch.distance[rows]

    for c, corner in enumerate(domain.corners):
        rows = np.nonzero(single & (batch.corner == c))[0]
        if rows.size == 0:
            continue
        w = X[rows] - corner.point
        n_in, n_out = _corner_k_normals(domain, body, corner)
        s_in, s_out = _fan_sines(n_in, n_out, w)
        fan = (s_in <= FAN_ANGLE_TOL) & (s_out <= FAN_ANGLE_TOL)
        if corner.corner_class != CornerClass.STRICT_REENTRANT:
            fan[:] = False
        wn = w / norm(w)[:, None]
        use_in = wn @ (n_in / norm(n_in)) >= wn @ (n_out / norm(n_out))
        _, _, k_in = _one_sided(domain, body, corner.incoming, 1.0)
        _, _, k_out = _one_sided(domain, body, corner.outgoing, 0.0)
        kappa_k = np.where(use_in, k_in, k_out)
        out[rows] = np.where(fan, 1.0, 1.0 - kappa_k * batch.distance[rows])
    return out


# Grid sampling


@dataclass
class DistanceField:
    """d_K and d̄_K sampled on a grid, with closest points and ridge labels.

    Per-node arrays have shape ``grid.shape``; only nodes strictly inside the
    domain carry data, the rest hold 0 (or -1 for indices) and are labeled
    ``RidgeLabel.EXTERIOR``.
    """

    grid: Grid
    domain: Domain
    body: ConvexBody
    location: np.ndarray
    d: np.ndarray
    dbar: np.ndarray
    closest: np.ndarray
    closest_bar: np.ndarray
    closest_arc: np.ndarray
    closest_arc_bar: np.ndarray
    multiplicity: np.ndarray
    multiplicity_bar: np.ndarray
    residual: np.ndarray
    residual_bar: np.ndarray
    gap: np.ndarray
    gap_bar: np.ndarray
    ridge_label: np.ndarray
    ridge_label_bar: np.ndarray
    _interpolators: dict = field(default_factory=dict, repr=False)

    @property
    def inside(self) -> np.ndarray:
        return self.location == Location.INSIDE

    def ridge_mask(self, reflected: bool = False) -> np.ndarray:
        labels = self.ridge_label_bar if reflected else self.ridge_label
        return (labels == RidgeLabel.MULTIPLICITY) | (labels == RidgeLabel.CURVATURE)

    def ridge_neighbourhood(self, reflected: bool = False) -> np.ndarray:
        """Ridge nodes plus nodes whose two best separated closest points are
        within ``RIDGE_GAP_CELLS`` cells of each other in gauge value."""
        gap = self.gap_bar if reflected else self.gap
        limit = settings.RIDGE_GAP_CELLS * self.body.c_upper * self.grid.h
        return self.ridge_mask(reflected) | (self.inside & (gap <= limit))

    def evaluate(self, x, name: str = "d") -> np.ndarray:
        """Bilinear interpolation of a node field at arbitrary points."""
        if name not in self._interpolators:
            self._interpolators[name] = RegularGridInterpolator(
                (self.grid.x, self.grid.y), getattr(self, name), method="linear"
            )
        return self._interpolators[name](as_points(x))


def _labels(batch: _Batch, residual: np.ndarray) -> np.ndarray:
    labels = np.full(len(residual), RidgeLabel.OFF, dtype=int)
    labels[np.abs(residual) <= settings.RIDGE_BAND] = RidgeLabel.CURVATURE
    labels[batch.multiplicity > 1] = RidgeLabel.MULTIPLICITY
    return labels


def sample_field(domain: Domain, body: ConvexBody, grid: Grid) -> DistanceField:
    """Sample d_K, d̄_K, closest points and ridge labels at every grid node."""
    xmin, xmax, ymin, ymax = domain.bounding_box
    if grid.xmin > xmin or grid.xmax < xmax or grid.ymin > ymin or grid.ymax < ymax:
        logger.warning("Grid %s does not cover the domain bounding box %s", grid.bbox, domain.bounding_box)

    pts = grid.points.reshape(-1, 2)
    location = np.asarray(domain.contains(pts))
    inside = location == Location.INSIDE
    X = pts[inside]
    logger.info("Sampling distance field on %d of %d nodes", len(X), len(pts))

    def node_array(values, fill, dtype=float):
        out = np.full(len(pts), fill, dtype=dtype)
        out[inside] = values
        return out.reshape(grid.shape)

    def vector_array(values):
        out = np.zeros((len(pts), 2))
        out[inside] = values
        return out.reshape(grid.shape + (2,))

    arrays = {}
    for suffix, k in (("", body), ("_bar", body.reflect())):
        batch = _search(domain, k, X)
        residual = _residuals(domain, k, X, batch)
        arrays["d" if not suffix else "dbar"] = node_array(batch.distance, 0.0)
        arrays["closest" + suffix] = vector_array(batch.point)
        arrays["closest_arc" + suffix] = node_array(batch.arc, -1, int)
        arrays["multiplicity" + suffix] = node_array(batch.multiplicity, 0, int)
        arrays["residual" + suffix] = node_array(residual, np.nan)
        arrays["gap" + suffix] = node_array(batch.gap, np.inf)
        arrays["ridge_label" + suffix] = node_array(_labels(batch, residual), RidgeLabel.EXTERIOR, int)

    result = DistanceField(grid=grid, domain=domain, body=body, location=location.reshape(grid.shape), **arrays)
    logger.info(
        "Ridge nodes: %d multiplicity, %d curvature",
        np.count_nonzero(result.ridge_label == RidgeLabel.MULTIPLICITY),
        np.count_nonzero(result.ridge_label == RidgeLabel.CURVATURE),
    )
    return result
