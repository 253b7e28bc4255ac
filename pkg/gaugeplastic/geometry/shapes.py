"""Ready-made domains used by the problem file presets and the tests."""

from typing import Sequence, Tuple

import numpy as np

from ..errors import InvalidDomainError
from .domain import CircularArc, Domain, ParametricArc, SegmentArc

TWO_PI = 2.0 * np.pi


def _direction(angle: float) -> np.ndarray:
    return np.array([np.cos(angle), np.sin(angle)])


def disk_domain(radius: float = 1.0, center: Tuple[float, float] = (0.0, 0.0)) -> Domain:
    return Domain([[CircularArc(center, radius, 0.0, TWO_PI)]])


def polygon_domain(vertices: Sequence[Sequence[float]]) -> Domain:
    """Polygon through the given counterclockwise vertices."""
    pts = np.asarray(vertices, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise InvalidDomainError("polygon domain needs at least three 2D vertices")
    arcs = [SegmentArc(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
    return Domain([arcs])


def rectangle_domain(xmin: float, xmax: float, ymin: float, ymax: float) -> Domain:
    return polygon_domain([(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)])


def square_domain(half_width: float = 1.0) -> Domain:
    return rectangle_domain(-half_width, half_width, -half_width, half_width)


def l_shape_domain(size: float = 1.0) -> Domain:
    """[-s, s]² with the upper right quadrant removed; one strict reentrant corner."""
    s = size
    return polygon_domain([(-s, -s), (s, -s), (s, 0.0), (0.0, 0.0), (0.0, s), (-s, s)])


def elliptic_arc(
    center: Tuple[float, float], a: float, b: float, angle0: float, angle1: float
) -> ParametricArc:
    """Arc of the axis-aligned ellipse (x, y) = center + (a cos θ, b sin θ), θ from angle0 to angle1."""
    if not (a > 0.0 and b > 0.0):
        raise InvalidDomainError("ellipse semi-axes must be positive")
    sweep = float(angle1) - float(angle0)
    if sweep == 0.0 or abs(sweep) > TWO_PI + 1e-12:
        raise InvalidDomainError("elliptic arc sweep must be nonzero and at most 2π")
    c = np.asarray(center, dtype=float)

    def curve(t):
        th = angle0 + sweep * t
        return c + np.stack([a * np.cos(th), b * np.sin(th)], axis=-1)

    def d1(t):
        th = angle0 + sweep * t
        return sweep * np.stack([-a * np.sin(th), b * np.cos(th)], axis=-1)

    def d2(t):
        th = angle0 + sweep * t
        return -(sweep**2) * np.stack([a * np.cos(th), b * np.sin(th)], axis=-1)

    return ParametricArc(curve, d1, d2, label=f"ellipse({a:g}, {b:g})")


def ellipse_domain(a: float, b: float) -> Domain:
    return Domain([[elliptic_arc((0.0, 0.0), a, b, 0.0, TWO_PI)]])


def annulus_domain(r_in: float, r_out: float) -> Domain:
    if not 0.0 < r_in < r_out:
        raise InvalidDomainError("annulus needs 0 < r_in < r_out")
    outer = CircularArc((0.0, 0.0), r_out, 0.0, TWO_PI)
    hole = CircularArc((0.0, 0.0), r_in, TWO_PI, 0.0)
    return Domain([[outer], [hole]])


def annular_sector_domain(
    r_in: float = 0.5,
    r_out: float = 1.0,
    angle: float = np.pi,
    fillet: float = 0.1,
) -> Domain:
    """Sector {r_in < |x| < r_out, 0 < arg x < angle}, corners rounded by radius ``fillet``.

    The inner arc is concave toward the domain, so for angle > 0 the domain is
    not convex. With fillet = 0 the four corners stay sharp (opening π/2).
    """
    if not 0.0 < r_in < r_out:
        raise InvalidDomainError("annular sector needs 0 < r_in < r_out")
    if not 0.0 < angle < TWO_PI:
        raise InvalidDomainError("annular sector angle must lie in (0, 2π)")
    origin = np.zeros(2)

    if fillet == 0.0:
        loop = [
            SegmentArc(r_in * _direction(0.0), r_out * _direction(0.0)),
            CircularArc(origin, r_out, 0.0, angle),
            SegmentArc(r_out * _direction(angle), r_in * _direction(angle)),
            CircularArc(origin, r_in, angle, 0.0),
        ]
        return Domain([loop])

    rho = float(fillet)
    if not 0.0 < rho < 0.5 * (r_out - r_in):
        raise InvalidDomainError("fillet radius must lie in (0, (r_out - r_in)/2)")

    # Outer fillet: tangent to the x-axis and internally tangent to |x| = r_out.
    c_out = np.array([np.sqrt((r_out - rho) ** 2 - rho**2), rho])
    beta_out = float(np.arctan2(c_out[1], c_out[0]))
    # Inner fillet: tangent to the x-axis and externally tangent to |x| = r_in.
    c_in = np.array([np.sqrt((r_in + rho) ** 2 - rho**2), rho])
    beta_in = float(np.arctan2(c_in[1], c_in[0]))
    if 2.0 * max(beta_out, beta_in) >= angle or c_in[0] >= c_out[0]:
        raise InvalidDomainError("fillet radius too large for this sector")

    # Top fillets mirror the bottom ones across the bisector at angle/2.
    c_out_top = (r_out - rho) * _direction(angle - beta_out)
    c_in_top = (r_in + rho) * _direction(angle - beta_in)

    bottom_outer = CircularArc(c_out, rho, -0.5 * np.pi, beta_out)
    outer = CircularArc(origin, r_out, beta_out, angle - beta_out)
    top_outer = CircularArc(c_out_top, rho, angle - beta_out, angle + 0.5 * np.pi)
    top_inner = CircularArc(c_in_top, rho, angle - 1.5 * np.pi, angle - beta_in - np.pi)
    inner = CircularArc(origin, r_in, angle - beta_in, beta_in)
    bottom_inner = CircularArc(c_in, rho, beta_in + np.pi, 1.5 * np.pi)

    loop = [
        SegmentArc(bottom_inner.end, bottom_outer.start),
        bottom_outer,
        outer,
        top_outer,
        SegmentArc(top_outer.end, top_inner.start),
        top_inner,
        inner,
        bottom_inner,
    ]
    return Domain([loop])


PRESETS = {
    "disk": disk_domain,
    "square": square_domain,
    "rectangle": rectangle_domain,
    "polygon": polygon_domain,
    "l_shape": l_shape_domain,
    "ellipse": ellipse_domain,
    "annulus": annulus_domain,
    "annular_sector": annular_sector_domain,
}
