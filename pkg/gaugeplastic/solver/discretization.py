"""
P1 discretization on the Friedrichs–Keller split of a uniform grid.

Every grid cell [i, i+1] × [j, j+1] is cut into two triangles

    a: (i, j), (i+1, j), (i+1, j+1)
    b: (i, j), (i, j+1), (i+1, j+1)

whose gradients are one-sided differences along two grid edges. Unknowns live
on the nodes strictly inside U. On a grid edge from an inside node p to a
node q that is not inside, the value at q is replaced by the ghost value that
makes the linear interpolant vanish where the edge crosses ∂U.
"""

import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import scipy.sparse as sp

from ..geometry.convex_body import ConvexBody
from ..geometry.domain import Domain, Location
from ..geometry.grid import Grid
from ..solver_settings import settings

logger = logging.getLogger(__name__)

BISECTION_STEPS = 40


def _crossing_fraction(domain: Domain, start: np.ndarray, end: np.ndarray) -> np.ndarray:
    """Fraction along start → end where the segment leaves U; start is inside."""
    if len(start) == 0:
        return np.empty(0)
    lo = np.zeros(len(start))
    hi = np.ones(len(start))
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        inside = np.asarray(domain.contains(start + mid[:, None] * (end - start))) == Location.INSIDE
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return np.clip(0.5 * (lo + hi), settings.CUT_CELL_MIN_FRACTION, 1.0)


def _edge_coefficients(
    domain: Domain, points: np.ndarray, active: np.ndarray, spacing: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Coefficients (c_p, c_q) with (u_q - u_p)/spacing ≈ c_p·u_p + c_q·u_q.

    ``points`` and ``active`` are (m, 2, 2) / (m, 2) stacks of edge endpoints p, q.
    """
    p_on = active[:, 0]
    q_on = active[:, 1]
    c_p = np.zeros(len(active))
    c_q = np.zeros(len(active))

    both = p_on & q_on
    c_p[both] = -1.0 / spacing
    c_q[both] = 1.0 / spacing

    only_p = p_on & ~q_on
    theta = _crossing_fraction(domain, points[only_p, 0], points[only_p, 1])
    c_p[only_p] = -1.0 / (theta * spacing)

    only_q = q_on & ~p_on
    theta = _crossing_fraction(domain, points[only_q, 1], points[only_q, 0])
    c_q[only_q] = 1.0 / (theta * spacing)
    return c_p, c_q


def covered_fraction(s: np.ndarray) -> np.ndarray:
    """Area fraction of each triangle where the linear interpolant of its vertex values (m, 3) is positive."""
    s = np.sort(np.asarray(s, dtype=float), axis=1)
    a, b, c = s[:, 0], s[:, 1], s[:, 2]
    out = np.where(a >= 0.0, 1.0, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        # One vertex outside: drop the corner at a
        one_out = (a < 0.0) & (b >= 0.0)
        out = np.where(one_out, 1.0 - a**2 / ((b - a) * (c - a)), out)
        # One vertex inside: keep the corner at c
        one_in = (b < 0.0) & (c > 0.0)
        out = np.where(one_in, c**2 / ((c - a) * (c - b)), out)
    return out


@dataclass
class Discretization:
    grid: Grid
    active: np.ndarray
    index: np.ndarray
    Dx: sp.csr_matrix
    Dy: sp.csr_matrix
    tri_area: np.ndarray
    tri_vertices: np.ndarray
    tri_full: np.ndarray
    weights: np.ndarray
    # Fraction of each triangle inside U, from the signed boundary distance at its vertices
    tri_cover: np.ndarray
    _stiffness_cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, domain: Domain, grid: Grid) -> "Discretization":
        nx, ny = grid.shape
        pts = grid.points
        active = np.asarray(domain.contains(pts.reshape(-1, 2))).reshape(grid.shape) == Location.INSIDE
        index = np.full(grid.shape, -1)
        index[active] = np.arange(np.count_nonzero(active))
        signed = np.where(active, 1.0, -1.0) * domain.boundary_distance(pts)

        x_pts = np.stack([pts[:-1, :], pts[1:, :]], axis=-2).reshape(-1, 2, 2)
        x_act = np.stack([active[:-1, :], active[1:, :]], axis=-1).reshape(-1, 2)
        cx_p, cx_q = (c.reshape(nx - 1, ny) for c in _edge_coefficients(domain, x_pts, x_act, grid.hx))
        y_pts = np.stack([pts[:, :-1], pts[:, 1:]], axis=-2).reshape(-1, 2, 2)
        y_act = np.stack([active[:, :-1], active[:, 1:]], axis=-1).reshape(-1, 2)
        cy_p, cy_q = (c.reshape(nx, ny - 1) for c in _edge_coefficients(domain, y_pts, y_act, grid.hy))

        i, j = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1), indexing="ij")
        i = i.ravel()
        j = j.ravel()
        # (x-edge p, x-edge q, x coefficients) and (y-edge p, y-edge q, y coefficients) per triangle kind
        kinds = [
            (
                (i, j),
                (i + 1, j),
                (cx_p[i, j], cx_q[i, j]),
                (i + 1, j),
                (i + 1, j + 1),
                (cy_p[i + 1, j], cy_q[i + 1, j]),
                ((i, j), (i + 1, j), (i + 1, j + 1)),
            ),
            (
                (i, j + 1),
                (i + 1, j + 1),
                (cx_p[i, j + 1], cx_q[i, j + 1]),
                (i, j),
                (i, j + 1),
                (cy_p[i, j], cy_q[i, j]),
                ((i, j), (i, j + 1), (i + 1, j + 1)),
            ),
        ]

        rows_x, cols_x, vals_x = [], [], []
        rows_y, cols_y, vals_y = [], [], []
        vertices = []
        cover = []
        offset = 0
        for xp, xq, (cxp, cxq), yp, yq, (cyp, cyq), corners in kinds:
            verts = np.stack([index[node] for node in corners], axis=-1)
            keep = np.any(verts >= 0, axis=1)
            n_keep = int(np.count_nonzero(keep))
            rows = offset + np.arange(n_keep)
            for node, coef, r_list, c_list, v_list in (
                (xp, cxp, rows_x, cols_x, vals_x),
                (xq, cxq, rows_x, cols_x, vals_x),
                (yp, cyp, rows_y, cols_y, vals_y),
                (yq, cyq, rows_y, cols_y, vals_y),
            ):
                col = index[node][keep]
                val = coef[keep]
                used = (col >= 0) & (val != 0.0)
                r_list.append(rows[used])
                c_list.append(col[used])
                v_list.append(val[used])
            vertices.append(verts[keep])
            cover.append(covered_fraction(np.stack([signed[node] for node in corners], axis=-1)[keep]))
            offset += n_keep

        n_tri = offset
        n_active = int(np.count_nonzero(active))
        shape = (n_tri, n_active)
        Dx = sp.csr_matrix((np.concatenate(vals_x), (np.concatenate(rows_x), np.concatenate(cols_x))), shape=shape)
        Dy = sp.csr_matrix((np.concatenate(vals_y), (np.concatenate(rows_y), np.concatenate(cols_y))), shape=shape)
        tri_vertices = np.concatenate(vertices)
        weights = np.full(n_active, grid.hx * grid.hy)

        logger.info("Discretization: %d active nodes, %d triangles", n_active, n_tri)
        return cls(
            grid=grid,
            active=active,
            index=index,
            Dx=Dx,
            Dy=Dy,
            tri_area=np.full(n_tri, 0.5 * grid.hx * grid.hy),
            tri_vertices=tri_vertices,
            tri_full=np.all(tri_vertices >= 0, axis=1),
            weights=weights,
            tri_cover=np.concatenate(cover),
        )

    @property
    def n_active(self) -> int:
        return int(self.index.max()) + 1

    def stiffness(self, A: np.ndarray) -> sp.csr_matrix:
        """Matrix of u ↦ Σ_T |T|·½⟨A∇u, ∇u⟩."""
        a = tuple(np.asarray(A, dtype=float).ravel())
        if a not in self._stiffness_cache:
            self._stiffness_cache[a] = self._assemble(a)
        return self._stiffness_cache[a]

    def _assemble(self, a: tuple) -> sp.csr_matrix:
        S = sp.diags(self.tri_area)
        Dx, Dy = self.Dx, self.Dy
        K = a[0] * (Dx.T @ S @ Dx) + a[3] * (Dy.T @ S @ Dy)
        if a[1] != 0.0 or a[2] != 0.0:
            K = K + a[1] * (Dx.T @ S @ Dy) + a[2] * (Dy.T @ S @ Dx)
        return sp.csr_matrix(K)

    def gradients(self, u: np.ndarray) -> np.ndarray:
        """Per-triangle gradients (n_tri, 2) of active-node values u."""
        return np.stack([self.Dx @ u, self.Dy @ u], axis=-1)

    def to_grid(self, u: np.ndarray, fill: float = 0.0) -> np.ndarray:
        out = np.full(self.grid.shape, fill, dtype=float)
        out[self.active] = u
        return out

    def from_grid(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values, dtype=float)[self.active]

    def node_gradients(self, u: np.ndarray) -> np.ndarray:
        """Mean gradient of the fully-active triangles around each node, NaN where there are none."""
        grads = self.gradients(u)[self.tri_full]
        verts = self.tri_vertices[self.tri_full]
        total = np.zeros((self.n_active, 2))
        count = np.zeros(self.n_active)
        for k in range(3):
            np.add.at(total, verts[:, k], grads)
            np.add.at(count, verts[:, k], 1.0)
        with np.errstate(invalid="ignore", divide="ignore"):
            return total / count[:, None]

    def max_gauge_of_gradient(self, body: ConvexBody, u: np.ndarray) -> float:
        """max γ°(∇_T u) over fully-active triangles."""
        grads = self.gradients(u)[self.tri_full]
        if len(grads) == 0:
            return 0.0
        return float(np.max(body.polar_gauge(grads)))
