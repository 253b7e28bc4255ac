from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform node grid over a bounding box, indexed [i, j] with i along x."""

    nx: int
    ny: int
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid needs at least 2 nodes per axis, got {self.nx}x{self.ny}")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("grid bounding box is empty")

    @classmethod
    def covering(
        cls,
        bbox: Tuple[float, float, float, float],
        n: int,
        ny: Optional[int] = None,
        padding: float = 0.0,
    ) -> "Grid":
        """Grid with n (and ny) nodes spanning bbox = (xmin, xmax, ymin, ymax).

        ``padding`` enlarges the box by that fraction of its larger side.
        """
        xmin, xmax, ymin, ymax = bbox
        pad = padding * max(xmax - xmin, ymax - ymin)
        return cls(n, ny or n, xmin - pad, xmax + pad, ymin - pad, ymax + pad)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nx, self.ny

    @property
    def bbox(self) -> Tuple[float, float, float, float]:
        return self.xmin, self.xmax, self.ymin, self.ymax

    @property
    def hx(self) -> float:
        return (self.xmax - self.xmin) / (self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.ymax - self.ymin) / (self.ny - 1)

    @property
    def h(self) -> float:
        return max(self.hx, self.hy)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.ymin, self.ymax, self.ny)

    @cached_property
    def points(self) -> np.ndarray:
        xx, yy = np.meshgrid(self.x, self.y, indexing="ij")
        return np.stack([xx, yy], axis=-1)

    def with_resolution(self, nx: int, ny: Optional[int] = None) -> "Grid":
        return Grid(nx, ny or nx, self.xmin, self.xmax, self.ymin, self.ymax)

    def nearest_index(self, x: np.ndarray) -> np.ndarray:
        """Integer (i, j) of the node nearest to each point, clipped to the grid."""
        x = np.asarray(x, dtype=float)
        i = np.rint((x[..., 0] - self.xmin) / self.hx).astype(int)
        j = np.rint((x[..., 1] - self.ymin) / self.hy).astype(int)
        return np.stack([np.clip(i, 0, self.nx - 1), np.clip(j, 0, self.ny - 1)], axis=-1)
