import dataclasses
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..geometry.convex_body import ConvexBody
from ..geometry.distance import DistanceField, sample_field
from ..geometry.domain import Domain
from ..geometry.grid import Grid
from .discretization import Discretization
from .functional import FunctionalSpec

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 16


@dataclass
class Problem:
    """Minimize ∫_U F(Dv) + g(v) over Dv ∈ K° a.e., v = 0 on ∂U.

    The distance field and the discretization are computed on first use and
    cached on the instance.
    """

    domain: Domain
    body: ConvexBody
    functional: FunctionalSpec
    grid: Grid
    mollification_eps: float = 0.0

    def __post_init__(self):
        if min(self.grid.shape) < MIN_RESOLUTION:
            raise ValueError(
                f"grid resolution must be at least {MIN_RESOLUTION} per axis, got {self.grid.shape}"
            )
        if not self.mollification_eps >= 0.0:
            raise ValueError(f"mollification eps must be >= 0, got {self.mollification_eps}")

    @cached_property
    def field(self) -> DistanceField:
        return sample_field(self.domain, self.body, self.grid)

    @cached_property
    def discretization(self) -> Discretization:
        return Discretization.build(self.domain, self.grid)

    @property
    def inside(self) -> np.ndarray:
        return self.discretization.active

    def replace(self, **changes) -> "Problem":
        """Copy with some fields changed; caches that still apply are shared."""
        new = dataclasses.replace(self, **changes)
        if "domain" not in changes and "grid" not in changes and "discretization" in self.__dict__:
            new.__dict__["discretization"] = self.discretization
        if not ({"domain", "grid", "body"} & changes.keys()) and "field" in self.__dict__:
            new.__dict__["field"] = self.field
        return new

    def with_body(self, body: ConvexBody) -> "Problem":
        return self.replace(body=body)

    def with_resolution(self, n: int) -> "Problem":
        return self.replace(grid=self.grid.with_resolution(n))
