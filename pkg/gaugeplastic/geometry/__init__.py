from .convex_body import (
    ConvexBody,
    DiskBody,
    EllipseBody,
    PBallBody,
    PolarBody,
    PolygonBody,
    RadialBody,
    ReflectedBody,
    fourier_body,
    hausdorff_distance,
    hessian_bound_diagnostic,
    smooth_approximation,
    square_body,
)
from .distance import (
    ClosestPointResult,
    DistanceField,
    Hit,
    RidgeLabel,
    closest_points,
    distance,
    distance_reflected,
    grad_distance,
    hess_distance,
    ridge_residual,
    sample_field,
)
from .domain import (
    BoundaryArc,
    BoundaryFrame,
    CircularArc,
    Corner,
    CornerClass,
    Domain,
    Location,
    ParametricArc,
    SegmentArc,
)
from .grid import Grid
from .shapes import (
    annular_sector_domain,
    annulus_domain,
    disk_domain,
    ellipse_domain,
    elliptic_arc,
    l_shape_domain,
    polygon_domain,
    rectangle_domain,
    square_domain,
)

__all__ = [
    "BoundaryArc",
    "BoundaryFrame",
    "CircularArc",
    "ClosestPointResult",
    "ConvexBody",
    "Corner",
    "CornerClass",
    "DiskBody",
    "DistanceField",
    "Domain",
    "EllipseBody",
    "Grid",
    "Hit",
    "Location",
    "PBallBody",
    "ParametricArc",
    "PolarBody",
    "PolygonBody",
    "RadialBody",
    "ReflectedBody",
    "RidgeLabel",
    "SegmentArc",
    "annular_sector_domain",
    "annulus_domain",
    "closest_points",
    "disk_domain",
    "distance",
    "distance_reflected",
    "ellipse_domain",
    "elliptic_arc",
    "fourier_body",
    "grad_distance",
    "hausdorff_distance",
    "hess_distance",
    "hessian_bound_diagnostic",
    "l_shape_domain",
    "polygon_domain",
    "rectangle_domain",
    "ridge_residual",
    "sample_field",
    "smooth_approximation",
    "square_body",
    "square_domain",
]
