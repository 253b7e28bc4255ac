"""Exception hierarchy shared by every gaugeplastic module."""

from typing import Optional, Tuple

import numpy as np


class GaugePlasticError(Exception):
    """Root of all package errors."""


# Geometry


class InvalidBodyError(GaugePlasticError, ValueError):
    """Body data does not describe a compact convex set with the origin inside."""


class ZeroVectorError(GaugePlasticError, ValueError):
    """A derivative was requested at the origin."""


class NondifferentiablePointError(GaugePlasticError):
    """The gauge has a kink at the requested point."""


class AmbiguousNormalError(GaugePlasticError):
    """A polygon edge shares the requested outward normal.

    The edge midpoint is kept on the exception so callers can fall back to it.
    """

    def __init__(self, message: str, midpoint: np.ndarray):
        super().__init__(message)
        self.midpoint = midpoint


class CurvatureDegenerateError(GaugePlasticError):
    """The boundary of the body has vanishing curvature in this direction."""


class InvalidDomainError(GaugePlasticError, ValueError):
    """Boundary loops are open, degenerate, cusped or wrongly oriented."""


class CornerPointError(GaugePlasticError):
    """A boundary frame was requested exactly at a corner."""


class OutsideDomainError(GaugePlasticError, ValueError):
    """The query point is not in the domain."""


class OnRidgeError(GaugePlasticError):
    """The query point is on (or numerically too close to) the ridge."""


class MultiplicityRidgeError(OnRidgeError):
    """The query point has more than one closest boundary point."""

    def __init__(self, message: str, multiplicity: int):
        super().__init__(message)
        self.multiplicity = multiplicity


class CornerShadowError(GaugePlasticError):
    """The closest point is a corner and the distance is only C^{1,1} here.

    For a tangent-continuous corner both one-sided Hessians are attached.
    """

    def __init__(
        self,
        message: str,
        one_sided: Optional[Tuple[np.ndarray, np.ndarray]] = None,
    ):
        super().__init__(message)
        self.one_sided = one_sided


class HypothesisError(GaugePlasticError):
    """An operation needs a regularity hypothesis the inputs do not satisfy."""


# Solvers


class SolverError(GaugePlasticError):
    """Base class for solver failures."""


class InfeasibleEpsError(SolverError):
    """The mollified obstacles leave no room between them."""


class NewtonStallError(SolverError):
    """Damped Newton could not reduce the merit function."""


class MaxItersExceededError(SolverError):
    """Iteration budget exhausted before the tolerance was met."""


# Input


class ProblemParseError(GaugePlasticError):
    """The problem file is unreadable or malformed."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        field: Optional[str] = None,
    ):
        self.line = line
        self.column = column
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{'; '.join(where)}: {message}" if where else message)


class ProblemValidationError(GaugePlasticError):
    """The problem file parses but describes an invalid problem."""
