"""
Integrands of I[v] = ∫_U F(Dv) + g(v) dx.

F is a convex quadratic in the gradient and g a convex source term; both come
with first and second derivatives for the Newton solvers.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np


@dataclass(frozen=True)
class QuadraticForm:
    """F(Z) = ½⟨AZ, Z⟩ with A symmetric positive definite."""

    A: np.ndarray = field(default_factory=lambda: np.eye(2))
    kind: str = "quadratic_form"

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.shape != (2, 2):
            raise ValueError(f"F needs a 2x2 matrix, got shape {A.shape}")
        if not np.allclose(A, A.T, rtol=0.0, atol=1e-14):
            raise ValueError("F matrix must be symmetric")
        if np.linalg.eigvalsh(A)[0] <= 0.0:
            raise ValueError("F matrix must be positive definite")
        object.__setattr__(self, "A", A)

    def value(self, Z: np.ndarray) -> np.ndarray:
        return 0.5 * np.einsum("...i,ij,...j->...", Z, self.A, Z)

    def grad(self, Z: np.ndarray) -> np.ndarray:
        return Z @ self.A.T

    def hess(self, Z: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self.A, np.shape(Z)[:-1] + (2, 2))

    @property
    def ellipticity(self) -> tuple:
        """(c₈, c₉): extreme eigenvalues of D²F."""
        eig = np.linalg.eigvalsh(self.A)
        return float(eig[0]), float(eig[-1])


def half_square() -> QuadraticForm:
    """F(Z) = ½|Z|²."""
    return QuadraticForm(np.eye(2), kind="half_square")


@dataclass(frozen=True)
class LinearSource:
    """g(v) = -τv."""

    tau: float = 1.0
    kind: str = "linear"

    def value(self, v: np.ndarray) -> np.ndarray:
        return -self.tau * np.asarray(v, dtype=float)

    def deriv(self, v: np.ndarray) -> np.ndarray:
        return np.full(np.shape(v), -self.tau)

    def second_deriv(self, v: np.ndarray) -> np.ndarray:
        return np.zeros(np.shape(v))


@dataclass(frozen=True)
class QuadraticSource:
    """g(v) = ½cv² - τv with c ≥ 0."""

    c: float = 1.0
    tau: float = 1.0
    kind: str = "quadratic"

    def __post_init__(self):
        if self.c < 0.0:
            raise ValueError("quadratic source needs c >= 0 for g to be convex")

    def value(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return 0.5 * self.c * v * v - self.tau * v

    def deriv(self, v: np.ndarray) -> np.ndarray:
        return self.c * np.asarray(v, dtype=float) - self.tau

    def second_deriv(self, v: np.ndarray) -> np.ndarray:
        return np.full(np.shape(v), self.c)


Source = Union[LinearSource, QuadraticSource]


@dataclass(frozen=True)
class FunctionalSpec:
    F: QuadraticForm = field(default_factory=half_square)
    g: Source = field(default_factory=LinearSource)
    # Growth and ellipticity constants c1..c9 and the exponent q; recorded, never used.
    bound_constants: Optional[Dict[str, float]] = None

    @property
    def tau(self) -> float:
        return self.g.tau

    def with_tau(self, tau: float) -> "FunctionalSpec":
        if isinstance(self.g, LinearSource):
            g = LinearSource(tau)
        else:
            g = QuadraticSource(self.g.c, tau)
        return FunctionalSpec(self.F, g, self.bound_constants)

    def audit(self) -> List[str]:
        """Warnings for hypotheses on (F, g) that the inputs do not meet literally."""
        warnings: List[str] = []
        if isinstance(self.g, LinearSource) and self.g.tau != 0.0:
            warnings.append(
                "linear g does not satisfy g(z) <= c2|z|^2 near 0; accepted as the torsion model case"
            )
        c8, c9 = self.F.ellipticity
        if self.bound_constants:
            lo = self.bound_constants.get("c8")
            hi = self.bound_constants.get("c9")
            if lo is not None and c8 < lo:
                warnings.append(f"smallest eigenvalue of D2F is {c8:g} < c8 = {lo:g}")
            if hi is not None and c9 > hi:
                warnings.append(f"largest eigenvalue of D2F is {c9:g} > c9 = {hi:g}")
            q = self.bound_constants.get("q")
            if q is not None and not 1.0 <= q < 2.0:
                warnings.append(f"growth exponent q = {q:g} outside [1, 2)")
        return warnings
