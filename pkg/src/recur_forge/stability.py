"""Equilibria and their linear stability.

Every real root ``r`` of the characteristic cubic gives an equilibrium
``(r, r)``. For ``a = b = c = 1`` the linearization at ``(α, α)`` has the
characteristic polynomial

    P(λ) = λ⁴ + (2α³ - α² - 2α - 1)/α⁶ · λ² + 1/α⁶

whose roots are available in closed form, and the scalar equation has
``Q(λ) = λ² + (α+1)/α³ · λ + 1/α³``.
"""
from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .characteristic import Coefficients, CubicRoots
from .errors import InvalidInputError

__all__ = [
    "Equilibrium",
    "ScalarStabilityReport",
    "StabilityReport",
    "Verdict",
    "equilibria",
    "linearization_spectrum",
    "numeric_jacobian",
    "scalar_stability_test",
    "tribonacci_p_coefficients",
    "tribonacci_system_spectrum",
]

STABILITY_MARGIN = 1e-12
ALPHA_GUARD = 1e-6


class Verdict(str, enum.Enum):
    STABLE = "locally_asymptotically_stable"
    UNSTABLE = "unstable"
    INCONCLUSIVE = "inconclusive"


def verdict_for(radius: float) -> Verdict:
    if radius < 1.0 - STABILITY_MARGIN:
        return Verdict.STABLE
    if radius > 1.0 + STABILITY_MARGIN:
        return Verdict.UNSTABLE
    return Verdict.INCONCLUSIVE


@dataclass(frozen=True)
class Equilibrium:
    value: float
    source_root: str

    def residual(self, coeffs: Coefficients) -> float:
        """Relative residual of ``x³ = a x² + b x + c``."""
        a, b, c = coeffs.as_floats()
        x = self.value
        lhs, rhs = x ** 3, a * x * x + b * x + c
        return abs(lhs - rhs) / max(1.0, abs(lhs), abs(a * x * x) + abs(b * x) + abs(c))


@dataclass(frozen=True)
class StabilityReport:
    equilibrium: Equilibrium
    eigenvalues: tuple[complex, ...]
    eigen_moduli: tuple[float, ...]
    spectral_radius: float
    verdict: Verdict


def equilibria(coeffs: Coefficients, roots: CubicRoots) -> list[Equilibrium]:
    """One equilibrium ``(r, r)`` per distinct real root; complex roots give none."""
    return [Equilibrium(r, name) for name, r in roots.distinct_real_roots()]


def _report(eq: Equilibrium, eigs) -> StabilityReport:
    eigs = tuple(complex(e) for e in eigs)
    moduli = tuple(abs(e) for e in eigs)
    radius = max(moduli)
    return StabilityReport(eq, eigs, moduli, radius, verdict_for(radius))


def _guard_alpha(alpha: float) -> None:
    if abs(alpha ** 3 - alpha ** 2 - alpha - 1) > ALPHA_GUARD:
        raise InvalidInputError(
            f"alpha={alpha!r} is not the equilibrium of the a=b=c=1 system (alpha^3 != alpha^2 + alpha + 1)"
        )


def tribonacci_p_coefficients(alpha: float) -> tuple[float, float, float, float, float]:
    """Coefficients of ``P(λ)`` from degree 4 down to 0."""
    a6 = alpha ** 6
    return 1.0, 0.0, (2 * alpha ** 3 - alpha ** 2 - 2 * alpha - 1) / a6, 0.0, 1.0 / a6


def tribonacci_system_spectrum(alpha: float) -> StabilityReport:
    """Closed-form eigenvalues of the linearization at ``(α, α)`` for ``a = b = c = 1``.

    ``λ_{1,2} = ±(1 + α + √D) / (2α³)`` and ``λ_{3,4} = ±(-1 - α + √D) / (2α³)``
    with ``D = -4α³ + α² + 2α + 1``, taken in complex arithmetic when ``D < 0``.
    Each eigenvalue is checked to be a root of ``P`` to 1e-9.
    """
    _guard_alpha(alpha)
    a3 = alpha ** 3
    root_d = cmath.sqrt(-4 * a3 + alpha ** 2 + 2 * alpha + 1)
    l1 = 0.5 * (1 + alpha + root_d) / a3
    l3 = 0.5 * (-1 - alpha + root_d) / a3
    lambdas = (l1, -l1, l3, -l3)
    coeffs = tribonacci_p_coefficients(alpha)
    for lam in lambdas:
        if abs(np.polyval(coeffs, lam)) > 1e-9:
            raise ArithmeticError(f"closed-form eigenvalue {lam} is not a root of P")
    return _report(Equilibrium(alpha, "alpha"), lambdas)


@dataclass(frozen=True)
class ScalarStabilityReport:
    alpha: float
    linear_coefficient: float
    constant_coefficient: float
    coefficient_sum: float
    passed: bool
    roots: tuple[complex, complex]
    root_moduli: tuple[float, float]


def scalar_stability_test(alpha: float) -> ScalarStabilityReport:
    """Coefficient test for ``Q(λ) = λ² + (α+1)/α³ λ + 1/α³``.

    ``|(α+1)/α³| + |1/α³| < 1`` confines both roots of ``Q`` to the open unit
    disk. The explicit roots are returned as a cross-check.
    """
    _guard_alpha(alpha)
    p = (alpha + 1) / alpha ** 3
    q = 1 / alpha ** 3
    total = abs(p) + abs(q)
    disc = cmath.sqrt(p * p - 4 * q)
    roots = ((-p + disc) / 2, (-p - disc) / 2)
    return ScalarStabilityReport(alpha, p, q, total, total < 1, roots, (abs(roots[0]), abs(roots[1])))


def _vector_field(coeffs: Coefficients, state: np.ndarray) -> np.ndarray:
    """First-order form of the system in state order ``(x_n, x_{n-1}, y_n, y_{n-1})``."""
    a, b, c = coeffs.as_floats()
    x, xp, y, yp = state
    f = (a * y * xp + b * xp + c) / (y * xp)
    g = (a * x * yp + b * yp + c) / (x * yp)
    return np.array([f, x, g, y])


def numeric_jacobian(coeffs: Coefficients, eq: Equilibrium, step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian at ``(x̄, x̄, x̄, x̄)``.

    Rows are ``(f, x_n, g, y_n)`` and columns ``(x_n, x_{n-1}, y_n, y_{n-1})``,
    so rows 1 and 3 are the shift rows of the companion structure.
    """
    if not 0 < step <= 1e-3:
        raise InvalidInputError("step must lie in (0, 1e-3]")
    if eq.value == 0:
        raise InvalidInputError("equilibrium must be nonzero")
    center = np.full(4, float(eq.value))
    h = step * max(1.0, abs(eq.value))
    jac = np.empty((4, 4))
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        jac[:, j] = (_vector_field(coeffs, center + e) - _vector_field(coeffs, center - e)) / (2 * h)
    # shift rows are linear, keep them exact
    jac[1] = [1.0, 0.0, 0.0, 0.0]
    jac[3] = [0.0, 0.0, 1.0, 0.0]
    return jac


def linearization_spectrum(coeffs: Coefficients, eq: Equilibrium, step: float = 1e-6) -> StabilityReport:
    """Stability report from the eigenvalues of :func:`numeric_jacobian`."""
    return _report(eq, np.linalg.eigvals(numeric_jacobian(coeffs, eq, step)))
