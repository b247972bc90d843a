"""Coefficients and the characteristic cubic ``λ³ - aλ² - bλ - c = 0``.

Every linear recurrence in the package shares this cubic, so its roots and
their multiplicity pattern decide which Binet formula applies and whether
term ratios converge.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

from .errors import InvalidInputError

__all__ = [
    "Coefficients",
    "CubicRoots",
    "RootCase",
    "TRIBONACCI_CONSTANT",
    "is_exact",
    "solve_characteristic",
    "vieta_residuals",
]

# Real root of λ³ = λ² + λ + 1, closed form (1 + ∛(19+3√33) + ∛(19-3√33))/3.
TRIBONACCI_CONSTANT = 1.839286755214161

# Backward-error threshold for declaring a multiple root, relative to
# 1 + |a| + |b| + |c|.
MULTIPLICITY_RTOL = 1e-13

# Margin used when comparing root moduli.
MODULUS_RTOL = 1e-8


def is_exact(value) -> bool:
    """True for ints and Fractions, the types exact mode accepts."""
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


class RootCase(str, enum.Enum):
    TRIPLE_REAL = "triple_real"
    DOUBLE_REAL = "double_real"
    DISTINCT_REAL = "distinct_real"
    REAL_PLUS_CONJUGATE_PAIR = "real_plus_conjugate_pair"


@dataclass(frozen=True)
class Coefficients:
    """Parameter triple ``(a, b, c)`` shared by the nonlinear system and the
    linear recurrences. ``c`` must be nonzero.

    Values may be ints, Fractions or floats. Exact mode needs all three to be
    ints or Fractions.
    """

    a: Number
    b: Number
    c: Number

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
                raise InvalidInputError(f"coefficient {name} must be a real number, got {value!r}")
            if isinstance(value, float) and not math.isfinite(value):
                raise InvalidInputError(f"coefficient {name} must be finite, got {value!r}")
        if self.c == 0:
            raise InvalidInputError("coefficient c must be nonzero (c = 0 is outside the solvable family)")

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in (self.a, self.b, self.c))

    def as_floats(self) -> tuple[float, float, float]:
        return float(self.a), float(self.b), float(self.c)

    def as_fractions(self) -> tuple[Fraction, Fraction, Fraction]:
        if not self.exact:
            raise InvalidInputError("exact mode requires rational coefficients (int or Fraction)")
        return Fraction(self.a), Fraction(self.b), Fraction(self.c)


@dataclass(frozen=True)
class CubicRoots:
    """Roots of the characteristic cubic with their multiplicity pattern.

    ``alpha`` is always real. For a double root the repeated value is in
    ``beta`` and ``gamma`` and ``alpha`` holds the simple root. For a
    conjugate pair ``gamma == beta.conjugate()`` exactly.

    ``dominant_is_unique_real`` is true when ``|alpha|`` strictly exceeds
    ``|beta|`` and ``|gamma|``; it is false for a triple root.
    """

    case: RootCase
    alpha: float
    beta: complex
    gamma: complex
    dominant_is_unique_real: bool

    @property
    def roots(self) -> tuple[complex, complex, complex]:
        return complex(self.alpha), self.beta, self.gamma

    def distinct_real_roots(self) -> list[tuple[str, float]]:
        """Distinct real roots labelled by their slot name."""
        if self.case is RootCase.TRIPLE_REAL:
            return [("alpha", self.alpha)]
        if self.case is RootCase.DOUBLE_REAL:
            return [("alpha", self.alpha), ("beta", self.beta.real)]
        if self.case is RootCase.DISTINCT_REAL:
            return [("alpha", self.alpha), ("beta", self.beta.real), ("gamma", self.gamma.real)]
        return [("alpha", self.alpha)]

    def dominant_real_root(self) -> float | None:
        """Real root whose modulus strictly exceeds that of every other
        distinct root, or None when no such root exists."""
        if self.dominant_is_unique_real or self.case is RootCase.TRIPLE_REAL:
            return self.alpha
        if self.case is RootCase.DOUBLE_REAL:
            r = self.beta.real
            if abs(r) - abs(self.alpha) > MODULUS_RTOL * (1.0 + abs(r)):
                return r
        return None


def _poly(a, b, c, x):
    return ((x - a) * x - b) * x - c


def _dpoly(a, b, x):
    return (3.0 * x - 2.0 * a) * x - b


def _newton(a, b, c, x, steps=4):
    """Polish a simple (real or complex) root. A step is rejected if it does not reduce the
    residual, which protects roots that are already at rounding level."""
    best, best_res = x, abs(_poly(a, b, c, x))
    for _ in range(steps):
        d = _dpoly(a, b, best)
        if d == 0:
            break
        cand = best - _poly(a, b, c, best) / d
        res = abs(_poly(a, b, c, cand))
        if res >= best_res:
            break
        best, best_res = cand, res
    return best


def _depressed_roots(a: float, b: float, c: float) -> tuple[list[float], complex | None]:
    """Analytic roots via the depressed cubic ``t³ + pt + q`` with ``λ = t + a/3``.

    Returns the real roots and, when only one real root exists, one member of
    the complex pair.
    """
    shift = a / 3.0
    p = -b - a * a / 3.0
    q = -c - a * b / 3.0 - 2.0 * a ** 3 / 27.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0:
        sq = math.sqrt(disc)
        # pick the sign that avoids cancellation, then recover the partner
        u = -q / 2.0 - math.copysign(sq, q)
        u = math.copysign(abs(u) ** (1.0 / 3.0), u)
        v = -p / (3.0 * u) if u != 0 else 0.0
        r = u + v + shift
        # deflate: λ³ - aλ² - bλ - c = (λ - r)(λ² + eλ + f)
        e = r - a
        f = c / r if r != 0 else r * e - b
        pair = (-e + cmath.sqrt(e * e - 4.0 * f)) / 2.0
        return [r], complex(pair.real, abs(pair.imag))
    if p == 0:
        return [shift, shift, shift], None
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    arg = max(-1.0, min(1.0, arg))
    theta = math.acos(arg) / 3.0
    ts = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) for k in range(3)]
    return [t + shift for t in ts], None


def _multiple_root(a: float, b: float, c: float):
    """Detect a triple or double root by backward error.

    A root of multiplicity ``m`` is declared when the coefficients differ from
    those of an exact ``(λ - r)^m`` factorisation by at most
    ``MULTIPLICITY_RTOL * (1 + |a| + |b| + |c|)``. Returns ``("triple", r)``,
    ``("double", r)`` or None.
    """
    eps = MULTIPLICITY_RTOL * (1.0 + abs(a) + abs(b) + abs(c))
    s = a / 3.0
    if abs(b + 3.0 * s * s) <= eps and abs(c - s ** 3) <= eps:
        return "triple", s

    # a double root of p is a root of p' = 3λ² - 2aλ - b
    disc = a * a + 3.0 * b
    if disc < -eps:
        return None
    sq = math.sqrt(max(disc, 0.0))
    cands = []
    big = (a + math.copysign(sq, a)) / 3.0
    cands.append(big)
    if big != 0:
        cands.append(-b / (3.0 * big))
    best = None
    for r in cands:
        # polish r as a root of p'
        for _ in range(3):
            d2 = 6.0 * r - 2.0 * a
            if d2 == 0:
                break
            r -= _dpoly(a, b, r) / d2
        simple = a - 2.0 * r
        dev = max(abs(b - (3.0 * r * r - 2.0 * a * r)), abs(c - r * r * simple))
        if dev <= eps and (best is None or dev < best[0]):
            best = (dev, r)
    if best is None:
        return None
    return "double", best[1]


def _dominates(big: float, others, tol_scale: float) -> bool:
    return all(abs(big) - abs(o) > MODULUS_RTOL * (1.0 + tol_scale) for o in others)


def solve_characteristic(coeffs: Coefficients) -> CubicRoots:
    """Solve ``λ³ - aλ² - bλ - c = 0`` and classify the roots.

    Parameters
    ----------
    coeffs : Coefficients
        The parameter triple; exact values are converted to float.

    Returns
    -------
    CubicRoots
        Roots refined by Newton steps after the analytic solve.

    Examples
    --------
    >>> r = solve_characteristic(Coefficients(1, 1, 1))
    >>> r.case.value, round(r.alpha, 9)
    ('real_plus_conjugate_pair', 1.839286755)
    """
    a, b, c = coeffs.as_floats()

    mult = _multiple_root(a, b, c)
    if mult is not None and mult[0] == "triple":
        r = mult[1]
        return CubicRoots(RootCase.TRIPLE_REAL, r, complex(r), complex(r), False)
    if mult is not None:
        r = mult[1]
        simple = _newton(a, b, c, a - 2.0 * r)
        dominant = _dominates(simple, [r], max(abs(simple), abs(r)))
        return CubicRoots(RootCase.DOUBLE_REAL, simple, complex(r), complex(r), dominant)

    reals, pair = _depressed_roots(a, b, c)
    if pair is not None:
        r = _newton(a, b, c, reals[0])
        z = _newton(a, b, c, pair)
        if z.imag == 0:
            # refinement collapsed the pair onto the real axis; keep the
            # conjugate structure with the analytic imaginary part
            z = complex(z.real, abs(pair.imag))
        z = complex(z.real, abs(z.imag))
        dominant = _dominates(r, [abs(z)], max(abs(r), abs(z)))
        return CubicRoots(RootCase.REAL_PLUS_CONJUGATE_PAIR, r, z, z.conjugate(), dominant)

    rs = sorted((_newton(a, b, c, x) for x in reals), key=lambda x: (-abs(x), -x))
    top = rs[0]
    if _dominates(top, rs[1:], abs(top)):
        alpha, rest, dominant = top, rs[1:], True
    else:
        by_value = sorted(rs, reverse=True)
        alpha, rest, dominant = by_value[0], by_value[1:], False
    beta, gamma = rest
    return CubicRoots(RootCase.DISTINCT_REAL, alpha, complex(beta), complex(gamma), dominant)


def vieta_residuals(roots: CubicRoots, coeffs: Coefficients) -> tuple[float, float, float]:
    """Absolute residuals of ``α+β+γ = a``, ``αβ+αγ+βγ = -b``, ``αβγ = c``."""
    a, b, c = coeffs.as_floats()
    al, be, ga = roots.roots
    return (
        abs(al + be + ga - a),
        abs(al * be + al * ga + be * ga + b),
        abs(al * be * ga - c),
    )
