"""The generalized Tribonacci sequence ``J_n`` and third-order recurrences.

``J`` obeys ``J_{n+3} = a J_{n+2} + b J_{n+1} + c J_n`` with seeds
``0, 1, a``. Any solution ``R`` of ``R_{n+1} = a R_n + b R_{n-1} + c R_{n-2}``
and any solution ``S`` of the sign-alternated recurrence
``S_{n+1} = -a S_n + b S_{n-1} - c S_{n-2}`` can be written as a fixed
combination of three consecutive ``J`` terms and the seeds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Sequence

from .characteristic import Coefficients, CubicRoots, RootCase
from .errors import InvalidInputError

__all__ = [
    "LinearInit",
    "SequenceTable",
    "auto_table",
    "iterate_r",
    "iterate_s",
    "j_binet",
    "j_mirror",
    "j_sequence",
    "r_closed_form",
    "ratio_limit",
    "s_closed_form",
]

MODES = ("exact", "float")

# Allowed imaginary residue of a conjugate-pair Binet sum, relative to 1 + |value|.
BINET_IMAG_RTOL = 1e-9


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise InvalidInputError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class SequenceTable:
    """Prefix ``J_0 .. J_{length-1}`` of the generalized Tribonacci sequence.

    ``exact_terms`` is None for tables built in float mode.
    """

    coeffs: Coefficients
    length: int
    exact_terms: tuple[Fraction, ...] | None
    float_terms: tuple[float, ...]

    @property
    def exact(self) -> bool:
        return self.exact_terms is not None

    @property
    def terms(self) -> tuple:
        return self.exact_terms if self.exact_terms is not None else self.float_terms

    def __len__(self):
        return self.length

    def __getitem__(self, n: int):
        if not 0 <= n < self.length:
            raise IndexError(f"J_{n} is outside the table (length {self.length})")
        return self.terms[n]

    def require(self, n: int) -> None:
        if n >= self.length:
            raise InvalidInputError(
                f"table holds J_0..J_{self.length - 1} but J_{n} is needed; rebuild with a larger n_max"
            )


@dataclass(frozen=True)
class LinearInit:
    """Seeds ``(X_{-2}, X_{-1}, X_0)`` of a third-order recurrence."""

    r_m2: Number
    r_m1: Number
    r_0: Number

    def __post_init__(self):
        for v in (self.r_m2, self.r_m1, self.r_0):
            if isinstance(v, float) and not math.isfinite(v):
                raise InvalidInputError("recurrence seeds must be finite")

    def as_tuple(self) -> tuple:
        return self.r_m2, self.r_m1, self.r_0


def j_sequence(coeffs: Coefficients, n_max: int, mode: str = "exact") -> SequenceTable:
    """Tabulate ``J_0 .. J_{n_max}`` by direct recurrence.

    In exact mode the coefficients must be ints or Fractions and the terms
    are Fractions; ``float_terms`` are their correctly rounded values. In
    float mode the recurrence runs in floating point and an OverflowError is
    raised as soon as a term leaves the finite range.
    """
    check_mode(mode)
    if n_max < 3:
        raise InvalidInputError(f"n_max must be at least 3, got {n_max}")
    if mode == "exact":
        a, b, c = coeffs.as_fractions()
        terms = [Fraction(0), Fraction(1), a]
        for n in range(n_max - 2):
            terms.append(a * terms[n + 2] + b * terms[n + 1] + c * terms[n])
        exact = tuple(terms)
        return SequenceTable(coeffs, n_max + 1, exact, tuple(float(t) for t in exact))

    a, b, c = coeffs.as_floats()
    terms = [0.0, 1.0, a]
    for n in range(n_max - 2):
        nxt = a * terms[n + 2] + b * terms[n + 1] + c * terms[n]
        if not math.isfinite(nxt):
            raise OverflowError(f"J_{n + 3} overflows the float range")
        terms.append(nxt)
    return SequenceTable(coeffs, n_max + 1, None, tuple(terms))


def _drop_imag(z: complex) -> float:
    if abs(z.imag) > BINET_IMAG_RTOL * (1.0 + abs(z.real)):
        raise ArithmeticError(f"Binet sum has imaginary residue {z.imag:.3e}")
    return z.real


def j_binet(coeffs: Coefficients, roots: CubicRoots, n: int) -> float:
    """Evaluate ``J_n`` from the characteristic roots.

    The formula depends on ``roots.case``: ``n(n+1)/(2α) α^n`` for a triple
    root, the double-root form with ``β = γ`` and the three-term form for
    distinct roots. Conjugate pairs are summed in complex arithmetic and the
    imaginary residue is checked before it is discarded.
    """
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    al, be, ga = roots.roots
    if roots.case is RootCase.TRIPLE_REAL:
        alpha = roots.alpha
        return (n / (2 * alpha) + n * n / (2 * alpha)) * alpha ** n

    if roots.case is RootCase.DOUBLE_REAL:
        alpha, beta = roots.alpha, be.real
        d = beta - alpha
        if d == 0:
            raise InvalidInputError("double-root Binet form needs the simple root to differ from the double root")
        return alpha / d ** 2 * alpha ** n + (-alpha / d ** 2 + n / d) * beta ** n

    if al == be or al == ga or be == ga:
        raise InvalidInputError("distinct-root Binet form received coinciding roots")
    total = (
        al / ((ga - al) * (be - al)) * al ** n
        - be / ((ga - be) * (be - al)) * be ** n
        + ga / ((ga - al) * (ga - be)) * ga ** n
    )
    if roots.case is RootCase.REAL_PLUS_CONJUGATE_PAIR:
        return _drop_imag(total)
    return total.real


def j_mirror(table: SequenceTable, n: int):
    """``j_n = (-1)^{n+1} J_n``, the solution of the sign-alternated
    recurrence with seeds ``0, 1, -a``."""
    value = table[n]
    return value if n % 2 == 1 else -value


def _linear_combination(table: SequenceTable, n: int, s_m2, s_m1, s_0, sign: int):
    table.require(n + 2)
    J = table.terms
    a = table.coeffs.a if table.exact else float(table.coeffs.a)
    c = table.coeffs.c if table.exact else float(table.coeffs.c)
    return c * J[n] * s_m2 + sign * (J[n + 2] - a * J[n + 1]) * s_m1 + J[n + 1] * s_0


def r_closed_form(table: SequenceTable, seeds: LinearInit, n: int):
    """``R_n = c J_n R_{-2} + (J_{n+2} - a J_{n+1}) R_{-1} + J_{n+1} R_0``."""
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    return _linear_combination(table, n, *seeds.as_tuple(), sign=1)


def s_closed_form(table: SequenceTable, seeds: LinearInit, n: int):
    """``S_n = (-1)^n [c J_n S_{-2} - (J_{n+2} - a J_{n+1}) S_{-1} + J_{n+1} S_0]``."""
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    value = _linear_combination(table, n, *seeds.as_tuple(), sign=-1)
    return value if n % 2 == 0 else -value


def _iterate(a, b, c, seeds: Sequence, n_max: int) -> list:
    out = list(seeds)
    for k in range(n_max):
        out.append(a * out[k + 2] + b * out[k + 1] + c * out[k])
    return out


def iterate_r(coeffs: Coefficients, seeds: LinearInit, n_max: int) -> list:
    """Direct iteration ``[R_{-2}, R_{-1}, R_0, ..., R_{n_max}]``."""
    a, b, c = (coeffs.a, coeffs.b, coeffs.c)
    return _iterate(a, b, c, seeds.as_tuple(), n_max)


def iterate_s(coeffs: Coefficients, seeds: LinearInit, n_max: int) -> list:
    """Direct iteration ``[S_{-2}, S_{-1}, S_0, ..., S_{n_max}]``."""
    return _iterate(-coeffs.a, coeffs.b, -coeffs.c, seeds.as_tuple(), n_max)


def ratio_limit(coeffs: Coefficients, roots: CubicRoots) -> float | None:
    """Limit of ``J_{n+1} / J_n``.

    This is the real root of strictly largest modulus. None is returned when
    a conjugate pair (or a real root of the same modulus) ties with or beats
    every real root, in which case the ratio keeps oscillating.
    """
    return roots.dominant_real_root()


def auto_table(coeffs: Coefficients, n_max: int) -> SequenceTable:
    """Exact table for rational coefficients, float table otherwise."""
    return j_sequence(coeffs, max(n_max, 3), "exact" if coeffs.exact else "float")
