"""Closed form versus direct iteration, instance by instance or as a sweep."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .characteristic import Coefficients
from .errors import ForbiddenSetError
from .recurrence import j_sequence
from .system import (
    InitialConditions,
    a_term,
    b_term,
    closed_form_solution,
    forbidden_set_scan,
    iterate_system,
)

__all__ = [
    "Comparison",
    "SweepSummary",
    "compare_instance",
    "hit_matches_halt",
    "random_instance",
    "sweep",
]

FLOAT_RTOL = 1e-9


def _random_rational(rng: random.Random, bound: int, max_den: int, nonzero: bool) -> Fraction:
    while True:
        q = rng.randint(1, max_den)
        value = Fraction(rng.randint(-bound * q, bound * q), q)
        if value or not nonzero:
            return value


def random_instance(seed: int, index: int, bound: int = 3, max_den: int = 4,
                    plant_probability: float = 0.25, plant_horizon: int = 25):
    """Deterministic pseudo-random rational ``(coeffs, init)`` pair.

    Coefficients lie in ``[-bound, bound]`` with ``c != 0`` and the initial
    values are nonzero. With probability ``plant_probability`` one initial
    value is solved for so that some ``A_k`` or ``B_k`` (``1 <= k <=
    plant_horizon``) vanishes, which puts the instance in the forbidden set.
    """
    rng = random.Random(seed * 1_000_003 + index)
    coeffs = Coefficients(
        _random_rational(rng, bound, max_den, False),
        _random_rational(rng, bound, max_den, False),
        _random_rational(rng, bound, max_den, True),
    )
    xm, x0, ym, y0 = (_random_rational(rng, bound, max_den, True) for _ in range(4))
    if rng.random() < plant_probability:
        k = rng.randint(1, plant_horizon)
        table = j_sequence(coeffs, k + 2)
        J, a, c = table.terms, coeffs.a, coeffs.c
        lead = J[k + 1]
        if rng.random() < 0.5:
            # A_k = J_{k+1} x_{-1} y_0 + (J_{k+2} - a J_{k+1}) x_{-1} + c J_k
            if lead != 0:
                cand = -((J[k + 2] - a * lead) * xm + c * J[k]) / (lead * xm)
                y0 = cand or y0
        else:
            if lead != 0:
                cand = -((J[k + 2] - a * lead) * ym + c * J[k]) / (lead * ym)
                x0 = cand or x0
    return coeffs, InitialConditions(xm, x0, ym, y0)


@dataclass
class Comparison:
    """Oracle and closed-form values side by side for ``1 <= n <= last``."""

    coeffs: Coefficients
    init: InitialConditions
    mode: str
    rows: list = field(default_factory=list)
    oracle_halt: int | None = None
    closed_form_halt: int | None = None
    max_deviation: float | Fraction = 0
    mismatches: int = 0

    @property
    def halts_agree(self) -> bool:
        return self.oracle_halt == self.closed_form_halt

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and self.halts_agree


def _deviation(p, q, exact):
    if exact:
        return abs(p - q)
    return abs(p - q) / max(1.0, abs(p))


def compare_instance(coeffs: Coefficients, init: InitialConditions, n_max: int, mode: str = "exact") -> Comparison:
    """Compare :func:`closed_form_solution` with :func:`iterate_system`.

    Exact mode requires rational equality. Float mode allows a relative
    deviation of ``FLOAT_RTOL``. The oracle's halt index is compared with the
    first ``A_k``/``B_k`` zero found by the forbidden-set scan.
    """
    exact = mode == "exact"
    if exact:
        cf_coeffs, cf_init = coeffs, init
    else:
        cf_coeffs = Coefficients(*coeffs.as_floats())
        cf_init = InitialConditions(*(float(v) for v in init.as_tuple()))
    table = j_sequence(cf_coeffs, n_max + 2, mode)
    traj = iterate_system(coeffs, init, n_max, mode)
    scan = forbidden_set_scan(cf_coeffs, cf_init, table, n_max)

    cmp = Comparison(coeffs, init, mode)
    cmp.oracle_halt = traj.halt.n if traj.halt else None
    cmp.closed_form_halt = scan.first_hit
    worst = Fraction(0) if exact else 0.0
    for n, x_o, y_o in traj.points[2:]:
        try:
            x_c, y_c = closed_form_solution(cf_coeffs, cf_init, table, n)
        except ForbiddenSetError:
            cmp.mismatches += 1
            cmp.rows.append((n, x_o, None, y_o, None, None))
            continue
        dev = max(_deviation(x_o, x_c, exact), _deviation(y_o, y_c, exact))
        worst = max(worst, dev)
        if (dev != 0) if exact else (dev > FLOAT_RTOL):
            cmp.mismatches += 1
        cmp.rows.append((n, x_o, x_c, y_o, y_c, dev))
    cmp.max_deviation = worst
    return cmp


@dataclass
class SweepSummary:
    instances: int
    compared_points: int
    mismatches: int
    halt_mismatches: int
    halted_instances: int
    max_deviation: float | Fraction

    @property
    def ok(self) -> bool:
        return self.mismatches == 0 and self.halt_mismatches == 0


def sweep(seed: int, instances: int, n_max: int = 25, mode: str = "exact") -> SweepSummary:
    """Run :func:`compare_instance` over ``instances`` random rational instances."""
    points = mismatches = halt_mismatches = halted = 0
    worst = Fraction(0) if mode == "exact" else 0.0
    for i in range(instances):
        coeffs, init = random_instance(seed, i, plant_horizon=n_max)
        cmp = compare_instance(coeffs, init, n_max, mode)
        points += len(cmp.rows)
        mismatches += cmp.mismatches
        halt_mismatches += not cmp.halts_agree
        halted += cmp.oracle_halt is not None
        worst = max(worst, cmp.max_deviation)
    return SweepSummary(instances, points, mismatches, halt_mismatches, halted, worst)


def hit_matches_halt(coeffs, init, table, halt) -> bool:
    """True when the value that vanished at ``halt.n`` is the numerator of a
    vanishing ``A``/``B`` term at the same index."""
    n = halt.n
    a_zero = a_term(coeffs, init, table, n) == 0
    b_zero = b_term(coeffs, init, table, n) == 0
    expected = set()
    if a_zero:
        expected.add("x" if n % 2 else "y")
    if b_zero:
        expected.add("y" if n % 2 else "x")
    return expected == set(halt.variables)
