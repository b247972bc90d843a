"""The rational system and its closed-form solution.

The system is::

    x_{n+1} = (a y_n x_{n-1} + b x_{n-1} + c) / (y_n x_{n-1})
    y_{n+1} = (a x_n y_{n-1} + b y_{n-1} + c) / (x_n y_{n-1})

Direct iteration (:func:`iterate_system`) is the reference. Substituting
``x_n = u_n / v_{n-1}``, ``y_n = v_n / u_{n-1}`` turns it into a linear
system whose solution is expressed through the ``J`` table, which gives
:func:`closed_form_solution`. The quantities ``A_n`` and ``B_n`` that appear
as numerators and denominators vanish exactly on the forbidden set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number

from .characteristic import Coefficients, CubicRoots, is_exact
from .errors import ForbiddenSetError, InvalidInputError
from .recurrence import SequenceTable, check_mode, ratio_limit

__all__ = [
    "ConvergenceReport",
    "ForbiddenHit",
    "ForbiddenSetReport",
    "Halt",
    "InitialConditions",
    "ScalarTrajectory",
    "Trajectory",
    "UVState",
    "a_term",
    "b_term",
    "closed_form_scalar",
    "closed_form_solution",
    "convergence_check",
    "forbidden_set_scan",
    "iterate_scalar",
    "iterate_system",
    "specialize",
    "step",
    "uv_lift",
]

# Float-mode zero threshold, relative to the magnitude of the summed terms.
ZERO_RTOL = 1e-12

DEFAULT_HORIZON = 200


@dataclass(frozen=True)
class InitialConditions:
    """``(x_{-1}, x_0, y_{-1}, y_0)``; all four must be nonzero and finite."""

    x_m1: Number
    x_0: Number
    y_m1: Number
    y_0: Number

    def __post_init__(self):
        for name in ("x_m1", "x_0", "y_m1", "y_0"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float, Fraction)):
                raise InvalidInputError(f"initial value {name} must be a real number, got {v!r}")
            if isinstance(v, float) and not math.isfinite(v):
                raise InvalidInputError(f"initial value {name} must be finite")
            if v == 0:
                raise InvalidInputError(f"initial value {name} must be nonzero")

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.as_tuple())

    def as_tuple(self) -> tuple:
        return self.x_m1, self.x_0, self.y_m1, self.y_0

    def swapped(self) -> "InitialConditions":
        return InitialConditions(self.y_m1, self.y_0, self.x_m1, self.x_0)

    @classmethod
    def scalar(cls, x_m1, x_0) -> "InitialConditions":
        return cls(x_m1, x_0, x_m1, x_0)


@dataclass(frozen=True)
class Halt:
    """Why and where an iteration stopped.

    ``n`` is the index of the first value that could not be used: either
    its denominator vanished (``"zero_denominator"``) or the value itself
    came out zero (``"zero_value"``) and would vanish a later denominator.
    ``variables`` names the offending coordinates.
    """

    n: int
    reason: str
    variables: tuple[str, ...]
    values: tuple = ()

    def __str__(self):
        return f"halted_at({self.n}, {self.reason}:{','.join(self.variables)})"


@dataclass(frozen=True)
class Trajectory:
    """Points ``(n, x_n, y_n)`` from ``n = -1`` up to the last usable step."""

    coeffs: Coefficients
    init: InitialConditions
    mode: str
    points: tuple[tuple[int, Number, Number], ...]
    halt: Halt | None = None

    @property
    def complete(self) -> bool:
        return self.halt is None

    @property
    def status(self) -> str:
        return "complete" if self.halt is None else str(self.halt)

    @property
    def last_index(self) -> int:
        return self.points[-1][0]

    def x(self, n: int):
        return self.points[n + 1][1]

    def y(self, n: int):
        return self.points[n + 1][2]


@dataclass(frozen=True)
class ScalarTrajectory:
    """Values ``x_{-1}, x_0, ...`` of the one-dimensional equation."""

    values: tuple
    halt: Halt | None = None

    def x(self, n: int):
        return self.values[n + 1]

    @property
    def last_index(self) -> int:
        return len(self.values) - 2


def _convert(values, mode):
    if mode == "exact":
        if not all(is_exact(v) for v in values):
            raise InvalidInputError("exact mode requires rational inputs (int or Fraction)")
        return [Fraction(v) for v in values]
    return [float(v) for v in values]


def _is_zero(value, scale, mode) -> bool:
    if mode == "exact":
        return value == 0
    return abs(value) <= ZERO_RTOL * scale


def step(coeffs: Coefficients, x_prev, x_cur, y_prev, y_cur):
    """One application of the system map: ``(x_{n+1}, y_{n+1})``."""
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    return (
        (a * y_cur * x_prev + b * x_prev + c) / (y_cur * x_prev),
        (a * x_cur * y_prev + b * y_prev + c) / (x_cur * y_prev),
    )


def iterate_system(coeffs: Coefficients, init: InitialConditions, n_max: int, mode: str = "exact") -> Trajectory:
    """Iterate the system directly up to ``n_max``.

    Iteration stops at the first step whose denominator vanishes or whose
    value is zero (a zero ``x_n`` or ``y_n`` would divide by zero one step
    later). In float mode "zero" means below ``ZERO_RTOL`` relative to the
    size of the terms that cancelled.

    Examples
    --------
    >>> t = iterate_system(Coefficients(1, 1, 1), InitialConditions(1, 1, 1, 1), 2)
    >>> t.x(1), t.x(2)
    (Fraction(3, 1), Fraction(5, 3))
    """
    check_mode(mode)
    if n_max < 0:
        raise InvalidInputError("n_max must be non-negative")
    a, b, c = _convert((coeffs.a, coeffs.b, coeffs.c), mode)
    xm, x, ym, y = _convert(init.as_tuple(), mode)
    points = [(-1, xm, ym), (0, x, y)]
    halt = None
    for n in range(n_max):
        terms_x = (a * y * xm, b * xm, c)
        terms_y = (a * x * ym, b * ym, c)
        num_x, num_y = sum(terms_x), sum(terms_y)
        den_x, den_y = y * xm, x * ym

        bad = [v for v, num, den in (("x", num_x, den_x), ("y", num_y, den_y))
               if _is_zero(den, 1.0 + abs(num), mode)]
        if bad:
            halt = Halt(n + 1, "zero_denominator", tuple(bad))
            break
        x_new, y_new = num_x / den_x, num_y / den_y

        zero = [v for v, terms in (("x", terms_x), ("y", terms_y))
                if _is_zero(sum(terms), sum(abs(t) for t in terms), mode)]
        if zero:
            halt = Halt(n + 1, "zero_value", tuple(zero), (x_new, y_new))
            break
        xm, x, ym, y = x, x_new, y, y_new
        points.append((n + 1, x, y))
    return Trajectory(coeffs, init, mode, tuple(points), halt)


def iterate_scalar(coeffs: Coefficients, x_m1, x_0, n_max: int, mode: str = "exact") -> ScalarTrajectory:
    """Iterate ``x_{n+1} = (a x_n x_{n-1} + b x_{n-1} + c) / (x_n x_{n-1})``."""
    check_mode(mode)
    if x_m1 == 0 or x_0 == 0:
        raise InvalidInputError("initial values must be nonzero")
    a, b, c = _convert((coeffs.a, coeffs.b, coeffs.c), mode)
    xm, x = _convert((x_m1, x_0), mode)
    values = [xm, x]
    for n in range(n_max):
        terms = (a * x * xm, b * xm, c)
        num = sum(terms)
        if _is_zero(num, sum(abs(t) for t in terms), mode):
            return ScalarTrajectory(tuple(values), Halt(n + 1, "zero_value", ("x",), (num / (x * xm),)))
        xm, x = x, num / (x * xm)
        values.append(x)
    return ScalarTrajectory(tuple(values))


def _check_table(coeffs: Coefficients, table: SequenceTable, top: int) -> tuple:
    if table.coeffs != coeffs:
        raise InvalidInputError("the J table was built for different coefficients")
    table.require(top)
    if table.exact:
        return coeffs.a, coeffs.c, table.terms
    return float(coeffs.a), float(coeffs.c), table.terms


def _form_terms(coeffs, table, k, s1, s2):
    """Summands of ``c J_k + (J_{k+2} - a J_{k+1}) s1 + J_{k+1} s2``."""
    a, c, J = _check_table(coeffs, table, k + 2)
    return c * J[k], (J[k + 2] - a * J[k + 1]) * s1, J[k + 1] * s2


def a_term(coeffs: Coefficients, init: InitialConditions, table: SequenceTable, n: int):
    """``A_n = J_{n+1} y_0 x_{-1} + (J_{n+2} - a J_{n+1}) x_{-1} + c J_n``."""
    return sum(_form_terms(coeffs, table, n, init.x_m1, init.x_m1 * init.y_0))


def b_term(coeffs: Coefficients, init: InitialConditions, table: SequenceTable, n: int):
    """``B_n = J_{n+1} x_0 y_{-1} + (J_{n+2} - a J_{n+1}) y_{-1} + c J_n``."""
    return sum(_form_terms(coeffs, table, n, init.y_m1, init.x_0 * init.y_m1))


def _ratio(num, den_terms, kind, index, exact):
    den = sum(den_terms)
    zero = den == 0 if exact else abs(den) <= ZERO_RTOL * (1.0 + abs(num))
    if zero:
        raise ForbiddenSetError(kind, index)
    return num / den


def closed_form_solution(coeffs: Coefficients, init: InitialConditions, table: SequenceTable, n: int):
    """``(x_n, y_n)`` from the closed form, for ``n >= 1``.

    With ``n = 2m + 1``::

        x_n = (c J_n + (J_{n+2} - a J_{n+1}) x_{-1} + J_{n+1} x_{-1} y_0)
              / (c J_{n-1} + (J_{n+1} - a J_n) x_{-1} + J_n x_{-1} y_0)

    and ``y_n`` is the same expression in ``y_{-1}`` and ``x_0 y_{-1}``. For
    ``n = 2m + 2`` the roles of the two seed pairs swap. A vanishing
    denominator raises :class:`ForbiddenSetError` naming the ``A_k``/``B_k``
    that is zero.
    """
    if n < 1:
        raise InvalidInputError("closed forms start at n = 1")
    exact = table.exact and init.exact
    xm, x0, ym, y0 = init.as_tuple()
    p_x, q_x = xm, xm * y0  # seed pair of A
    p_y, q_y = ym, x0 * ym  # seed pair of B
    if n % 2 == 1:
        x_pair, x_kind, y_pair, y_kind = (p_x, q_x), "A", (p_y, q_y), "B"
    else:
        x_pair, x_kind, y_pair, y_kind = (p_y, q_y), "B", (p_x, q_x), "A"

    x_num = sum(_form_terms(coeffs, table, n, *x_pair))
    x_val = _ratio(x_num, _form_terms(coeffs, table, n - 1, *x_pair), x_kind, n - 1, exact)
    y_num = sum(_form_terms(coeffs, table, n, *y_pair))
    y_val = _ratio(y_num, _form_terms(coeffs, table, n - 1, *y_pair), y_kind, n - 1, exact)
    return x_val, y_val


def closed_form_scalar(coeffs: Coefficients, x_m1, x_0, table: SequenceTable, n: int):
    """``x_n`` of the one-dimensional equation (``y_{-1} = x_{-1}``, ``y_0 = x_0``)."""
    if n < 1:
        raise InvalidInputError("closed forms start at n = 1")
    if x_m1 == 0 or x_0 == 0:
        raise InvalidInputError("initial values must be nonzero")
    exact = table.exact and is_exact(x_m1) and is_exact(x_0)
    seeds = (x_m1, x_m1 * x_0)
    num = sum(_form_terms(coeffs, table, n, *seeds))
    return _ratio(num, _form_terms(coeffs, table, n - 1, *seeds), "A", n - 1, exact)


@dataclass(frozen=True)
class ForbiddenHit:
    n: int
    which: str
    value: Number

    @property
    def variable(self) -> str:
        """Coordinate that becomes zero at index ``n`` because of this hit."""
        if self.which == "A":
            return "x" if self.n % 2 == 1 else "y"
        return "y" if self.n % 2 == 1 else "x"


@dataclass(frozen=True)
class ForbiddenSetReport:
    """``A_n``/``B_n`` zeros for ``0 <= n <= horizon``.

    The forbidden set is an infinite union, so an empty report only certifies
    the scanned horizon.
    """

    horizon: int
    hits: tuple[ForbiddenHit, ...]
    partial_certificate: bool = field(default=True)

    @property
    def first_hit(self) -> int | None:
        return min((h.n for h in self.hits), default=None)


def forbidden_set_scan(coeffs: Coefficients, init: InitialConditions, table: SequenceTable,
                       horizon: int = DEFAULT_HORIZON) -> ForbiddenSetReport:
    """Evaluate ``A_n`` and ``B_n`` for ``0 <= n <= horizon`` and record zeros."""
    exact = table.exact and init.exact
    xm, x0, ym, y0 = init.as_tuple()
    hits = []
    for n in range(horizon + 1):
        for which, seeds in (("A", (xm, xm * y0)), ("B", (ym, x0 * ym))):
            terms = _form_terms(coeffs, table, n, *seeds)
            value = sum(terms)
            zero = value == 0 if exact else abs(value) <= ZERO_RTOL * sum(abs(t) for t in terms)
            if zero:
                hits.append(ForbiddenHit(n, which, value))
    return ForbiddenSetReport(horizon, tuple(hits))


@dataclass(frozen=True)
class UVState:
    """Solution of the linear lift, indexed from ``-2``.

    ``x_n = u_n / v_{n-1}`` and ``y_n = v_n / u_{n-1}``; ``R_n = u_n + v_n``
    and ``S_n = u_n - v_n`` solve the two third-order recurrences.
    """

    u: tuple
    v: tuple
    certified: bool
    first_zero: int | None = None

    def u_at(self, n: int):
        return self.u[n + 2]

    def v_at(self, n: int):
        return self.v[n + 2]

    def r(self, n: int):
        return self.u_at(n) + self.v_at(n)

    def s(self, n: int):
        return self.u_at(n) - self.v_at(n)

    def x(self, n: int):
        return self.u_at(n) / self.v_at(n - 1)

    def y(self, n: int):
        return self.v_at(n) / self.u_at(n - 1)


def uv_lift(coeffs: Coefficients, init: InitialConditions, n_max: int, mode: str | None = None) -> UVState:
    """Build the linear lift and certify it against :func:`iterate_system`.

    Seeds are ``u_{-2} = v_{-2} = 1``, ``u_{-1} = x_{-1}``, ``v_{-1} = y_{-1}``,
    ``u_0 = x_0 y_{-1}``, ``v_0 = y_0 x_{-1}``; then
    ``u_{n+1} = a v_n + b u_{n-1} + c v_{n-2}`` and symmetrically for ``v``.
    ``first_zero`` is the first index with ``u_n = 0`` or ``v_n = 0``.
    """
    if mode is None:
        mode = "exact" if coeffs.exact and init.exact else "float"
    check_mode(mode)
    a, b, c = _convert((coeffs.a, coeffs.b, coeffs.c), mode)
    xm, x0, ym, y0 = _convert(init.as_tuple(), mode)
    one = Fraction(1) if mode == "exact" else 1.0
    u = [one, xm, x0 * ym]
    v = [one, ym, y0 * xm]
    for k in range(n_max):
        u.append(a * v[k + 2] + b * u[k + 1] + c * v[k])
        v.append(a * u[k + 2] + b * v[k + 1] + c * u[k])

    first_zero = next((k - 2 for k in range(len(u)) if u[k] == 0 or v[k] == 0), None)
    traj = iterate_system(coeffs, init, n_max, mode)
    certified = True
    for n, x, y in traj.points:
        if mode == "exact":
            ok = x * v[n + 1] == u[n + 2] and y * u[n + 1] == v[n + 2]
        else:
            ok = (math.isclose(x * v[n + 1], u[n + 2], rel_tol=1e-9, abs_tol=1e-300)
                  and math.isclose(y * u[n + 1], v[n + 2], rel_tol=1e-9, abs_tol=1e-300))
        if not ok:
            certified = False
            break
    return UVState(tuple(u), tuple(v), certified, first_zero)


def specialize(kind: str, b: Number = 1, c: Number = 1) -> Coefficients:
    """Coefficients of the named special case.

    ``"tribonacci"`` is ``a = b = c = 1`` (``b`` and ``c`` are ignored);
    ``"padovan"`` is ``a = 0`` with the given ``b`` and ``c != 0``.
    """
    if kind == "tribonacci":
        return Coefficients(1, 1, 1)
    if kind == "padovan":
        if c == 0:
            raise InvalidInputError("the padovan case needs c != 0")
        return Coefficients(0, b, c)
    raise InvalidInputError(f"unknown specialization {kind!r}; expected 'tribonacci' or 'padovan'")


@dataclass(frozen=True)
class ConvergenceReport:
    applicable: bool
    limit: float | None
    n_max: int
    tol: float
    max_deviation: float | None = None
    passed: bool = False
    halt: Halt | None = None
    reason: str = ""


def convergence_check(coeffs: Coefficients, init: InitialConditions, roots: CubicRoots,
                      n_max: int = 120, tol: float = 1e-6) -> ConvergenceReport:
    """Check that ``x_n`` and ``y_n`` approach the dominant real root.

    The deviation is the largest ``|x_n - r|`` or ``|y_n - r|`` over
    ``n_max - 10 <= n <= n_max``. Not applicable when no real root strictly
    dominates in modulus.
    """
    limit = ratio_limit(coeffs, roots)
    if limit is None:
        return ConvergenceReport(False, None, n_max, tol,
                                 reason="no real characteristic root strictly dominates in modulus")
    traj = iterate_system(coeffs, init, n_max, "float")
    if not traj.complete:
        return ConvergenceReport(True, limit, n_max, tol, halt=traj.halt,
                                 reason="trajectory reached the forbidden set before n_max")
    lo = max(-1, n_max - 10)
    dev = max(max(abs(traj.x(n) - limit), abs(traj.y(n) - limit)) for n in range(lo, n_max + 1))
    return ConvergenceReport(True, limit, n_max, tol, dev, dev <= tol)
