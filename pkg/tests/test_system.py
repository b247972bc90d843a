import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import system_oracle
from recur_forge import (
    Coefficients,
    ForbiddenSetError,
    InitialConditions,
    InvalidInputError,
    closed_form_scalar,
    closed_form_solution,
    convergence_check,
    forbidden_set_scan,
    iterate_system,
    j_sequence,
    solve_characteristic,
    specialize,
    uv_lift,
)
from recur_forge.system import a_term, b_term, iterate_scalar, step
from recur_forge.verify import compare_instance, hit_matches_halt, random_instance

TRIB = Coefficients(1, 1, 1)
ONES = InitialConditions(1, 1, 1, 1)

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)
nonzero = rationals.filter(lambda v: v != 0)


def test_iterate_examples():
    t = iterate_system(TRIB, ONES, 2)
    assert (t.x(1), t.y(1), t.x(2), t.y(2)) == (3, 3, Fraction(5, 3), Fraction(5, 3))
    assert t.complete and t.status == "complete"

    halted = iterate_system(TRIB, InitialConditions(1, 1, 1, -2), 10)
    assert halted.halt.n == 1
    assert halted.halt.reason == "zero_value"
    assert halted.halt.variables == ("x",)
    assert halted.halt.values[0] == 0
    assert halted.last_index == 0

    pad = iterate_system(Coefficients(0, 1, 1), ONES, 1)
    assert pad.x(1) == 2


def test_iterate_matches_hand_loop():
    a, b, c = Fraction(1, 2), Fraction(-2), Fraction(3, 4)
    init = (Fraction(1, 3), Fraction(2), Fraction(-1), Fraction(5, 2))
    xs, ys = system_oracle(a, b, c, *init, 20)
    t = iterate_system(Coefficients(a, b, c), InitialConditions(*init), 20)
    n_ok = t.last_index
    assert [t.x(n) for n in range(-1, n_ok + 1)] == xs[: n_ok + 2]
    assert [t.y(n) for n in range(-1, n_ok + 1)] == ys[: n_ok + 2]


def test_invalid_init():
    with pytest.raises(InvalidInputError):
        InitialConditions(1, 0, 1, 1)
    with pytest.raises(InvalidInputError):
        InitialConditions(1, float("nan"), 1, 1)
    with pytest.raises(InvalidInputError):
        iterate_system(TRIB, InitialConditions(0.5, 1, 1, 1), 5, "exact")


def test_float_mode_points_satisfy_recurrence():
    t = iterate_system(Coefficients(0.7, -1.3, 2.1), InitialConditions(0.4, 1.9, -0.8, 2.2), 60, "float")
    for n in range(1, t.last_index):
        x_next, y_next = step(t.coeffs, t.x(n - 1), t.x(n), t.y(n - 1), t.y(n))
        assert math.isclose(x_next, t.x(n + 1), rel_tol=1e-12)
        assert math.isclose(y_next, t.y(n + 1), rel_tol=1e-12)


def test_float_zero_denominator_threshold():
    # y_0 tiny relative to the numerator: the float guard treats it as zero
    t = iterate_system(TRIB, InitialConditions(1.0, 1.0, 1.0, 1e-300), 5, "float")
    assert t.halt is not None
    assert t.halt.n == 1


# closed forms ---------------------------------------------------------------

def test_closed_form_examples():
    table = j_sequence(TRIB, 30)
    assert closed_form_solution(TRIB, ONES, table, 1) == (3, 3)
    assert closed_form_solution(TRIB, ONES, table, 2) == (Fraction(5, 3), Fraction(5, 3))
    with pytest.raises(InvalidInputError):
        closed_form_solution(TRIB, ONES, table, 0)
    with pytest.raises(InvalidInputError):
        closed_form_solution(TRIB, ONES, j_sequence(Coefficients(1, 1, 2), 30), 3)
    with pytest.raises(InvalidInputError):
        closed_form_solution(TRIB, ONES, table, 29)


def test_symmetric_init_gives_equal_coordinates():
    coeffs = Coefficients(Fraction(-3, 2), 2, Fraction(1, 3))
    init = InitialConditions(Fraction(2, 5), -3, Fraction(2, 5), -3)
    table = j_sequence(coeffs, 30)
    for n in range(1, 25):
        try:
            x, y = closed_form_solution(coeffs, init, table, n)
        except ForbiddenSetError:
            break
        assert x == y


def test_zero_denominator_reports_forbidden_member():
    table = j_sequence(TRIB, 10)
    with pytest.raises(ForbiddenSetError) as info:
        closed_form_solution(TRIB, InitialConditions(1, 1, 1, -2), table, 2)
    # x_2 has denominator B_1 (nonzero); y_2 has denominator A_1 = 0
    assert (info.value.kind, info.value.index) == ("A", 1)


@given(rationals, rationals, nonzero, nonzero, nonzero, nonzero, nonzero)
@settings(max_examples=150, deadline=None)
def test_closed_form_equals_hand_oracle(a, b, c, xm, x0, ym, y0):
    xs, ys = system_oracle(a, b, c, xm, x0, ym, y0, 20)
    coeffs, init = Coefficients(a, b, c), InitialConditions(xm, x0, ym, y0)
    table = j_sequence(coeffs, 22)
    for n in range(1, len(xs) - 1):
        assert closed_form_solution(coeffs, init, table, n) == (xs[n + 1], ys[n + 1])


@given(rationals, rationals, nonzero, nonzero, nonzero, nonzero, nonzero)
@settings(max_examples=100, deadline=None)
def test_swap_symmetry(a, b, c, xm, x0, ym, y0):
    coeffs = Coefficients(a, b, c)
    init = InitialConditions(xm, x0, ym, y0)
    table = j_sequence(coeffs, 22)
    for n in range(1, 20):
        try:
            x, y = closed_form_solution(coeffs, init, table, n)
            xs, ys = closed_form_solution(coeffs, init.swapped(), table, n)
        except ForbiddenSetError:
            break
        assert (x, y) == (ys, xs)


def test_parity_consistency_float():
    coeffs = Coefficients(1.0, 1.0, 1.0)
    init = InitialConditions(2.0, 0.5, 3.0, 0.25)
    table = j_sequence(coeffs, 60, "float")
    vals = {0: (0.5, 0.25)}
    for n in range(1, 55):
        vals[n] = closed_form_solution(coeffs, init, table, n)
    vals[-1] = (2.0, 3.0)
    for n in range(0, 54):
        x_next, y_next = step(coeffs, vals[n - 1][0], vals[n][0], vals[n - 1][1], vals[n][1])
        assert math.isclose(x_next, vals[n + 1][0], rel_tol=1e-9)
        assert math.isclose(y_next, vals[n + 1][1], rel_tol=1e-9)


def test_float_closed_form_agrees_for_tribonacci():
    cmp = compare_instance(TRIB, ONES, 40, "float")
    assert cmp.ok
    assert cmp.max_deviation <= 1e-9


# forbidden set ----------------------------------------------------------------

def test_forbidden_scan_examples():
    table = j_sequence(TRIB, 60)
    assert forbidden_set_scan(TRIB, ONES, table, 50).hits == ()
    rep = forbidden_set_scan(TRIB, InitialConditions(1, 1, 1, -2), table, 50)
    assert rep.hits[0].n == 1 and rep.hits[0].which == "A" and rep.hits[0].value == 0
    assert rep.first_hit == 1
    assert rep.partial_certificate


@given(rationals, rationals, nonzero, nonzero, nonzero, nonzero, nonzero)
@settings(max_examples=100, deadline=None)
def test_no_hit_at_zero(a, b, c, xm, x0, ym, y0):
    coeffs, init = Coefficients(a, b, c), InitialConditions(xm, x0, ym, y0)
    table = j_sequence(coeffs, 5)
    assert a_term(coeffs, init, table, 0) == xm * y0
    assert b_term(coeffs, init, table, 0) == ym * x0
    assert all(h.n != 0 for h in forbidden_set_scan(coeffs, init, table, 3).hits)


def test_halt_and_hits_coincide_on_planted_instances():
    planted = 0
    for i in range(300):
        coeffs, init = random_instance(11, i, plant_probability=0.6)
        traj = iterate_system(coeffs, init, 25)
        table = j_sequence(coeffs, 27)
        rep = forbidden_set_scan(coeffs, init, table, 25)
        if traj.halt is None:
            assert rep.first_hit is None
            continue
        planted += 1
        assert rep.first_hit == traj.halt.n
        assert hit_matches_halt(coeffs, init, table, traj.halt)
        first = [h for h in rep.hits if h.n == traj.halt.n]
        assert {h.variable for h in first} == set(traj.halt.variables)
    assert planted > 50


# uv lift --------------------------------------------------------------------

def test_uv_lift_examples():
    uv = uv_lift(TRIB, ONES, 10)
    assert uv.u[:3] == uv.v[:3] == (1, 1, 1)
    assert uv.u_at(1) == uv.v_at(1) == 3
    assert uv.x(1) == 3
    assert uv.certified
    for n in range(-2, 11):
        assert uv.r(n) == 2 * uv.u_at(n)
        assert uv.s(n) == 0


@given(rationals, rationals, nonzero, nonzero, nonzero, nonzero, nonzero)
@settings(max_examples=100, deadline=None)
def test_uv_lift_certifies_and_splits(a, b, c, xm, x0, ym, y0):
    coeffs, init = Coefficients(a, b, c), InitialConditions(xm, x0, ym, y0)
    uv = uv_lift(coeffs, init, 25)
    assert uv.certified
    traj = iterate_system(coeffs, init, 25)
    for n, x, y in traj.points:
        assert x * uv.v_at(n - 1) == uv.u_at(n)
        assert y * uv.u_at(n - 1) == uv.v_at(n)
    for n in range(1, 25):
        assert uv.r(n + 1) == a * uv.r(n) + b * uv.r(n - 1) + c * uv.r(n - 2)
        assert uv.s(n + 1) == -a * uv.s(n) + b * uv.s(n - 1) - c * uv.s(n - 2)
    if traj.halt is not None:
        assert uv.first_zero == traj.halt.n


def test_uv_lift_float_mode():
    uv = uv_lift(Coefficients(1.0, 1.0, 1.0), InitialConditions(2.0, 0.5, 3.0, 0.25), 30)
    assert uv.certified


# scalar equation and specializations ----------------------------------------

def test_closed_form_scalar_examples():
    table = j_sequence(TRIB, 10)
    assert closed_form_scalar(TRIB, 1, 1, table, 1) == 3
    assert closed_form_scalar(TRIB, 1, 1, table, 2) == Fraction(5, 3)
    with pytest.raises(InvalidInputError):
        closed_form_scalar(TRIB, 0, 1, table, 2)


@given(rationals, rationals, nonzero, nonzero, nonzero)
@settings(max_examples=100, deadline=None)
def test_scalar_matches_system_and_iteration(a, b, c, xm, x0):
    coeffs = Coefficients(a, b, c)
    table = j_sequence(coeffs, 22)
    scalar = iterate_scalar(coeffs, xm, x0, 20)
    for n in range(1, scalar.last_index + 1):
        value = closed_form_scalar(coeffs, xm, x0, table, n)
        assert value == scalar.x(n)
        assert (value, value) == closed_form_solution(coeffs, InitialConditions.scalar(xm, x0), table, n)


def test_specialize():
    assert specialize("tribonacci", 5, 7) == Coefficients(1, 1, 1)
    assert list(j_sequence(specialize("tribonacci"), 6).exact_terms) == [0, 1, 1, 2, 4, 7, 13]
    assert list(j_sequence(specialize("padovan", 1, 1), 8).exact_terms) == [0, 1, 0, 1, 1, 1, 2, 2, 3]
    assert list(j_sequence(specialize("padovan", 1, -1), 6).exact_terms) == [0, 1, 0, 1, -1, 1, -2]
    with pytest.raises(InvalidInputError):
        specialize("padovan", 1, 0)
    with pytest.raises(InvalidInputError):
        specialize("fibonacci")


# convergence ------------------------------------------------------------------

def test_convergence_examples():
    roots = solve_characteristic(TRIB)
    rep = convergence_check(TRIB, ONES, roots, 80, 1e-6)
    assert rep.applicable and rep.passed
    assert rep.limit == pytest.approx(1.839286755, abs=1e-8)
    rep = convergence_check(TRIB, InitialConditions(2, 0.5, 3, 0.25), roots, 120, 1e-6)
    assert rep.passed

    pair = Coefficients(2.5, -3, 1)
    rep = convergence_check(pair, ONES, solve_characteristic(pair), 120, 1e-6)
    assert not rep.applicable and not rep.passed


def test_convergence_reports_halt():
    rep = convergence_check(TRIB, InitialConditions(1, 1, 1, -2), solve_characteristic(TRIB), 50)
    assert rep.applicable and not rep.passed
    assert rep.halt.n == 1


def test_random_positive_inits_converge():
    rng = random.Random(3)
    roots = solve_characteristic(TRIB)
    for _ in range(20):
        init = InitialConditions(*(rng.uniform(0.1, 5) for _ in range(4)))
        assert convergence_check(TRIB, init, roots, 120, 1e-6).passed
