from fractions import Fraction

import pytest

ACCEPTANCE_LINES: list[str] = []


def iterate_third_order(a, b, c, seeds, count):
    """Plain loop for X_{k+1} = a X_k + b X_{k-1} + c X_{k-2}; returns
    [X_{-2}, X_{-1}, X_0, ..., X_count]. Independent of the package."""
    out = list(seeds)
    while len(out) < count + 3:
        out.append(a * out[-1] + b * out[-2] + c * out[-3])
    return out


def j_oracle(a, b, c, n_max):
    out = [Fraction(0), Fraction(1), Fraction(a)]
    while len(out) <= n_max:
        out.append(a * out[-1] + b * out[-2] + c * out[-3])
    return out


def system_oracle(a, b, c, xm, x0, ym, y0, n_max):
    """Hand-rolled iteration of the system; stops before any division by zero."""
    xs, ys = [xm, x0], [ym, y0]
    for _ in range(n_max):
        x_prev, x_cur, y_prev, y_cur = xs[-2], xs[-1], ys[-2], ys[-1]
        if y_cur * x_prev == 0 or x_cur * y_prev == 0:
            break
        xs.append((a * y_cur * x_prev + b * x_prev + c) / (y_cur * x_prev))
        ys.append((a * x_cur * y_prev + b * y_prev + c) / (x_cur * y_prev))
    return xs, ys


@pytest.fixture
def acceptance_log():
    def record(number, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
