"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input, 3 trajectory
halted before the requested horizon (for commands that need a complete run).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .characteristic import Coefficients, solve_characteristic, vieta_residuals
from .errors import InvalidInputError
from .recurrence import j_mirror, j_sequence, ratio_limit
from .stability import (
    equilibria,
    linearization_spectrum,
    scalar_stability_test,
    tribonacci_system_spectrum,
)
from .system import (
    DEFAULT_HORIZON,
    InitialConditions,
    convergence_check,
    forbidden_set_scan,
    iterate_system,
    specialize,
)
from .verify import compare_instance, sweep

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_HALTED = 0, 1, 2, 3
SEED_ENV = "RECUR_FORGE_SEED"
MAX_N = 10 ** 6

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_number(text: str, mode: str):
    """Parse an integer or ``p/q`` literal (exact) or any real literal (float)."""
    text = text.strip()
    if mode == "exact":
        if not _RATIONAL.match(text):
            raise InvalidInputError(f"{text!r} is not a rational literal; exact mode takes integers or p/q")
        value = Fraction(text)
        return value.numerator if value.denominator == 1 else value
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"{text!r} is not a real number") from None


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, complex):
        return f"{value.real:.17g}{value.imag:+.17g}j"
    return str(value)


def jsonable(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, dict):
        return {k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


@dataclass
class Output:
    payload: dict
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    text: str = ""
    code: int = EXIT_OK

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json":
            return json.dumps(jsonable(self.payload), indent=2) + "\n"
        if fmt_name == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(self.header)
            for row in self.rows:
                writer.writerow([fmt(v) for v in row])
            return buf.getvalue()
        return self.text if self.text.endswith("\n") else self.text + "\n"


def _coefficients(args, mode: str) -> Coefficients:
    if args.preset == "tribonacci":
        return specialize("tribonacci")
    if args.preset == "padovan":
        b = parse_number(args.b, mode) if args.b is not None else 1
        c = parse_number(args.c, mode) if args.c is not None else 1
        return specialize("padovan", b, c)
    missing = [k for k in ("a", "b", "c") if getattr(args, k) is None]
    if missing:
        raise InvalidInputError(f"missing --{', --'.join(missing)} (or use --preset)")
    return Coefficients(*(parse_number(getattr(args, k), mode) for k in ("a", "b", "c")))


def _init(args, mode: str, required: bool = True) -> InitialConditions | None:
    if args.init is None:
        if required:
            raise InvalidInputError("--init x_-1,x_0,y_-1,y_0 is required")
        return None
    parts = args.init.split(",")
    if len(parts) != 4:
        raise InvalidInputError("--init takes four comma-separated values x_-1,x_0,y_-1,y_0")
    return InitialConditions(*(parse_number(p, mode) for p in parts))


def _check_n(n: int) -> int:
    if not 0 <= n <= MAX_N:
        raise InvalidInputError(f"n must lie in [0, {MAX_N}]")
    return n


def cmd_roots(args) -> Output:
    coeffs = _coefficients(args, "float")
    roots = solve_characteristic(coeffs)
    residuals = vieta_residuals(roots, coeffs)
    payload = {
        "a": float(coeffs.a), "b": float(coeffs.b), "c": float(coeffs.c),
        "case": roots.case.value,
        "alpha": roots.alpha,
        "beta": roots.beta,
        "gamma": roots.gamma,
        "dominant_is_unique_real": roots.dominant_is_unique_real,
        "vieta_residuals": list(residuals),
    }
    rows = [(name, complex(z).real, complex(z).imag) for name, z in zip(("alpha", "beta", "gamma"), roots.roots)]
    lines = [f"case: {roots.case.value}"]
    for name, z in zip(("alpha", "beta", "gamma"), roots.roots):
        lines.append(f"{name}: {fmt(z.real) if z.imag == 0 else fmt(z)}")
    lines.append(f"vieta residuals: {', '.join(fmt(r) for r in residuals)}")
    text = "\n".join(lines)
    return Output(payload, ["root", "re", "im"], rows, text)


def cmd_sequence(args) -> Output:
    coeffs = _coefficients(args, args.mode)
    n = _check_n(args.n)
    table = j_sequence(coeffs, max(n, 3), args.mode)
    if args.mirror:
        values = [j_mirror(table, k) for k in range(n + 1)]
        name = "j"
    else:
        values = list(table.terms[: n + 1])
        name = "J"
    payload = {"name": name, "mode": args.mode, "terms": values}
    return Output(payload, ["n", name], list(enumerate(values)), ",".join(fmt(v) for v in values))


def cmd_simulate(args) -> Output:
    coeffs = _coefficients(args, args.mode)
    init = _init(args, args.mode)
    traj = iterate_system(coeffs, init, _check_n(args.n), args.mode)
    rows = [(n, x, y, "ok") for n, x, y in traj.points]
    if traj.halt:
        rows.append((traj.halt.n, None, None, f"halted_{traj.halt.reason}:{'+'.join(traj.halt.variables)}"))
    payload = {
        "mode": args.mode,
        "status": traj.status,
        "points": [{"n": n, "x": x, "y": y} for n, x, y in traj.points],
    }
    text = "\n".join(f"{n}: x={fmt(x)} y={fmt(y)}" for n, x, y in traj.points) + f"\nstatus: {traj.status}"
    return Output(payload, ["n", "x", "y", "status"], rows, text)


def cmd_compare(args) -> Output:
    n = _check_n(args.n)
    init = _init(args, args.mode, required=False)
    if init is None:
        summary = sweep(args.seed, args.instances, n, args.mode)
        payload = {
            "mode": args.mode,
            "seed": args.seed,
            "instances": summary.instances,
            "compared_points": summary.compared_points,
            "halted_instances": summary.halted_instances,
            "mismatches": summary.mismatches,
            "halt_mismatches": summary.halt_mismatches,
            "max_deviation": summary.max_deviation,
        }
        header = list(payload)
        text = "\n".join(f"{k}: {fmt(v)}" for k, v in payload.items())
        return Output(payload, header, [tuple(payload.values())], text,
                      EXIT_OK if summary.ok else EXIT_MISMATCH)

    coeffs = _coefficients(args, args.mode)
    cmp = compare_instance(coeffs, init, n, args.mode)
    payload = {
        "mode": args.mode,
        "oracle_halt": cmp.oracle_halt,
        "closed_form_halt": cmp.closed_form_halt,
        "mismatches": cmp.mismatches,
        "max_deviation": cmp.max_deviation,
        "rows": [dict(zip(("n", "x_oracle", "x_closed", "y_oracle", "y_closed", "deviation"), r)) for r in cmp.rows],
    }
    text = (f"max deviation: {fmt(cmp.max_deviation)}\nmismatches: {cmp.mismatches}\n"
            f"oracle halt: {cmp.oracle_halt}\nclosed-form halt: {cmp.closed_form_halt}")
    return Output(payload, ["n", "x_oracle", "x_closed", "y_oracle", "y_closed", "deviation"], cmp.rows, text,
                  EXIT_OK if cmp.ok else EXIT_MISMATCH)


def cmd_forbidden(args) -> Output:
    coeffs = _coefficients(args, args.mode)
    init = _init(args, args.mode)
    horizon = _check_n(args.horizon)
    table = j_sequence(coeffs, horizon + 2, args.mode)
    report = forbidden_set_scan(coeffs, init, table, horizon)
    hits = [{"n": h.n, "kind": h.which, "value": h.value, "variable": h.variable} for h in report.hits]
    payload = {"horizon": horizon, "partial_certificate": True, "first_hit": report.first_hit, "hits": hits}
    text = "\n".join([f"hit n={h.n} kind={h.which}" for h in report.hits]
                     or [f"no hits up to n={horizon} (partial certificate)"])
    return Output(payload, ["n", "kind", "value", "variable"],
                  [(h.n, h.which, h.value, h.variable) for h in report.hits], text)


def _spectrum_dict(rep) -> dict:
    return {
        "equilibrium": rep.equilibrium.value,
        "source_root": rep.equilibrium.source_root,
        "eigenvalues": list(rep.eigenvalues),
        "eigen_moduli": list(rep.eigen_moduli),
        "spectral_radius": rep.spectral_radius,
        "verdict": rep.verdict.value,
    }


def cmd_stability(args) -> Output:
    coeffs = _coefficients(args, "float")
    roots = solve_characteristic(coeffs)
    payload: dict = {"equilibria": []}
    rows = []
    for eq in equilibria(coeffs, roots):
        rep = linearization_spectrum(coeffs, eq)
        payload["equilibria"].append(_spectrum_dict(rep))
        rows.append((eq.value, eq.source_root, rep.spectral_radius, rep.verdict.value, "numeric_jacobian"))
    headline = payload["equilibria"][0] if payload["equilibria"] else None
    if coeffs.as_floats() == (1.0, 1.0, 1.0):
        rep = tribonacci_system_spectrum(roots.alpha)
        scalar = scalar_stability_test(roots.alpha)
        headline = _spectrum_dict(rep)
        payload["tribonacci_closed_form"] = headline
        payload["scalar_test"] = {
            "linear_coefficient": scalar.linear_coefficient,
            "constant_coefficient": scalar.constant_coefficient,
            "coefficient_sum": scalar.coefficient_sum,
            "passed": scalar.passed,
            "root_moduli": list(scalar.root_moduli),
        }
        rows.append((rep.equilibrium.value, "alpha", rep.spectral_radius, rep.verdict.value, "closed_form"))
    if headline is not None:
        payload["spectral_radius"] = headline["spectral_radius"]
        payload["verdict"] = headline["verdict"]
    text = "\n".join(f"equilibrium {fmt(r[0])} ({r[1]}, {r[4]}): spectral radius {fmt(r[2])}, {r[3]}" for r in rows)
    return Output(payload, ["equilibrium", "source_root", "spectral_radius", "verdict", "method"], rows,
                  text or "no real equilibria")


def cmd_limits(args) -> Output:
    coeffs = _coefficients(args, "float")
    roots = solve_characteristic(coeffs)
    n = _check_n(args.n)
    limit = ratio_limit(coeffs, roots)
    table = j_sequence(Coefficients(*coeffs.as_floats()), max(n + 1, 3), "float")
    empirical = table[n + 1] / table[n] if table[n] != 0 else None
    payload = {"ratio_limit": limit, "empirical_ratio": empirical, "n": n}
    code = EXIT_OK
    init = _init(args, "float", required=False)
    if init is not None:
        rep = convergence_check(coeffs, init, roots, n, args.tol)
        payload["convergence"] = {
            "applicable": rep.applicable,
            "limit": rep.limit,
            "max_deviation": rep.max_deviation,
            "tol": rep.tol,
            "passed": rep.passed,
            "halt": str(rep.halt) if rep.halt else None,
            "reason": rep.reason,
        }
        if rep.halt is not None:
            code = EXIT_HALTED
        elif rep.applicable and not rep.passed:
            code = EXIT_MISMATCH
    lines = [f"ratio limit: {fmt(limit) if limit is not None else 'does not exist'}",
             f"J_{n + 1}/J_{n}: {fmt(empirical)}"]
    if "convergence" in payload:
        conv = payload["convergence"]
        lines.append(f"convergence: applicable={conv['applicable']} passed={conv['passed']} "
                     f"max_deviation={fmt(conv['max_deviation'])}")
    rows = [(limit, empirical, payload.get("convergence", {}).get("max_deviation"),
             payload.get("convergence", {}).get("passed"))]
    return Output(payload, ["ratio_limit", "empirical_ratio", "max_deviation", "passed"], rows, "\n".join(lines), code)


COMMANDS = {
    "roots": (cmd_roots, "json", "roots of the characteristic cubic and Vieta residuals"),
    "sequence": (cmd_sequence, "plain", "terms J_0..J_n (or the mirror j_n)"),
    "simulate": (cmd_simulate, "csv", "direct iteration of the system"),
    "compare": (cmd_compare, "json", "closed form against direct iteration"),
    "forbidden": (cmd_forbidden, "json", "scan A_n, B_n for zeros"),
    "stability": (cmd_stability, "json", "equilibria and linearization spectra"),
    "limits": (cmd_limits, "json", "ratio limit and convergence of trajectories"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a")
    common.add_argument("--b")
    common.add_argument("--c")
    common.add_argument("--preset", choices=("tribonacci", "padovan"))
    common.add_argument("--init", help="x_-1,x_0,y_-1,y_0")
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--format", choices=("csv", "json", "plain"))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="recur-forge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    defaults_n = {"sequence": 10, "simulate": 20, "compare": 25, "limits": 120}
    for name, (_, _, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in defaults_n:
            p.add_argument("-n", "--n-max", dest="n", type=int, default=defaults_n[name])
        if name == "sequence":
            p.add_argument("--mirror", action="store_true")
        if name == "compare":
            p.add_argument("--instances", type=int, default=100)
        if name == "forbidden":
            p.add_argument("--horizon", type=int, default=DEFAULT_HORIZON)
        if name == "limits":
            p.add_argument("--tol", type=float, default=1e-6)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            print(f"error: {SEED_ENV}={env_seed!r} is not an integer", file=sys.stderr)
            return EXIT_INVALID
    handler, default_format, _ = COMMANDS[args.command]
    try:
        out = handler(args)
    except (InvalidInputError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    rendered = out.render(args.format or default_format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
