"""Command-line interface.

Usage::

    cauchyprop genexp --order 2 --residue 0 --re 0:2:3 --im 0:0:1
    cauchyprop coeffs --order 3
    cauchyprop solve problem.json --oracle
    cauchyprop verify problem.json
    cauchyprop wave --order 2 --speed 1 --grid 64 --time 3.14 --profile sine:1

Negative grid bounds must be attached with ``=``: ``--re=-5:5:21``.

Exit codes: 0 success, 2 invalid arguments or input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from .errors import ConfigurationError, NumericalError, ValidationError
from .problem_io import format_float, load_problem, write_solution_csv
from .roots import coeffs_analytic, solve_coeffs
from .solver import (
    INIT_STEP,
    INIT_TOLERANCE,
    PDE_STEP,
    PDE_TOLERANCE,
    solve_closed,
    solve_series,
    verify_initial_conditions,
    verify_pde_residual,
)
from .sparse_exp import DEFAULT_MAX_TERMS, DEFAULT_TOLERANCE, SeriesParams, default_coeffs, yj_hybrid
from .wave import PeriodicProfile, WaveProblem, grid, make_profile, wave_solve_shift, wave_solve_spectral

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

COEFF_CHECK_TOL = 1e-10


def _grid_spec(text: str) -> np.ndarray:
    parts = text.split(":")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        if len(parts) != 3 or n < 1:
            raise ValueError
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(
            f"grid spec must be a:b:n with n >= 1, got {text!r}"
        ) from None
    return np.linspace(a, b, n)


def _tolerance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                   help="relative series truncation tolerance")
    p.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS,
                   help="series term cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cauchyprop",
        description="Closed-form propagators for arbitrary-order Cauchy problems.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="output file (default: standard output)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("genexp", parents=[common], help="tabulate the sparse exponential series y_j(z)")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--residue", type=int, required=True)
    p.add_argument("--re", type=_grid_spec, required=True, metavar="A:B:N")
    p.add_argument("--im", type=_grid_spec, required=True, metavar="A:B:N")
    _tolerance_args(p)

    p = sub.add_parser("coeffs", parents=[common], help="print the coefficient table C[n, j]")
    p.add_argument("--order", type=int, required=True)

    p = sub.add_parser("solve", parents=[common], help="solve a problem file")
    p.add_argument("problem")
    p.add_argument("--times", type=float, nargs="+", help="override the file's times")
    p.add_argument("--oracle", action="store_true", help="also emit the series solution")
    p.add_argument("--allow-backward", action="store_true", help="admit t < t0")
    _tolerance_args(p)

    p = sub.add_parser("verify", parents=[common], help="check initial conditions and the evolution equation")
    p.add_argument("problem")
    p.add_argument("--times", type=float, nargs="+", help="override the file's times")
    p.add_argument("--h-init", type=float, default=INIT_STEP)
    p.add_argument("--h-pde", type=float, default=PDE_STEP)
    p.add_argument("--init-tol", type=float, default=INIT_TOLERANCE)
    p.add_argument("--pde-tol", type=float, default=PDE_TOLERANCE)
    p.add_argument("--precision", choices=("extended", "double"), default="extended")
    _tolerance_args(p)

    p = sub.add_parser("wave", parents=[common], help="order-N periodic wave equation demo")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--speed", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--profile", action="append", default=[],
                   help="initial profile u_j (repeat for j = 0, 1, ...; missing ones are zero): "
                        "sine:k, cosine:k, gaussian-band:kmax")
    p.add_argument("--method", choices=("spectral", "shift", "both"), default="both")
    return parser


def _rows_to_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def run_genexp(args) -> str:
    params = SeriesParams(args.order, args.residue, args.tolerance, args.max_terms)
    coeffs = default_coeffs(args.order)
    rows = []
    for x in args.re:
        for y in args.im:
            value, method = yj_hybrid(complex(x, y), params, coeffs)
            rows.append([format_float(x), format_float(y),
                         format_float(value.real), format_float(value.imag), method.value])
    return _rows_to_text(["z_re", "z_im", "y_re", "y_im", "method"], rows)


def run_coeffs(args) -> str:
    table = solve_coeffs(args.order)
    mismatch = float(np.abs(table.entries - coeffs_analytic(args.order).entries).max())
    if mismatch > COEFF_CHECK_TOL:
        raise NumericalError(
            f"coeffs: solved table deviates from the analytic table by {mismatch:.3e}"
        )
    rows = [
        [n, j, format_float(table.entries[n - 1, j].real), format_float(table.entries[n - 1, j].imag)]
        for n in range(1, table.order + 1)
        for j in range(table.order)
    ]
    return _rows_to_text(["n", "j", "re", "im"], rows)


def run_solve(args) -> str:
    problem, times = load_problem(args.problem)
    if args.times:
        times = args.times
    samples = []
    for t in times:
        samples.append(solve_closed(problem, t, args.tolerance, args.max_terms, args.allow_backward))
        if args.oracle:
            samples.append(solve_series(problem, t, args.tolerance, args.max_terms, args.allow_backward))
    buf = io.StringIO()
    write_solution_csv(samples, buf)
    return buf.getvalue()


def run_verify(args) -> tuple[str, bool]:
    problem, times = load_problem(args.problem)
    if args.times:
        times = args.times
    lines = []
    ok = True
    report = verify_initial_conditions(
        problem, args.h_init, args.precision, args.tolerance, args.max_terms
    )
    for i, r in enumerate(report.residuals):
        passed = r < args.init_tol
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'} initial u_{i} residual={r:.3e} "
                     f"tol={args.init_tol:.1e} h={args.h_init:.1e}")
    for t in times:
        if not t - problem.t0 > problem.order * args.h_pde:
            lines.append(f"SKIP pde t={format_float(t)} (needs t - t0 > N*h)")
            continue
        r = verify_pde_residual(problem, t, args.h_pde, args.precision, args.tolerance, args.max_terms)
        passed = r < args.pde_tol
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'} pde t={format_float(t)} residual={r:.3e} "
                     f"tol={args.pde_tol:.1e} h={args.h_pde:.1e}")
    return "\n".join(lines) + "\n", ok


def run_wave(args) -> str:
    if args.order < 1:
        raise ConfigurationError(f"--order must be >= 1, got {args.order}")
    if len(args.profile) > args.order:
        raise ConfigurationError(f"at most {args.order} profiles for order {args.order}")
    m = args.grid
    profiles = [make_profile(spec, m) for spec in args.profile]
    profiles += [PeriodicProfile(np.zeros(m)) for _ in range(args.order - len(profiles))]
    problem = WaveProblem(args.order, args.speed, m, profiles, t0=args.t0)
    routes = {"spectral": wave_solve_spectral, "shift": wave_solve_shift}
    chosen = list(routes) if args.method == "both" else [args.method]
    x = grid(m)
    rows = []
    for name in chosen:
        u = routes[name](problem, args.time).samples
        rows.extend(
            [format_float(xi), format_float(ui.real), format_float(ui.imag), name]
            for xi, ui in zip(x, u)
        )
    return _rows_to_text(["x", "re", "im", "method"], rows)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "genexp": run_genexp,
        "coeffs": run_coeffs,
        "solve": run_solve,
        "wave": run_wave,
    }
    try:
        if args.subcommand == "verify":
            text, ok = run_verify(args)
            _emit(text, args.output)
            return EXIT_OK if ok else EXIT_NUMERICAL
        _emit(handlers[args.subcommand](args), args.output)
    except ValidationError as exc:
        print(f"cauchyprop {args.subcommand}: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"cauchyprop {args.subcommand}: numerical failure in {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"cauchyprop {args.subcommand}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
