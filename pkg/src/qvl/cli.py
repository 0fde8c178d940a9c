"""Command-line front end.

Subcommands: ``measures`` (invariant report), ``violate`` (optimize one
operator family), ``gamma-r`` (spectral bound with per-axis detail),
``scan`` (single-measure sweep to CSV), ``verify`` (self-check suite).
Exit codes: 0 success, 2 domain error, 3 numerical error, 4 verification
failure.  Output files are written to a temporary sibling and renamed into
place, so a failing run never leaves a partial artifact.  The environment
variable ``QVL_THREADS`` caps scan parallelism.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from .errors import DomainError, NumericalError
from .measures import measure_set
from .rmatrix import AXES, alpha_from_measures, flattening_spectra, gamma_r
from .state import StateParams, params_from_json
from .verify import run_verification
from .violation import (
    OptimizerConfig,
    format_scan_csv,
    maximize_violation,
    scan,
)

_GNUPLOT_TEMPLATE = """\
set datafile separator ','
set xlabel 'squared measure value'
set ylabel 'violation'
set key left top
plot '{csv}' using 2:3 with linespoints title 'gamma', \\
     '{csv}' using 2:4 with linespoints title 'gamma_R'
"""


def _load_state(spec: str) -> StateParams:
    text = spec.strip()
    if not text.startswith("{"):
        try:
            with open(spec, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise DomainError(f"cannot read state file {spec!r}: {exc}") from exc
    return params_from_json(text)


def _parse_coeffs(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise DomainError(f"cannot parse coefficients {text!r}") from exc
    if not 1 <= len(values) <= 4:
        raise DomainError("expected between one and four comma-separated coefficients")
    return values


def _write_atomic(path: str, content: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".qvl-", suffix=".tmp")
    except OSError as exc:
        raise DomainError(f"cannot write {path!r}: {exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(content)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _emit(content: str, out: str | None) -> None:
    if out:
        _write_atomic(out, content)
    else:
        sys.stdout.write(content)


def _thread_cap() -> int:
    raw = os.environ.get("QVL_THREADS")
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise DomainError(f"QVL_THREADS must be an integer, got {raw!r}") from exc


def _optimizer_config(args) -> OptimizerConfig:
    return OptimizerConfig(restarts=args.restarts, seed=args.seed)


def _cmd_measures(args) -> int:
    ms = measure_set(_load_state(args.state))
    _emit(json.dumps(ms.as_dict(), indent=2) + "\n", args.out)
    return 0


def _cmd_violate(args) -> int:
    params = _load_state(args.state)
    result = maximize_violation(params, args.family, args.coeffs, _optimizer_config(args))
    payload = {
        "gamma": result.gamma,
        "family": args.family,
        "coeffs": list(args.coeffs),
        "settings": {name: list(vec) for name, vec in result.best_settings.items()},
        "restarts_agreeing": result.restarts_agreeing,
        "converged": result.converged,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_gamma_r(args) -> int:
    params = _load_state(args.state)
    ms = measure_set(params)
    axes_payload = []
    for axis, spec in zip(AXES, flattening_spectra(params)):
        axes_payload.append({
            "axis": axis,
            "alpha": [spec.alpha1, spec.alpha2, spec.alpha3],
            "alpha_from_measures": list(alpha_from_measures(ms, axis)),
            "roots": list(spec.roots_descending),
        })
    payload = {"gamma_R": gamma_r(params), "axes": axes_payload}
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_scan(args) -> int:
    if args.grid < 1:
        raise DomainError(f"grid must request at least one point, got {args.grid}")
    grid = np.linspace(0.0, 1.0, args.grid)
    rows = scan(
        args.measure, grid, args.family, args.coeffs,
        _optimizer_config(args), max_workers=_thread_cap(),
    )
    csv_text = format_scan_csv(rows, args.measure)
    _emit(csv_text, args.out)
    if args.gnuplot:
        if not args.out:
            raise DomainError("--gnuplot requires --out so the script can reference the CSV")
        _write_atomic(args.gnuplot, _GNUPLOT_TEMPLATE.format(csv=args.out))
    return 0


def _cmd_verify(args) -> int:
    ok = run_verification(seed=args.seed, states=args.states, restarts=args.restarts)
    return 0 if ok else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qvl",
        description="Violation optimization and entanglement diagnostics "
                    "for canonical three-qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_state(p):
        p.add_argument("--state", required=True,
                       help='inline JSON {"lambda":[...],"phi":x} or a file path')

    def add_optimizer(p):
        p.add_argument("--family", type=int, default=3, choices=range(9),
                       metavar="0-8", help="operator family id (default 3)")
        p.add_argument("--coeffs", type=_parse_coeffs, default=(1.0, -1.0),
                       metavar="a,b[,c[,d]]", help="family coefficients (default 1,-1)")
        p.add_argument("--restarts", type=int, default=64, metavar="N")
        p.add_argument("--seed", type=int, default=0, metavar="N")

    p = sub.add_parser("measures", help="print the invariant set as JSON")
    add_state(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_measures)

    p = sub.add_parser("violate", help="optimize one operator family on a state")
    add_state(p)
    add_optimizer(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_violate)

    p = sub.add_parser("gamma-r", help="spectral bound with per-axis roots")
    add_state(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=_cmd_gamma_r)

    p = sub.add_parser("scan", help="sweep one squared measure and write CSV")
    p.add_argument("--measure", type=int, required=True, choices=(1, 2, 3, 4))
    add_optimizer(p)
    p.add_argument("--grid", type=int, default=101, metavar="N",
                   help="number of uniform grid points on [0, 1] (default 101)")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--gnuplot", metavar="PATH",
                   help="also write a gnuplot script plotting the CSV")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--states", type=int, default=200, metavar="N",
                   help="random states per check (default 200)")
    p.add_argument("--restarts", type=int, default=16, metavar="N")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
