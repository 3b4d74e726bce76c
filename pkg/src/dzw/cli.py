"""Batch command-line interface.

Subcommands:

* ``orbits gen-sft <sft.json>``: enumerate prime orbits of a suspension flow
  and write an orbits.json catalog.
* ``zeta orbit|ruelle|selberg <orbits.json>``: sweep a series over an s-grid
  and emit CSV.  ``selberg`` with ``--shift-mode`` sweeps the alternating
  wedge combination instead.
* ``regdet <spectrum.json>``: sweep log det(A + s) over an s-grid.
* ``torsion <spectrum.json> [--orbits <orbits.json>]``: analytic torsion and,
  with a catalog, the torsion-vs-orbit-sum residual.
* ``verify <suite>``: run a built-in verification suite; nonzero exit status
  iff a check fails.

Sweep values that are logarithms are branch-tracked along the grid: each
point's imaginary part is chosen within pi of its predecessor, so "mod 2 pi i"
statements can be examined with one consistent branch.  Rows failing to
evaluate keep their error message in the last column and the sweep continues.
CSV output is byte-identical across runs and thread counts (DZW_THREADS caps
the worker pool).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Optional

from .errors import WorkbenchError
from .io_schemas import (
    load_orbit_catalog,
    load_sft,
    load_spectrum,
    save_orbit_catalog,
)
from .spectral_zeta import reg_det
from .symbolic_dynamics import build_catalog
from .torsion import analytic_torsion, fried_residual
from .verify import SUITES, run_suite
from .zeta_series import (
    LogSeriesEvaluator,
    OrbitSeriesEvaluator,
    SeriesValue,
    TruncationBudget,
    ruelle_from_selberg,
)

CSV_HEADER = ("s_re", "s_im", "value_re", "value_im", "tail_bound", "converged", "error")


def _worker_count() -> int:
    env = os.environ.get("DZW_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _grid(args) -> list[complex]:
    count = args.s_count
    if count < 1:
        raise WorkbenchError("grid count must be >= 1")
    if count == 1:
        points = [args.s_start]
    else:
        step = (args.s_stop - args.s_start) / (count - 1)
        points = [args.s_start + j * step for j in range(count)]
    if args.s_along == "vertical-line":
        return [complex(args.s_re, t) for t in points]
    return [complex(t, 0.0) for t in points]


def _budget(args) -> TruncationBudget:
    return TruncationBudget(
        max_length=args.max_length,
        max_power=args.max_power,
        max_sym=args.max_sym,
        tail_tol=args.tol,
    )


def sweep(evaluate: Callable[[complex], SeriesValue], grid: list[complex]) -> list[tuple]:
    """Evaluate grid points (possibly in parallel), then fix log branches in
    grid order.  Returns CSV rows."""

    def run_point(s: complex):
        try:
            return evaluate(s), ""
        except WorkbenchError as exc:
            return None, f"{type(exc).__name__}: {exc}"

    workers = _worker_count()
    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_point, grid))
    else:
        results = [run_point(s) for s in grid]
    values: list[Optional[complex]] = [r.value if r is not None else None for r, _ in results]
    prev = None
    for j, v in enumerate(values):
        if v is None:
            continue
        if prev is not None:
            turns = round((prev.imag - v.imag) / (2.0 * math.pi))
            v = complex(v.real, v.imag + 2.0 * math.pi * turns)
            values[j] = v
        prev = v
    rows = []
    for s, v, (r, err) in zip(grid, values, results):
        if r is None:
            rows.append((repr(s.real), repr(s.imag), "", "", "", "", err))
        else:
            rows.append(
                (
                    repr(s.real),
                    repr(s.imag),
                    repr(v.real),
                    repr(v.imag),
                    repr(float(r.tail_bound)),
                    "true" if r.converged else "false",
                    err,
                )
            )
    return rows


def _emit_csv(rows: list[tuple], out: Optional[str]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    text = buf.getvalue()
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_sigma_mode(text: str):
    if text == "trivial":
        return None
    if text == "bundle":
        return "bundle"
    if text.startswith("wedge:"):
        return ("wedge", int(text.split(":", 1)[1]))
    raise WorkbenchError(f"unknown sigma mode {text!r} (use trivial, bundle, wedge:<l>)")


def cmd_orbits(args) -> int:
    sys_ = load_sft(args.sft)
    catalog = build_catalog(sys_, args.max_length)
    save_orbit_catalog(args.out, catalog)
    lengths = [p.prime_length for p in catalog.primes]
    total = sum(p.count for p in catalog.primes)
    if lengths:
        print(
            f"wrote {args.out}: {total} prime orbits "
            f"(lengths {min(lengths):.6g} .. {max(lengths):.6g})"
        )
    else:
        print(f"wrote {args.out}: empty catalog")
    return 0


def cmd_zeta(args) -> int:
    catalog = load_orbit_catalog(args.orbits)
    budget = _budget(args)
    grid = _grid(args)
    if args.mode == "orbit":
        evaluator = OrbitSeriesEvaluator(catalog, budget)
        fn = evaluator.evaluate
    elif args.mode == "ruelle":
        evaluator = LogSeriesEvaluator(catalog, budget, sigma_spec=None, use_sym=False)
        fn = evaluator.evaluate
    elif args.shift_mode is not None:
        mode = {"paper2l": "paper_2l", "telescope": "telescoping_l"}[args.shift_mode]

        def fn(s, _mode=mode):
            return ruelle_from_selberg(catalog, s, _mode, budget)

    else:
        sigma = _parse_sigma_mode(args.sigma_mode)
        evaluator = LogSeriesEvaluator(catalog, budget, sigma_spec=sigma, use_sym=True)
        fn = evaluator.evaluate
    _emit_csv(sweep(fn, grid), args.out)
    return 0


def cmd_regdet(args) -> int:
    spectra = load_spectrum(args.spectrum)
    model = spectra.per_degree[args.degree]
    if model is None:
        raise WorkbenchError(f"spectrum file has no degree {args.degree}")
    grid = _grid(args)

    def evaluate(s: complex) -> SeriesValue:
        log_det, _ = reg_det(model, s)
        return SeriesValue(log_det, 0.0, True)

    _emit_csv(sweep(evaluate, grid), args.out)
    return 0


def cmd_torsion(args) -> int:
    spectra = load_spectrum(args.spectrum)
    log_tau, tau = analytic_torsion(spectra)
    lines = [("log_tau", repr(log_tau)), ("tau", repr(tau))]
    print(f"log_tau = {log_tau!r}")
    print(f"tau = {tau!r}")
    if args.orbits:
        catalog = load_orbit_catalog(args.orbits)
        budget = _budget(args)
        res = fried_residual(spectra, catalog, budget, sign_convention=args.sign_convention)
        print(f"fried_residual = {res!r}  (sign_convention {args.sign_convention:+d})")
        lines.append(("fried_residual_re", repr(res.real)))
        lines.append(("fried_residual_im", repr(res.imag)))
        lines.append(("sign_convention", str(args.sign_convention)))
    if args.out:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("quantity", "value"))
        writer.writerows(lines)
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    return 0


def cmd_verify(args) -> int:
    report = run_suite(args.suite)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        if math.isfinite(check.tolerance):
            detail = f"residual {check.residual:.3e} <= {check.tolerance:.3e}"
        elif math.isfinite(check.residual):
            detail = f"residual {check.residual:.3e}"
        else:
            detail = ""
        note = f"  [{check.note}]" if check.note else ""
        print(f"{status} {check.name}  {detail}{note}")
    print(f"suite {report.suite}: {'PASS' if report.passed else 'FAIL'}")
    if args.out:
        Path(args.out).write_text(
            json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    return 0 if report.passed else 1


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s-start", type=float, default=1.0)
    p.add_argument("--s-stop", type=float, default=3.0)
    p.add_argument("--s-count", type=int, default=21)
    p.add_argument(
        "--s-along",
        choices=("real-axis", "vertical-line"),
        default="real-axis",
        help="grid direction; vertical-line sweeps Im(s) at fixed --s-re",
    )
    p.add_argument("--s-re", type=float, default=1.0, help="Re(s) for vertical sweeps")


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-length", type=float, default=30.0)
    p.add_argument("--max-power", type=int, default=40)
    p.add_argument("--max-sym", type=int, default=60)
    p.add_argument("--tol", type=float, default=1e-8)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dzw", description="dynamical zeta workbench"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    orbits = sub.add_parser("orbits", help="orbit catalog generation")
    orbits_sub = orbits.add_subparsers(dest="orbits_command", required=True)
    gen = orbits_sub.add_parser("gen-sft", help="enumerate orbits of an SFT suspension")
    gen.add_argument("sft", help="sft.json input")
    gen.add_argument("--max-length", type=float, default=12.0)
    gen.add_argument("--out", required=True, help="orbits.json output")
    gen.set_defaults(fn=cmd_orbits)

    zeta = sub.add_parser("zeta", help="series sweeps over an s-grid")
    zeta.add_argument("mode", choices=("orbit", "ruelle", "selberg"))
    zeta.add_argument("orbits", help="orbits.json input")
    _add_grid_flags(zeta)
    _add_budget_flags(zeta)
    zeta.add_argument(
        "--sigma-mode",
        default="bundle",
        help="selberg weight: trivial, bundle, or wedge:<l>",
    )
    zeta.add_argument(
        "--shift-mode",
        choices=("paper2l", "telescope"),
        default=None,
        help="sweep the alternating wedge combination with this shift instead",
    )
    zeta.add_argument("--out", default=None, help="CSV output path (default stdout)")
    zeta.set_defaults(fn=cmd_zeta)

    regdet = sub.add_parser("regdet", help="regularized determinant sweeps")
    regdet.add_argument("spectrum", help="spectrum.json input")
    regdet.add_argument("--degree", type=int, default=0)
    _add_grid_flags(regdet)
    regdet.add_argument("--out", default=None)
    regdet.set_defaults(fn=cmd_regdet)

    torsion = sub.add_parser("torsion", help="analytic torsion from spectra")
    torsion.add_argument("spectrum", help="spectrum.json input")
    torsion.add_argument("--orbits", default=None, help="orbits.json for the residual")
    torsion.add_argument("--sign-convention", type=int, choices=(1, -1), default=-1)
    _add_budget_flags(torsion)
    torsion.add_argument("--out", default=None)
    torsion.set_defaults(fn=cmd_torsion)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--out", default=None, help="JSON report path")
    verify.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except WorkbenchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
