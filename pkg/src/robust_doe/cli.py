"""Command-line entry point: ``robust-doe <command> ...``.

Exit codes: 0 success, 1 array failed verification, 2 validation error,
3 shape/parse error, 4 numeric degeneracy, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .arrays import catalog_lookup, resolve_levels, resolve_run, validate_array
from .errors import (
    DegenerateSignal,
    DivisionByZero,
    DoeError,
    ShapeError,
    ZeroRange,
)
from .files import (
    atomic_write_text,
    load_params,
    load_spec,
    read_confirmation_csv,
    read_response_csv,
    write_json,
    write_response_csv,
)
from .gra import RAW, SNR, grey_analysis, normalize, NormalizedSeries
from .pipeline import analyze, build_design, confirm, simulate
from .report import confirmation_to_dict, render_confirmation_text, render_text
from .snr import snr_series
from .core import ResponseMatrix

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_VALIDATION = 2
EXIT_SHAPE = 3
EXIT_NUMERIC = 4
EXIT_USAGE = 64

RHO_ENV = "ROBUST_DOE_RHO"

log = logging.getLogger("robust_doe")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(Exception):
    pass


def _resolve_rho(flag, spec_rho):
    if flag is not None:
        return flag
    env = os.environ.get(RHO_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"{RHO_ENV}={env!r} is not a number") from None
    return spec_rho


def _write_or_print(path, text):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


def _read_responses(spec, design, directory):
    directory = Path(directory)
    out = {}
    for obj in spec.objectives:
        path = directory / f"{obj.name}.csv"
        if not path.exists():
            raise ShapeError(f"{path}: missing response file for objective {obj.name!r}")
        out[obj.name] = read_response_csv(path, design.shape)
    return out


def cmd_design(args):
    spec = load_spec(args.spec)
    design = build_design(spec)
    names = [f.name for _, f in design.inner_factors + design.outer_factors]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["run_id", "inner_run", "outer_run"] + [f"{n}_level" for n in names] + names)
    for cell, (i, j) in enumerate(design.cells(), start=1):
        levels = resolve_levels(design, i, j)
        values = resolve_run(design, i, j)
        w.writerow([cell, i, j] + [levels[n] for n in names] + [repr(values[n]) for n in names])
    _write_or_print(args.out, buf.getvalue())
    log.info("wrote %d cells (%dx%d)", design.shape[0] * design.shape[1], *design.shape)
    return EXIT_OK


def cmd_simulate(args):
    spec = load_spec(args.spec)
    params, inputs, outputs = load_params(args.params)
    results = simulate(spec, params, inputs, outputs)
    out = Path(args.out)
    for name, values in results.items():
        write_response_csv(out / f"{name}.csv", values)
    log.info("wrote %s", ", ".join(f"{n}.csv" for n in results))
    return EXIT_OK


def cmd_snr(args):
    spec = load_spec(args.spec)
    design = build_design(spec)
    responses = _read_responses(spec, design, args.responses)
    series = [snr_series(ResponseMatrix(spec.objective(n), v)) for n, v in responses.items()]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["run_id"] + [c for s in series for c in (f"{s.objective.name}_mean", f"{s.objective.name}_snr")])
    for i in range(design.shape[0]):
        w.writerow([i + 1] + [repr(x) for s in series for x in (s.means[i], s.snrs[i])])
    _write_or_print(args.out, buf.getvalue())
    return EXIT_OK


def cmd_gra(args):
    with open(args.input, encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if len(rows) < 3 or rows[0][0].strip() != "run_id":
        raise ShapeError(f"{args.input}: need a 'run_id,<col>...' header and at least two rows")
    header = [h.strip() for h in rows[0][1:]]
    try:
        data = np.array([[float(c) for c in r[1:]] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ShapeError(f"{args.input}: {exc}") from None
    if data.shape[1] != len(header):
        raise ShapeError(f"{args.input}: rows must have {len(header)} values")
    rho = _resolve_rho(args.rho, 0.5)
    if args.normalized:
        normalized = NormalizedSeries(data, source=SNR)
    elif args.kinds:
        kinds = args.kinds.split(",")
        if len(kinds) != len(header):
            raise UsageError(f"--kinds needs {len(header)} entries")
        normalized = normalize(data, kinds=kinds, source=RAW)
    else:
        normalized = normalize(data, source=SNR)
    weights = [float(w) for w in args.weights.split(",")] if args.weights else None
    result = grey_analysis(normalized, rho=rho, weights=weights)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["run_id"] + [f"norm_{h}" for h in header] + [f"grc_{h}" for h in header] + ["grd", "rank"])
    for i in range(data.shape[0]):
        w.writerow(
            [i + 1]
            + [repr(float(x)) for x in normalized.values[i]]
            + [repr(float(x)) for x in result.grc[i]]
            + [repr(float(result.grd[i])), int(result.rank[i])]
        )
    _write_or_print(args.out, buf.getvalue())
    return EXIT_OK


def cmd_analyze(args):
    spec = load_spec(args.spec)
    design = build_design(spec)
    responses = _read_responses(spec, design, args.responses)
    report = analyze(spec, responses, rho=_resolve_rho(args.rho, spec.rho))
    if args.format == "json":
        text = report.to_json()
    else:
        text = render_text(report, with_banner=not args.no_banner)
    _write_or_print(args.out, text)
    log.info("optimal combination: %s", report.optimal_combination)
    return EXIT_OK


def cmd_confirm(args):
    spec = load_spec(args.spec)
    before = read_confirmation_csv(args.before)
    after = read_confirmation_csv(args.after)
    report = confirm(spec, before, after)
    if args.format == "json":
        text = json.dumps(confirmation_to_dict(report), indent=2) + "\n"
    else:
        text = render_confirmation_text(report, with_banner=not args.no_banner)
    _write_or_print(args.out, text)
    return EXIT_OK


def cmd_verify_array(args):
    array = catalog_lookup(args.name)
    violations = validate_array(array)
    if violations:
        print(f"{array.name}: FAIL")
        for v in violations:
            print(f"  {v}")
        return EXIT_VERIFY_FAILED
    print(f"{array.name}: pass ({array.runs} runs x {array.columns} columns)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="robust-doe", description="Taguchi robust design with grey relational analysis.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("design", help="list every cell of the crossed design as CSV")
    s.add_argument("spec")
    s.add_argument("-o", "--out", help="output CSV (default stdout)")
    s.set_defaults(func=cmd_design)

    s = sub.add_parser("simulate", help="fill the design with surrogate responses")
    s.add_argument("spec")
    s.add_argument("--params", required=True, help="surrogate params JSON")
    s.add_argument("-o", "--out", required=True, help="output directory, one CSV per objective")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("snr", help="per-run mean and SNR of every objective")
    s.add_argument("spec")
    s.add_argument("responses", help="directory holding <objective>.csv files")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_snr)

    s = sub.add_parser("gra", help="grey relational grades of a run_id,<col>... CSV")
    s.add_argument("input")
    s.add_argument("--kinds", help="comma-separated characteristic per column (raw responses)")
    s.add_argument("--normalized", action="store_true", help="input is already normalized to [0, 1]")
    s.add_argument("--rho", type=float)
    s.add_argument("--weights", help="comma-separated objective weights summing to 1")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_gra)

    s = sub.add_parser("analyze", help="full SNR/GRA/range/ANOVA report")
    s.add_argument("spec")
    s.add_argument("responses", help="directory holding <objective>.csv files")
    s.add_argument("-o", "--out")
    s.add_argument("--rho", type=float, help=f"distinguishing coefficient (overrides ${RHO_ENV} and the design file)")
    s.add_argument("--format", choices=("json", "text"), default="json")
    s.add_argument("--no-banner", action="store_true", help="omit the timestamp line of text reports")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("confirm", help="compare baseline and optimized confirmation runs")
    s.add_argument("before")
    s.add_argument("after")
    s.add_argument("spec")
    s.add_argument("-o", "--out")
    s.add_argument("--format", choices=("json", "text"), default="json")
    s.add_argument("--no-banner", action="store_true")
    s.set_defaults(func=cmd_confirm)

    s = sub.add_parser("verify-array", help="check balance and orthogonality of a catalog array")
    s.add_argument("name")
    s.set_defaults(func=cmd_verify_array)
    return p


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, (ZeroRange, DegenerateSignal, DivisionByZero)):
        return EXIT_NUMERIC
    if isinstance(exc, (ShapeError, json.JSONDecodeError, OSError)):
        return EXIT_SHAPE
    return EXIT_VALIDATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"robust-doe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DoeError, json.JSONDecodeError, OSError) as exc:
        code = _exit_code(exc)
        diagnostics = getattr(exc, "diagnostics", None) or [str(exc)]
        for line in diagnostics:
            print(f"robust-doe: {type(exc).__name__}: {line}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
