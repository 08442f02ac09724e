"""Command line interface.

Subcommands: ``fit`` (estimate directions from a CSV), ``scree``
(spectrum diagnostics), ``project`` (coordinates on fitted directions),
and ``simulate`` (Monte Carlo method comparison).  Machine output is CSV
or JSON with full-precision floats (17 significant digits in CSV); the
``table`` format renders 4-decimal human-readable tables.  Exit status:
0 success, 1 usage or configuration error, 2 data error, 3 numerical
failure.  Errors are reported on stderr as one JSON object with fields
``error`` (machine-readable code) and ``message``.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from .base import validate_dataset
from .estimators import METHOD_NAMES, build_estimator
from .exceptions import (
    ConfigError,
    ContourRegError,
    DataError,
    MissingResponseColumnError,
    NonNumericCellError,
    NumericalError,
    ParseError,
)
from .metrics import scree
from .simulation import PRESETS, run_comparison

__all__ = ["main", "ingest_csv"]


def _fmt(value):
    return f"{float(value):.17g}"


# --- CSV ingest -------------------------------------------------------------

def ingest_csv(path, response):
    """Load a headed CSV into a validated dataset.

    Parameters
    ----------
    path : str
    response : str
        Response column, by header name or by 0-based integer position.

    Returns
    -------
    (Dataset, list of predictor names)

    Raises
    ------
    FileNotFoundError, ParseError, NonNumericCellError,
    MissingResponseColumnError
        Parse errors carry 1-based file coordinates (header is row 1).
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [cell.strip() for cell in next(reader)]
        except StopIteration:
            raise ParseError("empty file: a header row is required", row=1)
        width = len(header)
        if width < 2:
            raise ParseError("need at least 2 columns", row=1)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue  # blank line
            if len(row) != width:
                raise ParseError(
                    f"row {lineno} has {len(row)} fields, expected {width}",
                    row=lineno)
            rows.append((lineno, row))

    if response in header:
        target = header.index(response)
    else:
        try:
            target = int(response)
        except ValueError:
            raise MissingResponseColumnError(
                f"no column named {response!r} among {header}")
        if not 0 <= target < width:
            raise MissingResponseColumnError(
                f"response index {target} outside 0..{width - 1}")

    values = np.empty((len(rows), width))
    for r, (lineno, row) in enumerate(rows):
        for c, cell in enumerate(row):
            try:
                values[r, c] = float(cell)
            except ValueError:
                raise NonNumericCellError(
                    f"row {lineno}, column {c + 1}: {cell.strip()!r} "
                    f"is not numeric", row=lineno, column=c + 1)

    mask = np.ones(width, dtype=bool)
    mask[target] = False
    dataset = validate_dataset(values[:, mask], values[:, target])
    names = [h for k, h in enumerate(header) if k != target]
    return dataset, names


# --- estimator construction from flags --------------------------------------

def _parse_pairs(text):
    kind, sep, value = text.partition(":")
    if not sep:
        raise ConfigError(
            f"--pairs must look like top:<m> or thresh:<c>, got {text!r}")
    if kind == "top":
        try:
            return "top", int(value)
        except ValueError:
            raise ConfigError(f"pair budget must be an integer, got {value!r}")
    if kind == "thresh":
        try:
            return "threshold", float(value)
        except ValueError:
            raise ConfigError(f"threshold must be a number, got {value!r}")
    raise ConfigError(f"unknown pair rule {kind!r}; use top:<m> or thresh:<c>")


def _build_from_flags(args):
    options = {}
    if args.rho is not None:
        options["tube_radius"] = args.rho
    if args.pairs is not None:
        kind, value = _parse_pairs(args.pairs)
        options["pair_rule"] = kind
        if kind == "top":
            options["n_pairs"] = value
        else:
            options["threshold"] = value
    if args.slices is not None:
        options["n_slices"] = args.slices
    if args.geometry is not None:
        options["geometry"] = {"std": "standardized", "raw": "raw"}[args.geometry]
    return build_estimator(args.method, n_components=args.q, **options)


def _fit_from_args(args):
    dataset, names = ingest_csv(args.input, args.response)
    est = _build_from_flags(args)
    est.fit(dataset.predictors, dataset.response)
    return est, dataset, names


# --- output rendering --------------------------------------------------------

def _csv_text(header, records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(records)
    return buf.getvalue()


def _emit(text, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_fit(args):
    est, _, names = _fit_from_args(args)
    result = est.result_
    if args.format == "json":
        payload = {
            "method": result.method,
            "parameters": result.parameters,
            "predictors": names,
            "eigen_convention": result.eigen_convention,
            "eigenvalues": list(result.eigenvalues),
            "raw_directions": [list(col) for col in result.raw_directions.T],
            "basis": [list(col) for col in result.subspace.basis.T],
        }
        return json.dumps(payload, indent=2) + "\n"
    records = []
    for k, v in enumerate(result.eigenvalues, start=1):
        records.append(["eigenvalue", "", k, _fmt(v)])
    for k, col in enumerate(result.raw_directions.T, start=1):
        for name, v in zip(names, col):
            records.append(["raw_direction", name, k, _fmt(v)])
    for k, col in enumerate(result.subspace.basis.T, start=1):
        for name, v in zip(names, col):
            records.append(["basis", name, k, _fmt(v)])
    return _csv_text(["record", "name", "component", "value"], records)


def _cmd_scree(args):
    est, _, _ = _fit_from_args(args)
    result = est.result_
    ev = result.eigenvalues
    if ev[0] < -1e-10 * max(float(np.abs(ev).max()), 1.0):
        ev = np.sort(np.abs(ev))  # signed kernels: rank by magnitude
    report = scree(ev, convention=result.eigen_convention)
    if args.format == "json":
        payload = {
            "method": result.method,
            "eigenvalues": list(report.eigenvalues),
            "gaps": list(report.gaps),
            "suggested_q": report.suggested_q,
            "convention": report.convention,
            "flat": report.flat,
            "note": "largest-ratio-gap heuristic; advisory only",
        }
        return json.dumps(payload, indent=2) + "\n"
    records = []
    for k, v in enumerate(report.eigenvalues, start=1):
        records.append(["eigenvalue", k, _fmt(v)])
    for k, v in enumerate(report.gaps, start=1):
        records.append(["gap", k, _fmt(v)])
    records.append(["suggested_q", "", report.suggested_q])
    records.append(["convention", "", report.convention])
    records.append(["flat", "", int(report.flat)])
    return _csv_text(["record", "index", "value"], records)


def _cmd_project(args):
    est, dataset, _ = _fit_from_args(args)
    coords = est.transform(dataset.predictors)
    header = [f"dir{k + 1}" for k in range(coords.shape[1])] + ["response"]
    if args.format == "json":
        payload = {
            "columns": header,
            "rows": [list(row) + [y]
                     for row, y in zip(coords, dataset.response)],
        }
        return json.dumps(payload, indent=2) + "\n"
    records = [[_fmt(v) for v in row] + [_fmt(y)]
               for row, y in zip(coords, dataset.response)]
    return _csv_text(header, records)


def _cmd_simulate(args):
    if args.preset:
        try:
            cfg = PRESETS[args.preset]
        except KeyError:
            raise ConfigError(
                f"unknown preset {args.preset!r}; choose from "
                f"{', '.join(sorted(PRESETS))}")
        designs, sigmas, methods = cfg["designs"], cfg["sigmas"], cfg["methods"]
    else:
        if not (args.design and args.sigmas and args.methods):
            raise ConfigError(
                "either --preset or all of --design/--sigmas/--methods "
                "are required")
        designs = tuple(args.design.split(","))
        try:
            sigmas = tuple(float(s) for s in args.sigmas.split(","))
        except ValueError:
            raise ConfigError(f"bad --sigmas value {args.sigmas!r}")
        methods = tuple(m.strip().lower() for m in args.methods.split(",") if m.strip())
    gcr_options = {}
    if args.pairs is not None:
        kind, value = _parse_pairs(args.pairs)
        gcr_options["pair_rule"] = kind
        if kind == "top":
            gcr_options["n_pairs"] = value
        else:
            gcr_options["threshold"] = value
    tube_radius = 1.0 if args.rho is None else args.rho
    report = run_comparison(
        designs, sigmas, methods,
        runs=args.runs, n=args.n, base_seed=args.seed, n_slices=args.slices,
        tube_radius=tube_radius, gcr_options=gcr_options or None)
    rows = report.to_rows()
    if args.format == "json":
        cells = [
            {"design": r["design"], "sigma": r["sigma"],
             "method": r["method"], "dist": r["mean_distance"],
             "se": r["se"], "runs": r["runs"], "failures": r["failures"],
             "valid": r["valid"]}
            for r in rows
        ]
        return json.dumps({"config": report.config, "cells": cells},
                          indent=2) + "\n"
    if args.format == "table":
        lines = [f"{'design':8} {'sigma':>6} {'method':6} "
                 f"{'dist':>8} {'se':>8} {'fail':>5}"]
        for r in rows:
            lines.append(
                f"{r['design']:8} {r['sigma']:6.2f} {r['method']:6} "
                f"{r['mean_distance']:8.4f} {r['se']:8.4f} {r['failures']:5d}")
        return "\n".join(lines) + "\n"
    records = [
        [r["design"], _fmt(r["sigma"]), r["method"], _fmt(r["mean_distance"]),
         _fmt(r["se"]), r["runs"], r["failures"]]
        for r in rows
    ]
    return _csv_text(
        ["design", "sigma", "method", "dist", "se", "runs", "failures"],
        records)


# --- argument parsing --------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage problems exit with status 1, not argparse's default 2
        self.print_usage(sys.stderr)
        print(json.dumps({"error": "ConfigError", "message": message}),
              file=sys.stderr)
        raise SystemExit(1)


def _add_model_flags(sub):
    sub.add_argument("--input", required=True, help="CSV file with header row")
    sub.add_argument("--response", required=True,
                     help="response column name or 0-based index")
    sub.add_argument("--method", required=True,
                     help=f"one of {', '.join(METHOD_NAMES)}")
    sub.add_argument("--q", type=int, default=1,
                     help="structural dimension (default 1)")
    sub.add_argument("--rho", type=float, default=None,
                     help="tube radius for gcr")
    sub.add_argument("--pairs", default=None,
                     help="pair rule: top:<m> or thresh:<c>")
    sub.add_argument("--slices", type=int, default=None,
                     help="slice count for sir/save")
    sub.add_argument("--geometry", choices=("raw", "std"), default=None,
                     help="space for contour geometry (default std)")


def _add_output_flags(sub, default_format, formats=("csv", "json")):
    sub.add_argument("--format", choices=formats, default=default_format)
    sub.add_argument("--output", default=None,
                     help="output path (default: stdout)")


def build_parser():
    parser = _Parser(prog="contourreg",
                     description="Contour-based sufficient dimension reduction")
    commands = parser.add_subparsers(dest="command", required=True)

    fit = commands.add_parser("fit", help="estimate directions from a CSV")
    _add_model_flags(fit)
    _add_output_flags(fit, "json")
    fit.set_defaults(func=_cmd_fit)

    sc = commands.add_parser("scree", help="eigenvalue gap diagnostics")
    _add_model_flags(sc)
    _add_output_flags(sc, "json")
    sc.set_defaults(func=_cmd_scree)

    proj = commands.add_parser("project",
                               help="project the sample onto fitted directions")
    _add_model_flags(proj)
    _add_output_flags(proj, "csv")
    proj.set_defaults(func=_cmd_project)

    sim = commands.add_parser("simulate", help="Monte Carlo method comparison")
    sim.add_argument("--preset", choices=sorted(PRESETS), default=None)
    sim.add_argument("--design", default=None,
                     help="comma-separated design ids")
    sim.add_argument("--sigmas", default=None,
                     help="comma-separated noise levels")
    sim.add_argument("--methods", default=None,
                     help="comma-separated method names")
    sim.add_argument("--runs", type=int, default=500)
    sim.add_argument("--n", type=int, default=100)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--slices", type=int, default=10)
    sim.add_argument("--rho", type=float, default=None,
                     help="tube radius for gcr (default 1.0 whitened units)")
    sim.add_argument("--pairs", default=None,
                     help="gcr pair rule override: top:<m> or thresh:<c>")
    _add_output_flags(sim, "csv", formats=("csv", "json", "table"))
    sim.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except ConfigError as exc:
        return _fail(exc.code, exc, 1)
    except FileNotFoundError as exc:
        return _fail("FileNotFound", exc, 2)
    except DataError as exc:
        return _fail(exc.code, exc, 2)
    except NumericalError as exc:
        return _fail(exc.code, exc, 3)
    except ContourRegError as exc:  # pragma: no cover - safety net
        return _fail(exc.code, exc, 1)
    _emit(text, args.output)
    return 0


def _fail(code, exc, status):
    print(json.dumps({"error": code, "message": str(exc)}), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
