"""Command-line interface: ``fgnproj <command> [options]``.

Every command builds an :class:`OutputRecord` and writes it as csv, json or an
aligned plain-text layout.  csv and json carry doubles at 17 significant
digits; the plain-text layout rounds half-to-even (5 decimals for coefficients,
6 for the limit constants).

Exit codes: 0 success, 1 a checked property has a counterexample, 2 usage
error, 3 numerical or domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Any, Callable, Optional, Sequence

from . import analysis, bench, closed_form, montecarlo, suites
from .errors import FGNError
from .recursion import coeff_triangle, last_row
from .toeplitz import CRAMER_MAX_N, solve_cramer, solve_system

__all__ = ["OutputRecord", "SCHEMA_VERSION", "main", "parse_grid", "decode", "encode"]

SCHEMA_VERSION = "fgn/1"

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class OutputRecord:
    command: str
    parameters: dict[str, Any]
    columns: list[str]
    rows: list[dict[str, Any]]
    schema_version: str = SCHEMA_VERSION
    # plain-text rendering hints, not part of the payload
    decimals: int = field(default=5, compare=False)
    wide: bool = field(default=False, compare=False)


# ---------------------------------------------------------------- encoding

def _param_text(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ";".join(_param_text(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    # the csv header line is itself comma separated
    return str(value).replace(",", ";")


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return "%.17g" % value          # "nan", "inf", "-inf"
    return value


def _round(value: float, decimals: int) -> str:
    if not math.isfinite(value):
        return "%g" % value
    text = format(Decimal(repr(value)).quantize(Decimal(1).scaleb(-decimals), ROUND_HALF_EVEN), "f")
    return text[1:] if text.startswith("-") and not Decimal(text) else text


def _pretty_cell(value: Any, decimals: int) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return _round(value, decimals)
    return str(value)


def _header(rec: OutputRecord, sep: str) -> str:
    items = [f"schema={rec.schema_version}", f"command={rec.command}"]
    items += [f"{k}={_param_text(v)}" for k, v in rec.parameters.items()]
    return sep.join(items)


def _encode_pretty(rec: OutputRecord) -> str:
    lines = ["# " + _header(rec, " ")]
    if rec.wide:
        # triangle layout: first column n, then one right-aligned column per k
        label = rec.columns[0]
        ks = [c.split("_", 1)[1] for c in rec.columns[1:]]
        cells = [[_pretty_cell(r[c], rec.decimals) for c in rec.columns[1:]] for r in rec.rows]
        width = max([len(c) for row in cells for c in row] + [len(k) for k in ks] + [1])
        corner = "n\\k"
        first = max([len(str(r[label])) for r in rec.rows] + [len(corner)])
        lines.append(corner.ljust(first) + " " + " ".join(k.rjust(width) for k in ks))
        for r, row in zip(rec.rows, cells):
            lines.append((f"{r[label]!s:<{first}} " + " ".join(c.rjust(width) for c in row)).rstrip())
    else:
        table = [rec.columns] + [[_pretty_cell(r[c], rec.decimals) for c in rec.columns]
                                 for r in rec.rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(rec.columns))]
        for row in table:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def encode(rec: OutputRecord, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(_header(rec, ",") + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rec.columns)
        for r in rec.rows:
            writer.writerow([_csv_cell(r[c]) for c in rec.columns])
        return buf.getvalue()
    if fmt == "json":
        payload = {
            "schema_version": rec.schema_version,
            "command": rec.command,
            "parameters": {k: list(v) if isinstance(v, tuple) else v
                           for k, v in rec.parameters.items()},
            "columns": rec.columns,
            "rows": [{c: _json_value(r[c]) for c in rec.columns} for r in rec.rows],
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "pretty":
        return _encode_pretty(rec)
    raise ValueError(f"unknown format {fmt!r}")


def _parse_cell(text: str) -> Any:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def decode(text: str) -> OutputRecord:
    """Read back a csv or json payload written by :func:`encode`."""
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        rows = [{c: (float(v) if v in ("nan", "inf", "-inf") else v) for c, v in r.items()}
                for r in obj["rows"]]
        return OutputRecord(obj["command"], obj["parameters"], obj["columns"], rows,
                            obj["schema_version"])
    lines = text.splitlines()
    head = dict(item.split("=", 1) for item in lines[0].split(","))
    schema, command = head.pop("schema"), head.pop("command")
    reader = csv.reader(lines[1:])
    columns = next(reader)
    rows = [{c: _parse_cell(v) for c, v in zip(columns, line)} for line in reader]
    return OutputRecord(command, head, columns, rows, schema)


# ---------------------------------------------------------------- argument types

def parse_grid(spec: str) -> list[float]:
    """Expand ``start:stop:step``, a single value, or a comma-separated list of either.

    Points are ``start + i*step`` in decimal arithmetic, so ``0.51:0.99:0.01`` gives
    exactly the 49 doubles nearest to the printed values.  The last point is the
    one closest to ``stop``, as long as it lies less than half a step beyond it.
    """
    spec = spec.strip()
    if "," in spec:
        return [v for part in spec.split(",") for v in parse_grid(part)]
    parts = spec.split(":")
    try:
        nums = [Decimal(p) for p in parts]
    except Exception as exc:
        raise ValueError(f"malformed grid {spec!r}") from exc
    if len(nums) == 1:
        return [float(nums[0])]
    if len(nums) != 3:
        raise ValueError(f"grid must be start:stop:step, got {spec!r}")
    start, stop, step = nums
    if step <= 0 or stop < start:
        raise ValueError(f"grid needs step > 0 and stop >= start, got {spec!r}")
    # last point may overshoot stop by strictly less than half a step
    count = math.ceil((stop - start) / step + Decimal("0.5")) - 1
    return [float(start + i * step) for i in range(count + 1)]


def _hurst_type(text: str) -> float:
    try:
        h = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= h <= 1.0:
        raise argparse.ArgumentTypeError(f"H must lie in [0, 1], got {h}")
    return h


def _int_at_least(lo: int) -> Callable[[str], int]:
    def convert(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v
    return convert


def _int_list(text: str) -> list[int]:
    try:
        return [int(round(v)) for v in parse_grid(text)]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# ---------------------------------------------------------------- commands

_ROW_METHODS = {"solve": solve_system, "recurrence": last_row, "cramer": solve_cramer}


def _wide(rows: dict[int, Sequence[float]], n_max: int) -> tuple[list[str], list[dict]]:
    columns = ["n"] + [f"k_{k}" for k in range(2, n_max + 1)]
    out = []
    for n, gammas in rows.items():
        rec = {"n": n}
        for k in range(2, n_max + 1):
            rec[f"k_{k}"] = float(gammas[k - 2]) if k <= n else None
        out.append(rec)
    return columns, out


def cmd_coeffs(args) -> tuple[OutputRecord, int]:
    row = _ROW_METHODS[args.method](args.hurst, args.n)
    params = {"hurst": args.hurst, "n": args.n, "method": args.method}
    if args.format == "pretty":
        columns, rows = _wide({args.n: row.gammas}, args.n)
        return OutputRecord("coeffs", params, columns, rows, wide=True), EXIT_OK
    rows = [{"n": args.n, "k": k, "gamma": row.gamma(k)} for k in range(2, args.n + 1)]
    return OutputRecord("coeffs", params, ["n", "k", "gamma"], rows), EXIT_OK


def cmd_table(args) -> tuple[OutputRecord, int]:
    if args.method == "recurrence":
        tri = coeff_triangle(args.hurst, args.n_max)
        rows = {m: tri.table[m, : m - 1] for m in range(2, args.n_max + 1)}
    else:
        rows = {m: solve_system(args.hurst, m).gammas for m in range(2, args.n_max + 1)}
    columns, out = _wide(rows, args.n_max)
    params = {"hurst": args.hurst, "n_max": args.n_max, "method": args.method}
    return OutputRecord("table", params, columns, out, wide=True), EXIT_OK


def cmd_verify(args) -> tuple[OutputRecord, int]:
    names = suites.SUITES if args.suite == "all" else (args.suite,)
    entries = suites.run_suites(names, args.hurst_grid, args.n_max)
    rows = [{
        "suite": e.suite, "check": e.check, "h": e.h, "status": e.status,
        "margin": float(e.margin), "counterexample": e.counterexample or None,
    } for e in entries]
    failed = [e for e in entries if e.failed]
    for e in entries:
        if e.status == "finding":
            print(f"finding: {e.check} {e.counterexample}", file=sys.stderr)
    params = {"suite": args.suite, "hurst_grid": args.hurst_grid_spec, "n_max": args.n_max}
    rec = OutputRecord("verify", params,
                       ["suite", "check", "h", "status", "margin", "counterexample"], rows,
                       decimals=8)
    return rec, EXIT_COUNTEREXAMPLE if failed else EXIT_OK


def cmd_limits(args) -> tuple[OutputRecord, int]:
    g32, g33 = closed_form.limits_n3()
    g42, g43, g44 = closed_form.limits_n4()
    rows = [{"name": name, "value": v} for name, v in (
        ("gamma_3^2", g32), ("gamma_3^3", g33),
        ("gamma_4^2", g42), ("gamma_4^3", g43), ("gamma_4^4", g44))]
    return OutputRecord("limits", {}, ["name", "value"], rows, decimals=6), EXIT_OK


def cmd_crossing(args) -> tuple[OutputRecord, int]:
    root = closed_form.gamma4_crossing()
    return OutputRecord("crossing", {}, ["name", "value"],
                        [{"name": "h_gamma43_eq_gamma44", "value": root}], decimals=6), EXIT_OK


def cmd_psi(args) -> tuple[OutputRecord, int]:
    rows = []
    for x in args.x_grid:
        value = analysis.psi(args.hurst, x) if x <= 1.0 else analysis.psi_tail(args.hurst, x)
        rows.append({"x": x, "psi": value})
    params = {"hurst": args.hurst, "x_grid": args.x_grid_spec}
    return OutputRecord("psi", params, ["x", "psi"], rows, decimals=10), EXIT_OK


def cmd_eta(args) -> tuple[OutputRecord, int]:
    rows = [{"y": y, "eta": analysis.eta(args.hurst, y)} for y in args.y_grid]
    params = {"hurst": args.hurst, "y_grid": args.y_grid_spec}
    return OutputRecord("eta", params, ["y", "eta"], rows, decimals=10), EXIT_OK


def cmd_simulate(args) -> tuple[OutputRecord, int]:
    samples = montecarlo.simulate_fgn(args.hurst, args.n, args.paths, args.seed)
    est = montecarlo.estimate_coeffs_ols(samples)
    rows = [{"n": args.n, "k": k, "gamma": est.gamma(k), "stderr": float(est.stderr[k - 2])}
            for k in range(2, args.n + 1)]
    params = {"hurst": args.hurst, "n": args.n, "paths": args.paths, "seed": args.seed,
              "generator": samples.generator}
    return OutputRecord("simulate", params, ["n", "k", "gamma", "stderr"], rows), EXIT_OK


def cmd_bench(args) -> tuple[OutputRecord, int]:
    results = bench.run_bench(args.hurst, args.n_list, args.reps)
    rows = [{"method": r.method.value, "n": r.n, "h": r.h, "reps": r.reps,
             "wall_time": r.wall_time, "checksum": r.checksum} for r in results]
    if len(set(args.n_list)) >= 2:
        for m in bench.Method:
            print(f"log-log slope {m.value}: {bench.scaling_slope(results, m):.3f}",
                  file=sys.stderr)
    params = {"hurst": args.hurst, "n_list": args.n_list, "reps": args.reps}
    return OutputRecord("bench", params,
                        ["method", "n", "h", "reps", "wall_time", "checksum"], rows,
                        decimals=6), EXIT_OK


# ---------------------------------------------------------------- parser

def _add_common(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--format", choices=("csv", "json", "pretty"), default=default_format)
    p.add_argument("--out", metavar="FILE", help="write to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fgnproj",
        description="Projection coefficients of fractional Gaussian noise.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="one row Γ_n^2..Γ_n^n")
    p.add_argument("--hurst", type=_hurst_type, required=True)
    p.add_argument("--n", type=_int_at_least(2), required=True)
    p.add_argument("--method", choices=tuple(_ROW_METHODS), default="recurrence")
    _add_common(p, "pretty")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("table", help="the triangle of rows 2..n-max")
    p.add_argument("--hurst", type=_hurst_type, required=True)
    p.add_argument("--n-max", type=_int_at_least(2), default=10)
    p.add_argument("--method", choices=("solve", "recurrence"), default="recurrence")
    _add_common(p, "pretty")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run property and conjecture checks")
    p.add_argument("--suite", choices=suites.SUITES + ("all",), default="all")
    p.add_argument("--hurst-grid", dest="hurst_grid_spec", default="0.51:0.99:0.01")
    p.add_argument("--n-max", type=_int_at_least(3), default=100)
    _add_common(p, "pretty")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("limits", help="H -> 1 limits for n = 3 and n = 4")
    _add_common(p, "pretty")
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("crossing", help="H where Γ_4^3 = Γ_4^4")
    _add_common(p, "pretty")
    p.set_defaults(func=cmd_crossing)

    p = sub.add_parser("psi", help="ψ(H, x) on a grid (x > 1 via the tail form)")
    p.add_argument("--hurst", type=_hurst_type, required=True)
    p.add_argument("--x-grid", dest="x_grid_spec", default="0:1:0.01")
    _add_common(p, "csv")
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("eta", help="η(H, y) on a grid in (0, 1/2]")
    p.add_argument("--hurst", type=_hurst_type, required=True)
    p.add_argument("--y-grid", dest="y_grid_spec", default="0.005:0.5:0.005")
    _add_common(p, "csv")
    p.set_defaults(func=cmd_eta)

    p = sub.add_parser("simulate", help="OLS estimate of one row from simulated paths")
    p.add_argument("--hurst", type=_hurst_type, required=True)
    p.add_argument("--n", type=_int_at_least(2), required=True)
    p.add_argument("--paths", type=_int_at_least(1), default=100_000)
    p.add_argument("--seed", type=_int_at_least(0), default=0)
    _add_common(p, "csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="time the three ways of getting the coefficients")
    p.add_argument("--hurst", type=_hurst_type, default=0.7)
    p.add_argument("--n-list", type=_int_list, default=[100, 500, 1000, 2000])
    p.add_argument("--reps", type=_int_at_least(3), default=5)
    _add_common(p, "csv")
    p.set_defaults(func=cmd_bench)
    return parser


def _check_args(parser: argparse.ArgumentParser, args) -> None:
    if args.command == "coeffs" and args.method == "cramer" and args.n > CRAMER_MAX_N:
        parser.error(f"--method cramer needs --n <= {CRAMER_MAX_N}")
    for name in ("hurst_grid", "x_grid", "y_grid"):
        spec = getattr(args, name + "_spec", None)
        if spec is not None:
            try:
                setattr(args, name, parse_grid(spec))
            except ValueError as exc:
                parser.error(f"--{name.replace('_', '-')}: {exc}")
    if args.command == "bench" and min(args.n_list) < 2:
        parser.error("--n-list entries must be >= 2")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_args(parser, args)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        record, code = args.func(args)
    except (FGNError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = encode(record, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
