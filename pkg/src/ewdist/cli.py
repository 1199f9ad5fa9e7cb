"""Command-line surface: reproduce the simulation study as CSV/JSON.

    ew <command> [flags] --seed U64 --out PATH [--format csv|json]

Commands: simulate-w, compare-cdf, gof-table, omega, elemental,
certify-bounds.  Exit codes: 0 success, 2 usage or domain error, 3 I/O
failure, 4 numeric non-convergence.  A config file of key=value lines can
pre-set any flag of the invoked command; explicit flags override it.
Outputs are byte-identical for identical (flags, seed), regardless of
EW_THREADS.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib import resources

import numpy as np

from . import approx, pipelines
from .elemental import load_design_csv
from .errors import ConfigError, DomainError, NumericError, RankError, SizeError
from .rng import validate_seed

__all__ = ["main", "build_parser"]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path, header, rows, footer=None):
    try:
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
            for row in footer or []:
                writer.writerow([_fmt(v) for v in row])
    except OSError:
        raise


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text + "\n")


def _json_cell(value):
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(value)


def _table_payload(command, parameters, columns, rows, summary):
    return {
        "command": command,
        "parameters": {k: _json_cell(v) for k, v in parameters.items()},
        "columns": list(columns),
        "rows": [[_json_cell(v) for v in row] for row in rows],
        "summary": {k: _json_cell(v) for k, v in (summary or {}).items()},
    }


def _emit_table(args, command, columns, rows, summary=None):
    parameters = {
        k: v for k, v in vars(args).items()
        if k not in ("command", "func", "out", "format", "config", "gnuplot_script")
        and v is not None
    }
    if args.format == "json":
        _write_json(args.out, _table_payload(command, parameters, columns, rows, summary))
    else:
        footer = [(k, v) + ("",) * max(0, len(columns) - 2) for k, v in (summary or {}).items()]
        _write_csv(args.out, columns, rows, footer)


def _emit_gnuplot(path, out_csv, n_rows, title, ycols):
    lines = [
        "set datafile separator ','",
        "set key left top",
        f"set title '{title}'",
        "set xrange [0:1]",
        "plot \\",
    ]
    plots = [
        f"  '{out_csv}' every ::1::{n_rows} using {x}:{y} with {style} title '{name}'"
        for x, y, style, name in ycols
    ]
    lines.append(", \\\n".join(plots))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_simulate_w(args):
    from .dist import w_sample

    sample = w_sample(args.m1, args.m2, args.nu, args.n, args.seed)
    rows = [(i, float(v)) for i, v in enumerate(sample)]
    _emit_table(args, "simulate-w", ("index", "w"), rows)
    return 0


def _cmd_compare_cdf(args):
    rows, summary = pipelines.compare_cdf_rows(
        args.m1, args.m2, args.nu, args.n, args.grid_points, args.seed
    )
    _emit_table(args, "compare-cdf", ("w", "ecdf_w", "beta_cdf", "abs_gap"), rows, summary)
    if args.gnuplot_script:
        _emit_gnuplot(
            args.gnuplot_script, args.out, len(rows),
            f"W vs proposed Beta (m1={args.m1} m2={args.m2} nu={args.nu})",
            [(1, 2, "steps", "ECDF of W"), (1, 3, "lines", "proposed Beta CDF")],
        )
    return 0


def _read_grid_file(path):
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["m1", "m2", "nu"]:
            raise DomainError(f"grid file {path}: expected header 'm1,m2,nu'")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                m1, m2, nu = (float(c) for c in row)
            except (ValueError, TypeError):
                raise DomainError(f"grid file {path}: malformed row at line {lineno}: {row!r}")
            rows.append((m1, m2, nu))
    if not rows:
        raise DomainError(f"grid file {path} contains no parameter rows")
    return rows


def _cmd_gof_table(args):
    grid = _read_grid_file(args.grid) if args.grid else pipelines.DEFAULT_GOF_GRID
    rows = pipelines.gof_table_rows(grid, args.n, args.replications, args.seed)
    columns = ("m1", "m2", "nu", "n", "rep", "ks", "ks_identical", "ad", "ad_identical")
    _emit_table(args, "gof-table", columns, rows)
    return 0


def _cmd_omega(args):
    rows, summary = pipelines.omega_rows(
        args.rho, args.n2, args.n, args.grid_points, args.seed
    )
    _emit_table(args, "omega", ("row_type", "x", "analytic", "empirical"), rows, summary)
    if args.gnuplot_script:
        n_cdf = sum(1 for r in rows if r[0] == "cdf")
        _emit_gnuplot(
            args.gnuplot_script, args.out, n_cdf,
            f"product law (rho={args.rho} n2={args.n2})",
            [(2, 3, "lines", "numeric CDF"), (2, 4, "steps", "Monte Carlo ECDF")],
        )
    return 0


def _cmd_elemental(args):
    if args.matrix and args.generate:
        raise DomainError("pass either --matrix or --generate, not both")
    if args.matrix:
        rows, summary = pipelines.elemental_matrix_rows(load_design_csv(args.matrix))
        _emit_table(args, "elemental", ("set_indices", "weight"), rows, summary)
    elif args.generate:
        for name in ("rho", "nu", "l"):
            if getattr(args, name) is None:
                raise DomainError(f"--generate requires --{name}")
        rows, summary = pipelines.elemental_simulation_report(
            args.rho, args.nu, args.l, args.n_matrices, args.seed,
            mode=args.mode, intercept=args.intercept,
        )
        _emit_table(args, "elemental", ("draw_index", "weight"), rows, summary)
    else:
        raise DomainError("elemental needs --matrix PATH or --generate")
    return 0


def _parse_grid_spec(spec: str):
    try:
        n_u, n_w = (int(p) for p in spec.lower().split("x"))
    except ValueError:
        raise DomainError(f"grid spec must look like '200x99', got {spec!r}")
    if n_u < 2 or n_w < 2:
        raise DomainError("grid spec dimensions must be at least 2")
    return n_u, n_w


def _cmd_certify_bounds(args):
    if args.format == "csv":
        raise DomainError("certify-bounds emits a JSON report; use --format json")
    n_u, n_w = _parse_grid_spec(args.grid)
    setting = approx.RatioSetting(args.m1, args.m2, args.nu1, args.nu2)
    report = approx.certify_bounds(setting, n_u=n_u, n_w=n_w)
    report["command"] = "certify-bounds"
    report["seed"] = args.seed
    _write_json(args.out, report)
    return 0


def schema_text(name: str) -> str:
    """Published JSON schema shipped with the package."""
    return resources.files("ewdist.schemas").joinpath(name).read_text()


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ew",
        description="Beta approximation of F-variate ratios and elemental weight laws",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    registry = {}

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed")
        p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--config", default=None, help="key=value file pre-setting flags")
        p.set_defaults(func=func)
        registry[name] = p
        return p

    p = add("simulate-w", _cmd_simulate_w, help="draws of W = Y1/(Y1+Y2)")
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--n", type=int, default=10000)

    p = add("compare-cdf", _cmd_compare_cdf, help="ECDF of W vs the proposed Beta CDF")
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--grid-points", type=int, default=200)
    p.add_argument("--gnuplot-script", default=None, help="also write a gnuplot script here")

    p = add("gof-table", _cmd_gof_table, help="KS/AD table over a parameter grid")
    p.add_argument("--grid", default=None, help="CSV grid file with header m1,m2,nu")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--replications", type=int, default=1)

    p = add("omega", _cmd_omega, help="product-law CDF grid and moment table")
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--grid-points", type=int, default=500)
    p.add_argument("--gnuplot-script", default=None)

    p = add("elemental", _cmd_elemental, help="elemental weights of a matrix, or simulated")
    p.add_argument("--matrix", default=None, help="headerless CSV design matrix")
    p.add_argument("--generate", action="store_true", help="simulate t-distributed matrices")
    p.add_argument("--rho", type=int, default=None)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--n-matrices", type=int, default=1000)
    p.add_argument("--mode", choices=("all", "sampled-sets"), default="sampled-sets")
    p.add_argument("--intercept", action="store_true", help="prepend a constant column")

    p = add("certify-bounds", _cmd_certify_bounds, help="measure the envelope bounds")
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--nu1", type=float, required=True)
    p.add_argument("--nu2", type=float, required=True)
    p.add_argument("--grid", default="200x99", help="log-u x uniform-w grid, e.g. 200x99")
    p.set_defaults(format="json")

    return parser, registry


def _load_config_pairs(path):
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config {path}: line {lineno} is not key=value: {raw!r}")
            key, value = line.split("=", 1)
            pairs.append((key.strip(), value.strip()))
    return pairs


def _inject_config(argv, registry):
    """Expand --config into flag tokens placed before the explicit flags."""
    path = None
    rest = []
    it = iter(range(len(argv)))
    for i in it:
        token = argv[i]
        if token == "--config":
            if i + 1 >= len(argv):
                raise ConfigError("--config requires a path")
            path = argv[i + 1]
            next(it, None)
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
        else:
            rest.append(token)
    if path is None:
        return argv
    if not rest or rest[0] not in registry:
        return rest  # let argparse report the usage error
    command = rest[0]
    subparser = registry[command]
    known = {}
    for action in subparser._actions:
        for opt in action.option_strings:
            known[opt] = action
    tokens = []
    for key, value in _load_config_pairs(path):
        opt = "--" + key.replace("_", "-").lstrip("-")
        action = known.get(opt)
        if action is None:
            continue  # keys for other commands are allowed and ignored
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(opt)
        else:
            tokens.extend([opt, value])
    return [command] + tokens + rest[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, registry = build_parser()
    try:
        argv = _inject_config(argv, registry)
        args = parser.parse_args(argv)
        validate_seed(args.seed)
        return args.func(args)
    except NumericError as exc:
        print(f"ew: numeric failure: {exc}", file=sys.stderr)
        return 4
    except (DomainError, SizeError, ConfigError, RankError) as exc:
        print(f"ew: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ew: i/o failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
