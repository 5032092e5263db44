"""``starconv`` command line.

Commands::

    starconv expand SOURCE            series coefficients (csv or json)
    starconv apply {L,l,bernardi} SOURCE
    starconv check KIND [SOURCE]      KIND: starlike class univalence lemma3 bounds ode
    starconv suite NAME               NAME: inclusion bernardi-closure examples bounds all
    starconv plot-data SOURCE EXPR    EXPR: starlike-ratio class-ratio univalence-ratio

SOURCE is an example name (f1 f2 f3 f4 koebe identity), a generated series
(extremal, dominant, halfplane), ``-`` for standard input, or a coefficient
file in the series CSV (``k,re,im``) or JSON format.

Exit codes: 0 pass, 1 analytic failure, 2 usage or parameter error,
3 malformed input file, 4 numerical degeneracy.

Defaults may be read from a JSON file named by ``STARCONV_CONFIG``; flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from starconv import catalog, checks
from starconv import operators as ops
from starconv.errors import (
    BadDominantInput,
    DenominatorVanishes,
    NotNormalized,
    SeriesError,
    SpecError,
    UnknownExample,
)
from starconv.series import DEFAULT_ORDER, PowerSeries, geometric, z_derivative

CONFIG_ENV = "STARCONV_CONFIG"
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC = 0, 1, 2, 3, 4
GRID_KINDS = ("starlike", "class", "univalence", "lemma3")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@dataclass
class CliConfig:
    """Resolved settings. ``order=None`` means: 64, or grid-adequate for grid checks."""

    order: int | None = None
    radii: tuple = (0.5, 0.9, 0.99)
    angles: int = 1024
    format: str | None = None
    seed: int = checks.DEFAULT_SEED
    out: str | None = None
    legacy: bool = False

    def __post_init__(self):
        if self.order is not None and self.order < 4:
            raise CliError(f"--order must be >= 4, got {self.order}", EXIT_USAGE)
        try:
            self.grid = checks.GridSpec(tuple(self.radii), self.angles)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from exc

    def resolved_order(self, grid_based):
        if self.order is not None:
            return self.order
        return self.grid.adequate_order() if grid_based else DEFAULT_ORDER


def _file_defaults():
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_USAGE) from exc
    return {k: data[k] for k in ("order", "radii", "angles", "format", "seed") if k in data}


def make_config(args):
    values = _file_defaults()
    for key in ("order", "radii", "angles", "format", "seed", "out"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    values["legacy"] = bool(getattr(args, "legacy", False))
    return CliConfig(**values)


# -- sources ------------------------------------------------------------------


def _spec(args, config, required=True):
    if args.sigma is None:
        if required:
            raise CliError("--sigma is required", EXIT_USAGE)
        return None
    try:
        return ops.OperatorSpec(args.sigma, args.n, legacy=config.legacy)
    except SpecError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def load_series_file(text):
    try:
        if text.lstrip().startswith("{"):
            return PowerSeries.from_json(text)
        return PowerSeries.from_csv(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"malformed coefficient input: {exc}", EXIT_PARSE) from exc


def resolve_source(name, args, config, order, normalized=True):
    if name in catalog.NAMES:
        f = catalog.build_example(name, order).series
    elif name == "extremal":
        f = ops.extremal_k(_spec(args, config), order)
    elif name == "dominant":
        f = ops.dominant_q_series(_spec(args, config), order)
    elif name == "halfplane":
        f = 2 * geometric(order) - 1
    elif name == "-":
        f = load_series_file(sys.stdin.read())
    elif Path(name).is_file():
        f = load_series_file(Path(name).read_text())
    else:
        raise CliError(f"unknown source {name!r}", EXIT_USAGE)
    if normalized and not f.is_normalized():
        raise CliError(f"source {name!r} is not normalized (need c0 = 0, c1 = 1)", EXIT_PARSE)
    return f


# -- output -------------------------------------------------------------------


def _emit(text, config):
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)


def _series_text(f, config):
    if (config.format or "csv") == "json":
        return f.to_json() + "\n"
    return f.to_csv()


def _samples_csv(num, den, grid, header=("r", "theta", "re", "im")):
    values = checks.sample_ratio(num, den, grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    thetas = grid.thetas()
    for j, r in enumerate(grid.radii):
        for m, theta in enumerate(thetas):
            row = [repr(r), repr(float(theta)), repr(float(values[m, j].real))]
            if "im" in header:
                row.append(repr(float(values[m, j].imag)))
            w.writerow(row)
    return buf.getvalue()


# -- commands -----------------------------------------------------------------


def cmd_expand(args, config):
    f = resolve_source(args.source, args, config, config.resolved_order(False), normalized=False)
    _emit(_series_text(f, config), config)
    return EXIT_PASS


def cmd_apply(args, config):
    f = resolve_source(args.source, args, config, config.resolved_order(False))
    if args.op == "bernardi":
        if args.gamma is None:
            raise CliError("--gamma is required for bernardi", EXIT_USAGE)
        try:
            out = ops.bernardi(ops.BernardiSpec(args.gamma), f)
        except SpecError as exc:
            raise CliError(str(exc), EXIT_USAGE) from exc
    else:
        spec = _spec(args, config)
        out = ops.apply_L(spec, f) if args.op == "L" else ops.apply_l(spec, f)
    _emit(_series_text(out, config), config)
    return EXIT_PASS


def _ratio_parts(kind, f, args, config):
    if kind == "starlike":
        return z_derivative(f), f, 0.0
    if kind == "univalence":
        num, den = checks.univalence_ratio_parts(f)
        return num, den, 0.0
    spec = _spec(args, config)
    if spec.legacy:
        raise CliError("class checks need sigma >= n + 1", EXIT_USAGE)
    return ops.apply_L(spec.successor(), f), ops.apply_L(spec, f), spec.threshold


def _mu(args, config):
    if args.mu is not None:
        return args.mu
    spec = _spec(args, config, required=False)
    if spec is None:
        raise CliError("give --mu or --sigma/--n", EXIT_USAGE)
    return spec.mu


def cmd_check(args, config):
    kind = args.kind
    grid = config.grid
    order = config.resolved_order(kind in GRID_KINDS)
    if kind == "lemma3":
        h = resolve_source(args.source or "halfplane", args, config, order, normalized=False)
        report = checks.check_lemma3_conditions(h, args.eta, _mu(args, config), grid)
    elif kind == "ode":
        q = resolve_source(args.source or "dominant", args, config, order, normalized=False)
        h = resolve_source(args.h, args, config, order, normalized=False)
        report = checks.ode_residual(q, h, args.eta, _mu(args, config))
    else:
        if args.source is None:
            raise CliError(f"check {kind} needs a SOURCE", EXIT_USAGE)
        f = resolve_source(args.source, args, config, order)
        if kind == "bounds":
            spec = _spec(args, config)
            if spec.legacy:
                raise CliError("bounds need sigma >= n + 1", EXIT_USAGE)
            report = checks.coefficient_bound_check(f, spec)
        else:
            if config.format == "csv":
                num, den, _ = _ratio_parts(kind, f, args, config)
                _emit(_samples_csv(num, den, grid, header=("r", "theta", "re")), config)
            if kind == "starlike":
                report = checks.check_starlike(f, grid)
            elif kind == "univalence":
                report = checks.check_univalence_condition(f, grid)
            else:
                spec = _spec(args, config)
                if spec.legacy:
                    raise CliError("class checks need sigma >= n + 1", EXIT_USAGE)
                report = checks.check_class_membership(f, spec, grid)
            if config.format == "csv":
                return EXIT_PASS if report.passed else EXIT_FAIL
    _emit(report.to_json() + "\n", config)
    return EXIT_PASS if report.passed else EXIT_FAIL


def run_suites(name, config, cases=100, sigma=3.0, n=1):
    """Run the named suite(s); returns the summary dict."""
    grid = config.grid
    order = config.resolved_order(True)
    names = ["examples", "inclusion", "bernardi-closure", "bounds"] if name == "all" else [name]
    results = []
    for suite in names:
        if suite == "inclusion":
            results.append(checks.inclusion_suite(sigma, n, cases, config.seed, grid=grid, order=order))
        elif suite == "bernardi-closure":
            results.append(checks.bernardi_closure_suite(sigma, n, cases, config.seed, grid=grid, order=order))
        elif suite == "examples":
            results.append(catalog.examples_suite(grid, order))
        elif suite == "bounds":
            results.append(checks.bound_suite(sigma, n, cases, config.seed,
                                              order=config.order or DEFAULT_ORDER))
    return {
        "schema": checks.SCHEMA_VERSION,
        "seed": config.seed,
        "grid": grid.to_dict(),
        "suites": [r.to_dict() for r in results],
        "passed": all(r.passed for r in results),
    }


def cmd_suite(args, config):
    try:
        summary = run_suites(args.name, config, args.cases, args.sigma if args.sigma is not None else 3.0, args.n_suite)
    except SpecError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    _emit(json.dumps(summary, indent=2) + "\n", config)
    for s in summary["suites"]:
        print(f"{s['suite']}: {s['passes']}/{s['cases']} pass, worst margin {s['worst_margin']!r}", file=sys.stderr)
    return EXIT_PASS if summary["passed"] else EXIT_FAIL


def cmd_plotdata(args, config):
    f = resolve_source(args.source, args, config, config.resolved_order(True))
    kind = {"starlike-ratio": "starlike", "class-ratio": "class", "univalence-ratio": "univalence"}[args.expr]
    num, den, _ = _ratio_parts(kind, f, args, config)
    _emit(_samples_csv(num, den, config.grid), config)
    return EXIT_PASS


# -- parser -------------------------------------------------------------------


def _radii(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad radii list {text!r}") from exc


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--order", type=int, help="truncation order N (default 64; grid checks pick an adequate N)")
    g.add_argument("--radii", type=_radii, help="comma-separated radii in (0,1) (default 0.5,0.9,0.99)")
    g.add_argument("--angles", type=int, help="angles per radius (default 1024)")
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--seed", type=int, help=f"seed for sampled suites (default {checks.DEFAULT_SEED})")
    g.add_argument("--out", help="write output to this path instead of stdout")
    g.add_argument("--legacy", action="store_true", help="allow sigma < n + 1 for operator application")

    opspec = argparse.ArgumentParser(add_help=False)
    opspec.add_argument("--sigma", type=float)
    opspec.add_argument("--n", type=int, default=0)

    parser = argparse.ArgumentParser(prog="starconv", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common, opspec], help="print series coefficients")
    p.add_argument("source")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("apply", parents=[common, opspec], help="apply L, l or the Bernardi transform")
    p.add_argument("op", choices=("L", "l", "bernardi"))
    p.add_argument("source")
    p.add_argument("--gamma", type=float)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("check", parents=[common, opspec], help="run one verification")
    p.add_argument("kind", choices=("starlike", "class", "univalence", "lemma3", "bounds", "ode"))
    p.add_argument("source", nargs="?")
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--mu", type=float)
    p.add_argument("--h", default="halfplane", help="right-hand side for the ode check")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suite", parents=[common], help="run seeded sampled suites")
    p.add_argument("name", choices=("inclusion", "bernardi-closure", "examples", "bounds", "all"))
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--sigma", type=float)
    p.add_argument("--n", dest="n_suite", type=int, default=1)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("plot-data", parents=[common, opspec], help="emit r,theta,re,im samples of a ratio")
    p.add_argument("source")
    p.add_argument("expr", choices=("starlike-ratio", "class-ratio", "univalence-ratio"))
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_config(args)
        return args.func(args, config)
    except CliError as exc:
        print(f"starconv: {exc}", file=sys.stderr)
        return exc.code
    except DenominatorVanishes as exc:
        print(f"starconv: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UnknownExample, SpecError, BadDominantInput) as exc:
        print(f"starconv: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZeroDivisionError as exc:
        print(f"starconv: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (NotNormalized, SeriesError) as exc:
        print(f"starconv: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
