"""Command-line entry point: ``trafficlaw <command> ...``.

Exit codes: 0 success, 1 a scaling check reported FAIL, 2 usage error,
3 data error, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .dataio import (
    DataError,
    RunManifest,
    dumps_network,
    geo_summary,
    manifest_path,
    parse_config,
    read_coordinates,
    read_series,
    samples_to_csv,
)
from .emst import steele_ratio_check
from .fitting import rank_models
from .randmodels import ExponentParams, LambdaClass
from .scaling import ACCEPTANCE_REGIMES, DEFAULT_N_GRID, Regime, scaling_report
from .synthesis import generate_network, generate_sessions
from .theory import AsymptoticOrder, Bound, classify_law
from .traffic import simulate_grid

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4


class UsageError(Exception):
    pass


def parse_n_grid(text: str) -> list[int]:
    """``256,512,1024`` or geometric ``start:stop[:factor]`` (factor defaults to 2)."""
    text = text.strip()
    if not text:
        raise UsageError("empty n-grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise UsageError(f"bad geometric n-grid {text!r}")
        start, stop = int(parts[0]), int(parts[1])
        factor = float(parts[2]) if len(parts) == 3 else 2.0
        if start < 2 or factor <= 1 or stop < start:
            raise UsageError(f"bad geometric n-grid {text!r}")
        out = []
        v = float(start)
        while round(v) <= stop:
            out.append(int(round(v)))
            v *= factor
        return out
    values = [int(v) for v in text.split(",") if v.strip()]
    if not values:
        raise UsageError("empty n-grid")
    return values


def _params(args) -> ExponentParams:
    try:
        return ExponentParams(i=float(args.i), s=float(args.s), d=float(args.d))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _lambda(text) -> LambdaClass:
    try:
        return LambdaClass.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(args, text: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _write_output(args, content: str, config: dict) -> None:
    """Write to ``--out`` with a manifest beside it, or to stdout."""
    if not args.out:
        sys.stdout.write(content)
        return
    started = RunManifest.now()
    out = Path(args.out)
    try:
        out.write_text(content)
        RunManifest(args.command, config, getattr(args, "seed", None), __version__, started,
                    RunManifest.now(), [str(out)]).write(manifest_path(out))
    except OSError as exc:
        raise DataError(f"cannot write {out}: {exc}") from exc


def _config_snapshot(args) -> dict:
    skip = {"func", "json", "config"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_gen(args) -> None:
    if args.n < 2:
        raise UsageError(f"degenerate network: n={args.n}")
    params = _params(args)
    net = generate_network(args.n, args.seed)
    sessions = generate_sessions(net, params, args.seed)
    _write_output(args, dumps_network(net, sessions), _config_snapshot(args))


def cmd_simulate(args) -> None:
    grid = parse_n_grid(args.n_grid)
    if any(n < 2 for n in grid):
        raise UsageError("every n must be >= 2")
    params = _params(args)
    lam = _lambda(args.lam)
    if args.replicates < 1:
        raise UsageError("replicates must be >= 1")
    samples = simulate_grid(grid, params, lam, args.replicates, args.seed, args.q_threshold, args.threads)
    if args.json:
        rows = [dict(zip(s.FIELDS, s.as_row())) for s in samples]
        content = json.dumps({"samples": rows}, sort_keys=True) + "\n"
    else:
        content = samples_to_csv(samples)
    _write_output(args, content, _config_snapshot(args))


def cmd_theory(args) -> None:
    params = _params(args)
    lam = _lambda(args.lam)
    cls = classify_law(lam, params)
    _emit(args, f"{cls.order}  law={cls.law.value}",
          {"order": str(cls.order), "law": cls.law.value, "n_exp": str(cls.order.n_exp),
           "log_exp": str(cls.order.log_exp)})


def _parse_order(text: str) -> AsymptoticOrder:
    try:
        parts = [p.strip() for p in text.split(",")]
        n_exp = parts[0]
        log_exp = parts[1] if len(parts) > 1 else "0"
        return AsymptoticOrder(Fraction(n_exp), Fraction(log_exp), Bound.OMEGA)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --theory {text!r}; expected 'n_exp[,log_exp]'") from exc


def cmd_scaling(args) -> int:
    grid = parse_n_grid(args.n_grid)
    if len(set(grid)) < 3:
        raise UsageError("scaling needs at least 3 distinct n values")
    try:
        regimes = [Regime.parse(r) for r in args.regime] if args.regime else list(ACCEPTANCE_REGIMES)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    theory = _parse_order(args.theory) if args.theory else None
    results = scaling_report(regimes, grid, args.replicates, args.seed, args.tolerance, theory, args.threads)
    _emit(args, "\n".join(r.line() for r in results), {"results": [r.to_dict() for r in results]})
    return 0 if all(r.passed for r in results) else 1


def _blank(x) -> str:
    return "" if x is None else f"{x:.17g}"


def cmd_fit(args) -> None:
    try:
        text = Path(args.csv).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {args.csv}: {exc}") from exc
    points = read_series(text)
    try:
        models = rank_models(points)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    lines = ["law,a,b,c,d,r2,adj_r2"]
    payload = []
    for m in models:
        coefs = list(m.coefficients) + [None] * (4 - len(m.coefficients))
        lines.append(",".join([m.law.value] + [_blank(c) for c in coefs]
                              + [_blank(m.r_squared), _blank(m.adj_r_squared)]))
        payload.append({"law": m.law.value, "basis": list(m.basis), "coefficients": list(m.coefficients),
                        "r2": m.r_squared, "adj_r2": m.adj_r_squared, "rmse": m.rmse})
    _emit(args, "\n".join(lines), {"fits": payload})


def cmd_geo(args) -> None:
    try:
        text = Path(args.csv).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {args.csv}: {exc}") from exc
    if args.grid < 1:
        raise UsageError("--grid must be >= 1")
    summary = geo_summary(read_coordinates(text), args.grid, args.threshold)
    _emit(args,
          f"points={summary.total_points} grid={args.grid}x{args.grid} "
          f"cv={summary.coefficient_of_variation:.6g} verdict={summary.verdict}",
          summary.to_dict())


def cmd_steele(args) -> None:
    values = parse_n_grid(args.n_values)
    try:
        ratios = steele_ratio_check(values, args.seed, args.replicates)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    r = [v for _, v in ratios]
    spread = max(r) / min(r) if min(r) > 0 else math.nan
    lines = [f"n={n} M_n/sqrt(n)={v:.6f}" for n, v in ratios] + [f"max/min={spread:.4f}"]
    _emit(args, "\n".join(lines), {"ratios": [list(x) for x in ratios], "max_over_min": spread})


def _add_exponents(p, with_lambda=True):
    p.add_argument("--i", type=float, default=0.0, help="node influence exponent")
    p.add_argument("--s", type=float, default=0.0, help="relationship separation exponent")
    p.add_argument("--d", type=float, default=0.0, help="data destination exponent")
    if with_lambda:
        p.add_argument("--lambda", dest="lam", default="const", help="const, sqrt or linear")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trafficlaw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--json", action="store_true", help="emit one JSON object")
        p.add_argument("--config", help="flat key = value file; flags override it")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen", help="generate a network and its sessions as JSON")
    p.add_argument("--n", type=int, required=True)
    _add_exponents(p, with_lambda=False)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("simulate", help="Monte Carlo traffic load, CSV rows per (n, replicate)")
    p.add_argument("--n-grid", required=True, help="256,512,... or start:stop[:factor]")
    _add_exponents(p)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--q-threshold", type=int, default=8)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("theory", help="tabulated traffic-load order and law")
    _add_exponents(p)
    common(p, seed=False)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("scaling", help="ratio slopes of simulated load vs theory")
    p.add_argument("--n-grid", default=",".join(str(n) for n in DEFAULT_N_GRID))
    p.add_argument("--regime", action="append", help="lambda:i:s:d (repeatable)")
    p.add_argument("--replicates", type=int, default=8)
    p.add_argument("--tolerance", type=float, default=0.15)
    p.add_argument("--theory", help="override the order as 'n_exp[,log_exp]'")
    p.add_argument("--threads", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("fit", help="fit the four law forms to an n,value CSV")
    p.add_argument("csv")
    common(p, seed=False)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("geo", help="grid-density uniformity check of x,y or lat,lon points")
    p.add_argument("csv")
    p.add_argument("--grid", type=int, default=10)
    p.add_argument("--threshold", type=float, default=0.5)
    common(p, seed=False)
    p.set_defaults(func=cmd_geo)

    p = sub.add_parser("steele", help="M_n/sqrt(n) stability of the EMST on the unit torus")
    p.add_argument("--n-values", default="1024,4096,16384")
    p.add_argument("--replicates", type=int, default=8)
    common(p)
    p.set_defaults(func=cmd_steele)
    return parser


def _apply_config(parser, argv):
    """Parse with config-file values as defaults so explicit flags win."""
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    choices = parser._subparsers._group_actions[0].choices
    command = next((a for a in argv if a in choices), None)
    if not known.config or command is None:
        return parser.parse_args(argv)
    try:
        values = parse_config(Path(known.config).read_text())
    except OSError as exc:
        raise DataError(f"cannot read {known.config}: {exc}") from exc
    sub = choices[command]
    actions = {a.option_strings[0].lstrip("-"): a for a in sub._actions if a.option_strings}
    for key, value in values.items():
        action = actions.get(key)
        if action is None or action.dest in ("config", "help"):
            raise UsageError(f"unknown config key {key!r}")
        try:
            converted = action.type(value) if action.type else value
        except ValueError as exc:
            raise UsageError(f"config key {key!r}: {exc}") from exc
        if isinstance(action, argparse._StoreTrueAction):
            converted = value.strip().lower() in ("1", "true", "yes", "on")
        sub.set_defaults(**{action.dest: converted})
        # a value from the file satisfies a required flag
        action.required = False
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        rc = args.func(args)
        return rc or 0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"trafficlaw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"trafficlaw: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AssertionError as exc:
        print(f"trafficlaw: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
