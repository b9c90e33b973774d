"""Command-line entry point.

Subcommands: ``simulate``, ``verify``, ``sweep``, ``ml-eval``, ``fode``,
``report``. Exit status contract (stable for shell scripting):

    0  completed / all checks passed
    1  verification failure or internal error
    2  configuration error
    3  run terminated by blow-up
    4  run terminated by seam violation

The environment variable FRACFIELD_OUT overrides the configured output
directory.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import ConfigError, from_mapping, load_config, parse_config_text
from .diagnostics import RegimeViolation, lyapunov_dissipation_check
from .fode import LinearFODE, solve_exact, solve_l1
from .fractional import TimeGrid
from .mlf import ml_decay_envelope, ml_eval
from .outputs import write_run_artifacts
from .report import build_report, render_figures
from .solver import run, run_spectral
from .verification import SUITES, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_BLOW_UP = 3
EXIT_SEAM = 4

_TERMINATION_EXIT = {"completed": EXIT_OK, "blow_up": EXIT_BLOW_UP, "seam_violation": EXIT_SEAM}


def _outdir(cfg_outdir: str, override: str | None) -> str:
    if override:
        return override
    return os.environ.get("FRACFIELD_OUT", cfg_outdir)


def _execute(cfg):
    dom = cfg.domain()
    J = cfg.kernel(dom)
    u0 = cfg.initial_field(dom)
    opts = cfg.run_options()
    if cfg.lyapunov:
        opts["keep_history"] = True
    stepper = run_spectral if cfg.integrator == "spectral" else run
    if cfg.integrator == "spectral" and cfg.params.variant != "standard":
        raise ConfigError("run.integrator: spectral supports the standard variant only")
    record = stepper(u0, cfg.params, J, cfg.t_final, cfg.dt, **opts)
    extra = {}
    if cfg.lyapunov:
        try:
            rep = lyapunov_dissipation_check(record)
            extra["lyapunov_margin"] = rep["max_margin"]
            extra["lyapunov_margin_tol"] = rep["tol"]
        except (RegimeViolation, ValueError) as exc:
            extra["lyapunov_margin"] = None
            extra["lyapunov_note"] = str(exc)
    return record, extra


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
        outdir = _outdir(cfg.output_dir, args.out)
        record, extra = _execute(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    paths = write_run_artifacts(outdir, record, extra)
    print(json.dumps({"outdir": outdir, "termination": record.termination.kind,
                      "t_end": record.termination.t, "sup_norm_max": float(np.max(record.sup_norm))}))
    return _TERMINATION_EXIT.get(record.termination.kind, EXIT_FAIL)


def cmd_verify(args) -> int:
    try:
        verdict = run_suite(args.suite)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    text = json.dumps(verdict, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK if verdict["passed"] else EXIT_FAIL


def _parse_ranges(specs: list[str]) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for spec in specs:
        if "=" not in spec:
            raise ConfigError(f"--param needs key=v1,v2,..., got {spec!r}")
        key, _, vals = spec.partition("=")
        values = [v.strip() for v in vals.split(",") if v.strip() != ""]
        if not values:
            raise ConfigError(f"--param {key}: empty value range")
        out[key.strip()] = values
    if not out:
        raise ConfigError("sweep needs at least one --param range")
    return out


def cmd_sweep(args) -> int:
    try:
        with open(args.config) as fh:
            base_raw = parse_config_text(fh.read())
        ranges = _parse_ranges(args.param)
        keys = sorted(ranges)
        grid = list(itertools.product(*(ranges[k] for k in keys)))
        if len(grid) > args.max_points:
            raise ConfigError(f"sweep grid has {len(grid)} points, cap is {args.max_points}")
        configs = []
        for combo in grid:
            raw = dict(base_raw)
            raw.update(dict(zip(keys, combo)))
            configs.append((combo, from_mapping(raw)))
        outdir = _outdir(configs[0][1].output_dir, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    os.makedirs(outdir, exist_ok=True)

    def one(item):
        combo, cfg = item
        record, extra = _execute(cfg)
        p = cfg.params
        sup_max = float(np.max(record.sup_norm))
        from .report import _decay_fit_from_series

        fit = _decay_fit_from_series(p, record.t, record.sup_norm)
        return {
            "point": dict(zip(keys, combo)),
            "mu": p.mu,
            "k": p.k,
            "gamma": p.gamma,
            "alpha": p.alpha,
            "outcome": record.termination.kind,
            "sup_max": sup_max,
            "decay_violation": fit.get("violation"),
        }

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(one, configs))
    else:
        rows = [one(c) for c in configs]

    rows.sort(key=lambda r: tuple(r["point"][k] for k in keys))
    with open(os.path.join(outdir, "sweep.jsonl"), "w") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    with open(os.path.join(outdir, "sweep.csv"), "w") as fh:
        fh.write("mu,k,gamma,alpha,outcome,sup_max,decay_violation\n")
        for row in rows:
            dv = "" if row["decay_violation"] is None else repr(row["decay_violation"])
            fh.write(f"{row['mu']!r},{row['k']!r},{row['gamma']!r},{row['alpha']!r},"
                     f"{row['outcome']},{row['sup_max']!r},{dv}\n")
    print(json.dumps({"outdir": outdir, "points": len(rows)}))
    return EXIT_OK


def cmd_ml_eval(args) -> int:
    try:
        val = ml_eval(args.alpha, args.beta, args.z)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(repr(val))
    return EXIT_OK


def cmd_fode(args) -> int:
    try:
        n = int(round(args.t_final / args.dt))
        if n < 1 or args.dt <= 0:
            raise ValueError("need t_final >= dt > 0")
        grid = TimeGrid(dt=args.dt, n_steps=n)
        p = LinearFODE(alpha=args.alpha, A=args.coef, eta=args.eta, f=args.forcing)
        we = solve_exact(p, grid)
        wl = solve_l1(p, grid)
        if args.coef < 0:
            env = args.eta * ml_decay_envelope(args.alpha, -args.coef, grid.times)
        else:
            env = np.array([args.eta * ml_eval(args.alpha, 1.0, args.coef * t**args.alpha)
                            for t in grid.times])
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    dest = open(args.out, "w") if args.out else sys.stdout
    try:
        dest.write("t,w_exact,w_l1,envelope\n")
        for i, t in enumerate(grid.times):
            dest.write(f"{float(t)!r},{float(we[i])!r},{float(wl[i])!r},{float(env[i])!r}\n")
    finally:
        if args.out:
            dest.close()
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        rep = build_report(args.run)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot build report from {args.run!r}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    path = os.path.join(args.run, "report.json")
    with open(path, "w") as fh:
        json.dump(rep, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if args.figures:
        figs = render_figures(args.run, rep)
        rep["figures"] = figs
    print(json.dumps(rep, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fracfield",
        description="Nonlocal time-fractional reaction-diffusion simulator and verification harness",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run one experiment from a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="output directory (overrides config and FRACFIELD_OUT)")
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("verify", help="run a named verification suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--out", help="also write the JSON verdict to this file")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("sweep", help="run a parameter grid of experiments")
    s.add_argument("--config", required=True)
    s.add_argument("--param", action="append", default=[],
                   help="key=v1,v2,... (repeatable); product grid over all ranges")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--max-points", type=int, default=10000)
    s.add_argument("--out", help="output directory")
    s.set_defaults(fn=cmd_sweep)

    s = sub.add_parser("ml-eval", help="evaluate E_{alpha,beta}(z)")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--z", type=float, required=True)
    s.set_defaults(fn=cmd_ml_eval)

    s = sub.add_parser("fode", help="solve D^a w = A w + f, CSV to stdout or file")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--A", dest="coef", type=float, required=True)
    s.add_argument("--eta", type=float, required=True)
    s.add_argument("--f", dest="forcing", type=float, default=0.0)
    s.add_argument("--t-final", type=float, required=True)
    s.add_argument("--dt", type=float, required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_fode)

    s = sub.add_parser("report", help="summarize a finished run directory")
    s.add_argument("--run", required=True)
    s.add_argument("--figures", action="store_true", help="render PNG figures next to the CSV output")
    s.set_defaults(fn=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
