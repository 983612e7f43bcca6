"""besovlab: dyadic spectral analysis and damped compressible Euler runs on the torus.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure
(blow-up or loss of positivity), 4 a checked invariant failed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .config import load_config_file, resolve, to_sim_config
from .errors import ConfigError
from .euler.simulate import COMPLETED, initial_state, simulate
from .io import dumps_json, read_series_csv, write_json, write_series_csv
from .lp.grid import make_grid, read_field
from .lp.partition import BesovSpec, besov_norm, build_partition, partition_report

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ASSERTION = 4

OVERRIDE_FLAGS = {
    "dim": int, "points": int, "amplitude": float, "gamma": float, "A": float, "a": float,
    "nbar": float, "tend": float, "cfl": float, "eps": float, "eps_prime": float, "seed": int,
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--preset", help="named preset")
    for name, typ in OVERRIDE_FLAGS.items():
        flag = "--" + name.replace("_", "-")
        p.add_argument(flag, dest=name, type=typ, default=None)


def _config_from_args(args) -> dict:
    doc = load_config_file(args.config) if args.config else None
    overrides = {k: getattr(args, k) for k in OVERRIDE_FLAGS}
    overrides["preset"] = args.preset
    return resolve(doc, overrides)


def _emit(report, out: str | None) -> None:
    if out:
        write_json(out, report)
    else:
        sys.stdout.write(dumps_json(report))


def _parse_window(text: str | None):
    if text is None:
        return None
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"window must be 'lo,hi', got {text!r}") from None
    if not lo < hi:
        raise ConfigError(f"window needs lo < hi, got {text!r}")
    return lo, hi


def _parse_r(text: str) -> float:
    if text.lower() in ("inf", "infinity", "oo"):
        return math.inf
    return float(text)


# -- subcommands -------------------------------------------------------------

def cmd_partition_check(args) -> int:
    if args.config or args.preset:
        cfg = _config_from_args(args)
        dim, points = cfg["dim"], cfg["points"]
    else:
        dim = args.dim if args.dim is not None else 3
        points = args.points if args.points is not None else 64
    try:
        grid = make_grid(dim, points)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not args.tol > 0:
        raise ConfigError(f"tolerance must be positive, got {args.tol}")
    try:
        part = build_partition(grid, tol=args.tol)
        report = partition_report(part)
        ok = True
    except ValueError as exc:
        report = {"error": str(exc)}
        ok = False
    report.update(dim=dim, points=points, tol=args.tol, passed=ok)
    _emit(report, args.out)
    return EXIT_OK if ok else EXIT_ASSERTION


def cmd_besov(args) -> int:
    try:
        f = read_field(args.field)
    except FileNotFoundError:
        raise ConfigError(f"field file not found: {args.field}") from None
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"{args.field}: unreadable field ({exc})") from None
    try:
        spec = BesovSpec(args.s, args.p, _parse_r(args.r))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    value = besov_norm(build_partition(f.grid), f, spec)
    print(repr(value))
    return EXIT_OK


def _run_simulation(cfg: dict, out_dir: Path) -> dict:
    """Run one configuration and write its series and manifest; returns the manifest."""
    sim_cfg = to_sim_config(cfg)
    try:
        state = initial_state(sim_cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    start = time.perf_counter()
    traj = simulate(sim_cfg, state)
    elapsed = time.perf_counter() - start
    out_dir.mkdir(parents=True, exist_ok=True)
    series = write_series_csv(out_dir / "series.csv", traj.records)
    manifest = {
        "version": __version__,
        "config": cfg,
        "seed": cfg["seed"],
        "grid": {"dim": sim_cfg.grid.dim, "points": sim_cfg.grid.n,
                 "period": sim_cfg.grid.period},
        "params": {"A": cfg["A"], "gamma": cfg["gamma"], "a": cfg["a"], "nbar": cfg["nbar"],
                   "branch": sim_cfg.params.branch},
        "dt": traj.dt,
        "steps": traj.steps,
        "status": traj.status,
        "message": traj.message,
        "outputs": {"series": series.name, "manifest": "manifest.json"},
        "wall_clock_seconds": elapsed,
    }
    write_json(out_dir / "manifest.json", manifest)
    return manifest


def cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    manifest = _run_simulation(cfg, Path(args.out))
    print(f"{manifest['status']}: {manifest['steps']} steps, dt={manifest['dt']:.6g}")
    return EXIT_OK if manifest["status"] == COMPLETED else EXIT_NUMERICAL


def cmd_decay_fit(args) -> int:
    from .estimates.decay import fit_decay_rate

    window = _parse_window(args.window)
    try:
        cols = read_series_csv(args.series)
    except FileNotFoundError:
        raise ConfigError(f"series file not found: {args.series}") from None
    if args.column not in cols:
        raise ConfigError(f"column {args.column!r} not in {sorted(cols)}")
    values = cols[args.column]
    if any(v is None for v in values):
        raise ConfigError(f"column {args.column!r} has empty cells")
    try:
        rate, r2 = fit_decay_rate(cols["t"], values, window)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_NUMERICAL) from None
    report = {"column": args.column, "window": window, "rate": rate, "r_squared": r2}
    if args.expect is not None:
        report["expected"] = args.expect
        report["rel_tol"] = args.rel_tol
        report["passed"] = abs(rate - args.expect) <= args.rel_tol * abs(args.expect)
    _emit(report, args.out)
    return EXIT_ASSERTION if report.get("passed") is False else EXIT_OK


def cmd_commutator_scan(args) -> int:
    from .estimates.commutators import VARIANTS, scan_all, scan_fields

    cfg = _config_from_args(args)
    sim_cfg = to_sim_config(cfg)
    names = args.variant or list(VARIANTS)
    unknown = [n for n in names if n not in VARIANTS]
    if unknown:
        raise ConfigError(f"unknown variants {unknown}; known: {sorted(VARIANTS)}")
    try:
        state = initial_state(sim_cfg)
        reports = scan_all(build_partition(sim_cfg.grid), scan_fields(state, sim_cfg.params),
                           sim_cfg.sigma_value, sim_cfg.eps, names)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _emit({"config": cfg, "reports": {k: v.as_dict() for k, v in reports.items()}}, args.out)
    return EXIT_OK


def _sweep_runs(doc: dict) -> list[dict]:
    if not isinstance(doc, dict) or set(doc) - {"base", "vary"}:
        raise ConfigError("sweep file must be an object with keys 'base' and 'vary'")
    base = doc.get("base", {})
    vary = doc.get("vary", {})
    if not isinstance(vary, dict) or not all(isinstance(v, list) and v for v in vary.values()):
        raise ConfigError("'vary' must map config keys to non-empty lists")
    keys = sorted(vary)
    runs = []
    for combo in itertools.product(*(vary[k] for k in keys)):
        runs.append(resolve(base, dict(zip(keys, combo))))
    return runs


def _sweep_worker(job):
    cfg, out_dir = job
    try:
        return _run_simulation(cfg, Path(out_dir))["status"]
    except ConfigError as exc:
        return f"config_error: {exc}"


def cmd_sweep(args) -> int:
    out = Path(args.out)
    if out.exists():
        raise ConfigError(f"output directory {out} already exists; refusing to overwrite")
    try:
        doc = json.loads(Path(args.sweep).read_text())
    except FileNotFoundError:
        raise ConfigError(f"sweep file not found: {args.sweep}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.sweep}: not valid JSON ({exc})") from None
    runs = _sweep_runs(doc)
    for cfg in runs:
        to_sim_config(cfg)
    jobs = [(cfg, str(out / f"run_{i:03d}")) for i, cfg in enumerate(runs)]
    workers = max(1, min(len(jobs), int(os.environ.get("BESOVLAB_THREADS", os.cpu_count() or 1))))
    out.mkdir(parents=True)
    if workers == 1:
        statuses = [_sweep_worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            statuses = list(pool.map(_sweep_worker, jobs))
    index = [{"run": Path(d).name, "status": s} for (_, d), s in zip(jobs, statuses)]
    write_json(out / "sweep.json", {"version": __version__, "runs": index})
    print(f"{len(jobs)} runs: " + ", ".join(sorted({s for s in statuses})))
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="besovlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition-check", help="verify the dyadic partition on a grid")
    _add_config_flags(p)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--out")
    p.set_defaults(func=cmd_partition_check)

    p = sub.add_parser("besov", help="Besov norm of a dumped field")
    p.add_argument("field")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--r", default="2", help="summability index; 'inf' for the sup form")
    p.set_defaults(func=cmd_besov)

    p = sub.add_parser("simulate", help="run a simulation and write series.csv + manifest.json")
    _add_config_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decay-fit", help="fit an exponential decay rate to a series column")
    p.add_argument("series")
    p.add_argument("--column", default="vorticity_norm")
    p.add_argument("--window", help="lo,hi time window")
    p.add_argument("--expect", type=float, help="expected rate; enables pass/fail")
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_decay_fit)

    p = sub.add_parser("commutator-scan", help="commutator summability on the initial state")
    _add_config_flags(p)
    p.add_argument("--variant", action="append", help="variant id (repeatable; default all)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_commutator_scan)

    p = sub.add_parser("sweep", help="cartesian parameter sweep of simulations")
    p.add_argument("sweep", help="JSON file with 'base' config and 'vary' lists")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
