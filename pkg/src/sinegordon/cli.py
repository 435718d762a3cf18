"""Command-line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 solver failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .energy import conservation_expected, discrete_energy, energy_drift
from .harness import (DEFAULT_CHECKPOINTS, ConvergenceRow, checkpoint_steps,
                      convergence_study, error_norms)
from .scenarios import SCENARIOS, get_scenario
from .stepper import SolverError, run
from .writers import write_energy_csv, write_error_csv, write_vtk_snapshot

log = logging.getLogger("sinegordon")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sinegordon", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="single simulation from a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("--out", default=None, help="output directory (overrides the config)")

    c = sub.add_parser("converge", help="refinement study against an exact solution")
    c.add_argument("--scenario", required=True, choices=sorted(SCENARIOS))
    c.add_argument("--base-dt", type=float, required=True)
    c.add_argument("--base-h", type=float, required=True)
    c.add_argument("--levels", type=int, required=True)
    c.add_argument("--checkpoints", type=_floats, default=list(DEFAULT_CHECKPOINTS))
    c.add_argument("--out", default=".")

    e = sub.add_parser("energy", help="energy test on the unit square")
    e.add_argument("--dt", type=float, default=0.001)
    e.add_argument("--h", type=float, default=0.025)
    e.add_argument("--t-end", type=float, default=1.0)
    e.add_argument("--out", default=".")

    s = sub.add_parser("soliton", help="circular ring soliton with sin(u/2) snapshots")
    s.add_argument("--dt", type=float, default=0.1)
    s.add_argument("--h", type=float, default=0.1)
    s.add_argument("--t-end", type=float, default=50.0)
    s.add_argument("--snap-every", type=int, default=20)
    s.add_argument("--out", default=".")
    return p


def simulate(cfg: RunConfig) -> dict:
    """Run one simulation described by ``cfg``, writing CSV/VTK into ``cfg.output_dir``."""
    sc = get_scenario(cfg.scenario)
    d = sc.defaults
    if cfg.m is not None:
        grid = sc.grid(cfg.m)
    else:
        grid = sc.grid_for_h(cfg.h if cfg.h is not None else d["h"])
    dt = cfg.dt if cfg.dt is not None else d["dt"]
    t_end = cfg.t_end if cfg.t_end is not None else d["t_end"]
    params = sc.params(grid, dt, alpha=cfg.alpha, beta=cfg.beta, iter_tol=cfg.iter_tol,
                       cg_tol=cfg.cg_tol, max_outer=cfg.max_outer, guard_mode=cfg.guard_mode)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    state = sc.initial_state(grid)
    energies = [discrete_energy(state, params, grid)]
    errors = {}
    wanted = {}
    if sc.has_exact:
        cps = cfg.checkpoints if cfg.checkpoints is not None else \
            [t for t in DEFAULT_CHECKPOINTS if t <= t_end + 1e-12]
        wanted = checkpoint_steps(cps, dt)
    snaps = []

    def snapshot(s):
        vals = sc.display(s.u.values) if sc.display else s.u.values
        path = out / f"{sc.name}_{s.n:06d}.vtk"
        write_vtk_snapshot(path, vals, grid, s.t, name="sin_half_u" if sc.display else "u")
        snaps.append(path)

    def observe(s, stats=None):
        if stats is not None:
            energies.append(discrete_energy(s, params, grid))
        if s.n in wanted:
            errors[wanted[s.n]] = error_norms(s, sc, grid)
        if cfg.snapshot_every and s.n % cfg.snapshot_every == 0:
            snapshot(s)

    observe(state)
    final = run(state, params, grid, sc.boundary, t_end=t_end, observers=[observe])
    write_energy_csv(out / f"{sc.name}_energy.csv", energies)
    if errors:
        write_error_csv(out / f"{sc.name}_errors.csv",
                        [ConvergenceRow(0, dt, grid.h, errors)])
    abs_drift, rel_drift = energy_drift(energies)
    log.info("%s: %d steps, t = %.6g, energy %.12g, relative drift %.3e%s",
             sc.name, final.n, final.t, energies[-1].total, rel_drift,
             " (conserved case)" if conservation_expected(params, grid) else "")
    return {"state": final, "energies": energies, "errors": errors, "snapshots": snaps}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"sinegordon: error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "run":
            cfg = load_config(args.config)
            if args.out is not None:
                cfg.output_dir = args.out
            res = simulate(cfg)
            print(f"finished {res['state'].n} steps at t = {res['state'].t:.6g}")
        elif args.command == "converge":
            sc = get_scenario(args.scenario)
            rows = convergence_study(sc, args.base_dt, args.base_h, args.levels,
                                     args.checkpoints)
            Path(args.out).mkdir(parents=True, exist_ok=True)
            path = Path(args.out) / f"{sc.name}_convergence.csv"
            write_error_csv(path, rows)
            _print_study(rows)
            print(f"wrote {path}")
        elif args.command == "energy":
            res = simulate(RunConfig("energy", dt=args.dt, h=args.h, t_end=args.t_end,
                                     output_dir=args.out))
            _, rel = energy_drift(res["energies"])
            print(f"E0 = {res['energies'][0].total:.12g}, relative drift {rel:.3e}")
        elif args.command == "soliton":
            res = simulate(RunConfig("soliton", dt=args.dt, h=args.h, t_end=args.t_end,
                                     snapshot_every=args.snap_every, output_dir=args.out))
            print(f"wrote {len(res['snapshots'])} snapshots to {args.out}")
    except (ConfigError, KeyError) as exc:
        print(f"sinegordon: error: {exc}", file=sys.stderr)
        return 1
    except (SolverError, FloatingPointError) as exc:
        print(f"sinegordon: solver failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"sinegordon: error: {exc}", file=sys.stderr)
        return 1
    return 0


def _print_study(rows) -> None:
    for row in rows:
        print(f"dt = {row.dt:g}, h = {row.h:g}")
        for t in sorted(row.errors):
            e = row.errors[t]
            ou = row.observed_order_u.get(t)
            ov = row.observed_order_v.get(t)
            orders = "" if ou is None else f"  order_u {ou:.4f}  order_v {ov:.4f}"
            print(f"  t = {t:g}: err_u {e.err_u:.7e}  err_v {e.err_v:.7e}{orders}")


if __name__ == "__main__":
    sys.exit(main())
