"""Command line interface.

Subcommands:
  run      execute a configured simulation into an output directory
  soliton  write solitary-wave initial data as a snapshot file
  budget   recompute dJ/dt and dI/dt budgets from snapshot triples
  figures  render figures from a diagnostics CSV
  sweep    run several configs concurrently, one directory each
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .config import ConfigError, parse_config
from .grid import make_grid
from .integrate import IntegrationError
from .model import ModelParams
from .runner import RunError, build_initial_state, run
from .snapshots import read_snapshot, write_snapshot
from .virial import VirialConfig, budget_I, budget_J
from .waves import SolitaryWaveParams, solitary_initial_data


def _load_config(path):
    with open(path) as fh:
        return parse_config(fh.read())


def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    if args.out:
        cfg.output.directory = args.out
    csv_path = run(cfg, cfg.output.directory, resume=args.resume)
    if cfg.output.figures:
        from .figures import emit_figures

        emit_figures(csv_path, cfg.output.figures, cfg.output.directory)
    print(f"run complete: {csv_path}")
    return 0


def cmd_soliton(args) -> int:
    grid = make_grid(args.n, args.length, args.center)
    params = SolitaryWaveParams(c_star=args.cstar, alpha=args.alpha, x0=args.x0)
    state = solitary_initial_data(params, grid)
    model = ModelParams(alpha=args.alpha, beta=-1.0, gamma=args.alpha / 2.0)
    write_snapshot(args.out, state, model)
    print(f"wrote solitary-wave snapshot (speed c={params.c!r}) to {args.out}")
    return 0


def cmd_budget(args) -> int:
    states = []
    model = None
    for path in args.snapshots:
        state, params = read_snapshot(path)
        states.append(state)
        model = params
    states.sort(key=lambda s: s.t)
    if len(states) < 3:
        raise RunError("budget needs at least 3 snapshots")
    vconf = VirialConfig.for_model(
        model, p1=args.p1, p2=args.p2, q1=args.q1,
        a=args.a, b=args.b, l=args.l, theta=args.theta,
    )
    print("t,dJdt_fd,sumA,residual_j,dIdt_fd,sumB,residual_i")
    for k in range(1, len(states) - 1):
        window = states[k - 1:k + 2]
        bj = budget_J(window, vconf, model.gamma)
        bi = budget_I(window, model, vconf)
        print(f"{bj.t!r},{bj.djdt_fd!r},{bj.total!r},{bj.residual!r},"
              f"{bi.didt_fd!r},{bi.total!r},{bi.residual!r}")
    return 0


def cmd_figures(args) -> int:
    from .figures import emit_figures

    toggles = [t.strip() for t in args.toggles.split(",") if t.strip()]
    written = emit_figures(args.csv, toggles, args.out)
    for path in written:
        print(path)
    return 0


def _sweep_one(item):
    path, out_dir = item
    cfg = _load_config(path)
    return run(cfg, out_dir)


def cmd_sweep(args) -> int:
    jobs = []
    for path in args.configs:
        name = os.path.splitext(os.path.basename(path))[0]
        jobs.append((path, os.path.join(args.out, name)))
    max_workers = int(os.environ.get("SKDV_THREADS", "0")) or None
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        for csv_path in pool.map(_sweep_one, jobs):
            print(csv_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skdv",
        description="pseudospectral simulator and decay diagnostics for the "
                    "coupled short-wave/long-wave system",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a configured run")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="")
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("soliton", help="write solitary-wave initial data")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--cstar", type=float, required=True)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--length", type=float, default=400.0)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_soliton)

    p = sub.add_parser("budget", help="recompute budgets from snapshots")
    p.add_argument("snapshots", nargs="+")
    p.add_argument("--p1", type=float, default=0.5)
    p.add_argument("--p2", type=float, default=2.0)
    p.add_argument("--q1", type=float, default=1.0)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--b", type=float, default=2.0)
    p.add_argument("--l", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=1.0)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("figures", help="render figures from a CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--toggles", default="conserved,masses")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("sweep", help="run several configs concurrently")
    p.add_argument("--configs", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, RunError, IntegrationError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
