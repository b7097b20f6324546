"""Run orchestration: initial data, diagnostics sampling, CSV output,
snapshots, checkpoints and resume.

One run owns its output directory.  The CSV is the single canonical
diagnostics artifact; figures are rendered from it, never from in-memory
state, so they are reproducible after the fact.
"""

from __future__ import annotations

import dataclasses
import math
import os

import numpy as np

from .config import RunConfig, serialize_config
from .conserved import conserved_triple
from .grid import make_grid
from .integrate import IntegrationError, evolve
from .model import FieldState
from .monitor import accumulate_weighted_integrals, liminf_tracker, \
    region_mass, weighted_integrands
from .snapshots import read_checkpoint, read_snapshot, write_checkpoint, \
    write_snapshot
from .virial import budget_terms_I, budget_terms_J, functional_I, functional_J
from .waves import SolitaryWaveParams, sech, solitary_initial_data


class RunError(RuntimeError):
    pass


A_COLUMNS = [f"a1_{k}" for k in range(1, 9)] + ["a2", "a3", "a4"]
B_COLUMNS = [f"b{k}" for k in range(1, 14)]
MASS_NAMES = ["mass_v2", "mass_u2", "mass_dv2", "mass_du2", "mass_u4"]


def csv_columns(cfg: RunConfig) -> list:
    cols = ["t", "i1", "i2", "i3", "j", "i", "residual_j", "residual_i"]
    cols += A_COLUMNS + B_COLUMNS
    for region in cfg.regions():
        prefix = "" if region.name == "omega" else region.name + "_"
        cols += [prefix + n for n in MASS_NAMES]
        cols += [prefix + "tailmin_v2", prefix + "tailmin_u2"]
    cols += ["pj", "pi"]
    return cols


def build_initial_state(cfg: RunConfig) -> FieldState:
    grid = make_grid(cfg.grid.n, cfg.grid.length, cfg.grid.center)
    ini = cfg.initial
    x = grid.nodes
    if ini.kind == "gaussian":
        u = ini.amp_u * np.exp(-(((x - ini.center_u) / ini.width_u) ** 2)) \
            * np.exp(1j * (ini.k0 * x + ini.phase))
        v = ini.amp_v * sech((x - ini.center_v) / ini.width_v) ** 2
        return FieldState(grid, u, v, t=0.0)
    if ini.kind == "soliton":
        if ini.kdv_only:
            kappa = math.sqrt(ini.cstar)
            v = 12.0 * ini.cstar * sech(kappa * (x - ini.x0)) ** 2
            return FieldState(grid, np.zeros(grid.n, dtype=complex), v, t=0.0)
        params = SolitaryWaveParams(c_star=ini.cstar, alpha=cfg.model.alpha,
                                    x0=ini.x0)
        return solitary_initial_data(params, grid)
    if ini.kind == "snapshot":
        state, _ = read_snapshot(ini.path)
        if state.grid != grid:
            raise RunError(
                f"snapshot grid (n={state.grid.n}, L={state.grid.length}) "
                f"does not match the configured grid"
            )
        return state
    if ini.kind == "expression":
        ns = {"x": x, "np": np, "pi": np.pi, "exp": np.exp, "sin": np.sin,
              "cos": np.cos, "tanh": np.tanh, "sech": sech, "sqrt": np.sqrt,
              "abs": np.abs, "1j": 1j}
        u = np.broadcast_to(np.asarray(eval(ini.u_expr, {"__builtins__": {}}, ns),
                                       dtype=complex), x.shape).copy()
        v = np.broadcast_to(np.asarray(eval(ini.v_expr, {"__builtins__": {}}, ns),
                                       dtype=float), x.shape).copy()
        return FieldState(grid, u, v, t=0.0)
    raise RunError(f"unknown initial kind {ini.kind!r}")


def _nan_record(cfg: RunConfig) -> dict:
    rec = {}
    for col in csv_columns(cfg):
        if col != "t":
            rec[col] = float("nan")
    return rec


def sample_diagnostics(state: FieldState, cfg: RunConfig) -> dict:
    """One CSV row worth of instantaneous diagnostics (residuals, running
    integrals and tail minima are filled in afterwards)."""
    params = cfg.model_params()
    rec = _nan_record(cfg)
    triple = conserved_triple(state, params)
    rec["i1"], rec["i2"], rec["i3"] = triple.i1, triple.i2, triple.i3
    if state.t >= max(cfg.monitor.t_start, 1.0 + 1e-9):
        vconf = cfg.virial_config()
        rec["j"] = functional_J(state, vconf)
        rec["i"] = functional_I(state, vconf)
        terms = budget_terms_J(state, vconf)
        gamma = params.gamma
        a_vals = [gamma * terms["a1_1_over_gamma"],
                  gamma * terms["a1_2_over_gamma"]] + \
                 [terms[f"a1_{k}"] for k in range(3, 9)] + \
                 [terms["a2"], terms["a3"], terms["a4"]]
        rec.update(dict(zip(A_COLUMNS, a_vals)))
        rec.update(dict(zip(B_COLUMNS, budget_terms_I(state, params, vconf))))
        rec["_gj"], rec["_gi"] = weighted_integrands(state, vconf)
        for region in cfg.regions():
            prefix = "" if region.name == "omega" else region.name + "_"
            rec.update(region_mass(state, region).as_dict(prefix))
    return rec


def finalize_records(records: list, cfg: RunConfig) -> list:
    """Fill residuals (centered differences), partial integrals and tail
    minima into a copy of the sampled records."""
    out = [dict(r) for r in records]
    ts = [r["t"] for r in out]

    def valid(r):
        return not math.isnan(r.get("j", float("nan")))

    for k in range(len(out)):
        if 0 < k < len(out) - 1 and valid(out[k - 1]) and valid(out[k + 1]):
            h1 = ts[k] - ts[k - 1]
            h2 = ts[k + 1] - ts[k]
            if abs(h1 - h2) <= 1e-9 * max(h1, h2):
                dj = (out[k + 1]["j"] - out[k - 1]["j"]) / (h1 + h2)
                di = (out[k + 1]["i"] - out[k - 1]["i"]) / (h1 + h2)
                a_sum = sum(out[k][c] for c in A_COLUMNS)
                b_sum = sum(out[k][c] for c in B_COLUMNS)
                out[k]["residual_j"] = dj - a_sum
                out[k]["residual_i"] = di - b_sum

    idx = [k for k, r in enumerate(out) if valid(r)]
    if idx:
        tt = [ts[k] for k in idx]
        pj, pi = accumulate_weighted_integrals(
            tt, [out[k]["_gj"] for k in idx], [out[k]["_gi"] for k in idx])
        for j, k in enumerate(idx):
            out[k]["pj"] = float(pj[j])
            out[k]["pi"] = float(pi[j])
        for region in cfg.regions():
            prefix = "" if region.name == "omega" else region.name + "_"
            for comp in ("v2", "u2"):
                series = [out[k][prefix + "mass_" + comp] for k in idx]
                tail = liminf_tracker(tt, series)
                for j, k in enumerate(idx):
                    out[k][prefix + "tailmin_" + comp] = float(tail[j])
    for r in out:
        r.pop("_gj", None)
        r.pop("_gi", None)
    return out


def format_float(x) -> str:
    return repr(float(x))


def write_csv(path, records: list, cfg: RunConfig):
    cols = csv_columns(cfg)
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for rec in records:
            fh.write(",".join(format_float(rec.get(c, float("nan")))
                              for c in cols) + "\n")


def read_csv(path):
    """Read a diagnostics CSV into {column: float array}."""
    with open(path) as fh:
        header = fh.readline().strip()
        if not header:
            raise RunError(f"{path}: empty CSV")
        cols = header.split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if any(len(r) != len(cols) for r in rows):
        raise RunError(f"{path}: malformed CSV row")
    data = {c: np.array([float(r[i]) for r in rows])
            for i, c in enumerate(cols)}
    return data


def run(cfg: RunConfig, out_dir: str, resume: bool = False) -> str:
    """Execute a configured run; returns the CSV path.

    With resume=True the latest checkpoint in out_dir is loaded and the run
    continues to t_final, reproducing the uninterrupted CSV exactly.
    """
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "timeseries.csv")
    ckpt_path = os.path.join(out_dir, "checkpoint.skdvc")
    with open(os.path.join(out_dir, "config.cfg"), "w") as fh:
        fh.write(serialize_config(cfg))

    params = cfg.model_params()
    options = cfg.integrator_options()

    records: list = []
    if resume:
        if not os.path.exists(ckpt_path):
            raise RunError(f"no checkpoint to resume from in {out_dir}")
        state, _, extra = read_checkpoint(ckpt_path)
        records = extra["records"]
        t_origin = extra.get("t_origin", state.t)
        skip_first_sample = True
    else:
        state = build_initial_state(cfg)
        t_origin = state.t
        skip_first_sample = False

    ckpt_cadence = cfg.output.checkpoint_cadence
    next_ckpt = [state.t + ckpt_cadence if ckpt_cadence > 0 else float("inf")]
    seen_first = [not skip_first_sample]

    def sample_fn(s: FieldState) -> dict:
        rec = sample_diagnostics(s, cfg)
        return rec

    def sink(rec: dict):
        if not seen_first[0]:
            # the resumed run re-samples the checkpointed state
            seen_first[0] = True
            return
        records.append(rec)
        if rec["t"] >= next_ckpt[0] - 1e-12:
            write_checkpoint(ckpt_path, current_state[0], params,
                             {"options": dataclasses.asdict(options),
                              "t_origin": t_origin,
                              "records": records})
            next_ckpt[0] += ckpt_cadence

    # evolve's sample_fn sees the state before the sink sees the record;
    # stash it so the sink can checkpoint the matching fields.
    current_state = [state]

    def sampling(s: FieldState) -> dict:
        current_state[0] = s
        return sample_fn(s)

    # a resumed run has already written snapshots that precede the
    # checkpoint; times past t_final belong to a later continuation
    snapshot_times = [ts for ts in cfg.output.snapshot_times
                      if (ts > state.t + 1e-12
                          or (not resume and ts >= state.t))
                      and ts <= cfg.integrator.t_final + 1e-12]
    try:
        traj = evolve(state, params, options, cfg.integrator.t_final,
                      sample_dt=cfg.monitor.sample_dt, sample_fn=sampling,
                      snapshot_times=snapshot_times, sink=sink,
                      t_origin=t_origin)
    except IntegrationError:
        write_csv(csv_path, finalize_records(records, cfg), cfg)
        raise
    for snap in traj.snapshots:
        write_snapshot(os.path.join(out_dir, f"snapshot_t{snap.t:g}.snap"),
                       snap, params)
    write_checkpoint(ckpt_path, current_state[0], params,
                     {"options": dataclasses.asdict(options),
                      "t_origin": t_origin, "records": records})
    write_csv(csv_path, finalize_records(records, cfg), cfg)
    return csv_path
