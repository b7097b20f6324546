"""Split-step time integration.

Strang composition: exact spectral half-flows for the stiff linear parts
(u: exp(-i k^2 dt/2), v: exp(i k^3 dt/2)), then one full nonlinear step
(u rotates by exp(-i W dt) with W real, so |u| is preserved pointwise;
v takes an RK4 substep of the nonstiff remainder -1/2 (v^2)_x + gamma
(|u|^2)_x, during which |u|^2 is exactly frozen), then the second linear
half-flows.  An optional raised-cosine sponge multiplies both fields by
1 - sigma(x) dt after each step to absorb outgoing radiation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .grid import Grid
from .model import FieldState, ModelParams, dealias_mask


class IntegrationError(RuntimeError):
    """Raised when the integration aborts; carries the partial trajectory."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass(frozen=True)
class IntegratorOptions:
    dt: float
    scheme: str = "strang"
    dealias: bool = True
    sponge_width: float = 0.0
    sponge_strength: float = 0.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.scheme not in ("strang", "lie"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not 0.0 <= self.sponge_width <= 0.25:
            raise ValueError("sponge_width must lie in [0, 0.25]")
        if not (np.isfinite(self.sponge_strength) and self.sponge_strength >= 0):
            raise ValueError("sponge_strength must be finite and nonnegative")


@dataclass
class Trajectory:
    """Time-ordered diagnostics samples plus optional field snapshots."""

    records: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)

    @property
    def times(self):
        return [r["t"] for r in self.records]

    def append(self, record: dict):
        if self.records and record["t"] <= self.records[-1]["t"]:
            raise ValueError("trajectory times must be strictly increasing")
        self.records.append(record)


def sponge_profile(grid: Grid, width: float, strength: float) -> np.ndarray:
    """Damping rate sigma(x), a raised cosine on the outer `width` fraction
    of the box at each end, zero elsewhere."""
    sigma = np.zeros(grid.n)
    if width <= 0 or strength <= 0:
        return sigma
    w = width * grid.length
    lo = grid.center - grid.length / 2
    hi = lo + grid.length
    x = grid.nodes
    d = np.maximum(lo + w - x, x - (hi - w))
    ramp = np.clip(d / w, 0.0, 1.0)
    sigma[d > 0] = strength * np.sin(0.5 * np.pi * ramp[d > 0]) ** 2
    return sigma


class SplitStepper:
    """Caches spectral phase factors and masks for a fixed (grid, dt)."""

    def __init__(self, grid: Grid, params: ModelParams, options: IntegratorOptions):
        self.grid = grid
        self.params = params
        self.options = options
        k = grid.wavenumbers
        k_odd = k.copy()
        k_odd[grid.n // 2] = 0.0  # keep real fields real under odd symbols
        self._ik = 1j * k_odd
        dt = options.dt
        self._phase_u_half = np.exp(-1j * k**2 * (dt / 2))
        self._phase_v_half = np.exp(1j * k_odd**3 * (dt / 2))
        self._phase_u_full = self._phase_u_half**2
        self._phase_v_full = self._phase_v_half**2
        self._mask2 = dealias_mask(grid, 1.0 / 3.0) if options.dealias else None
        sigma = sponge_profile(grid, options.sponge_width, options.sponge_strength)
        self._sponge = None
        if sigma.any():
            self._sponge = np.maximum(1.0 - sigma * dt, 0.0)

    def _dx_quadratic(self, f: np.ndarray) -> np.ndarray:
        """d/dx of a quadratic product, optionally dealiased."""
        fhat = np.fft.fft(f)
        if self._mask2 is not None:
            fhat = np.where(self._mask2, fhat, 0.0)
        return np.fft.ifft(self._ik * fhat).real

    def _v_forcing(self, u: np.ndarray) -> np.ndarray:
        usq = np.abs(u) ** 2
        if self._mask2 is not None:
            uf = np.fft.ifft(np.where(self._mask2, np.fft.fft(u), 0.0))
            usq = np.abs(uf) ** 2
        return self.params.gamma * self._dx_quadratic(usq)

    def _v_rk4(self, v: np.ndarray, forcing: np.ndarray, h: float) -> np.ndarray:
        def f(w):
            vv = w
            if self._mask2 is not None:
                vv = np.fft.ifft(np.where(self._mask2, np.fft.fft(w), 0.0)).real
            return -0.5 * self._dx_quadratic(vv * vv) + forcing

        k1 = f(v)
        k2 = f(v + 0.5 * h * k1)
        k3 = f(v + 0.5 * h * k2)
        k4 = f(v + h * k3)
        return v + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    def _linear(self, u, v, phase_u, phase_v):
        u = np.fft.ifft(phase_u * np.fft.fft(u))
        v = np.fft.ifft(phase_v * np.fft.fft(v)).real
        return u, v

    def _nonlinear(self, u, v, h: float):
        forcing = self._v_forcing(u)
        v_new = self._v_rk4(v, forcing, h)
        if self.options.scheme == "strang":
            v_eff = 0.5 * (v + v_new)
        else:
            v_eff = v
        w = self.params.alpha * v_eff + self.params.beta * np.abs(u) ** 2
        u_new = u * np.exp(-1j * h * w)
        return u_new, v_new

    def step(self, state: FieldState) -> FieldState:
        dt = self.options.dt
        u, v = state.u, state.v
        if self.options.scheme == "strang":
            u, v = self._linear(u, v, self._phase_u_half, self._phase_v_half)
            u, v = self._nonlinear(u, v, dt)
            u, v = self._linear(u, v, self._phase_u_half, self._phase_v_half)
        else:
            u, v = self._linear(u, v, self._phase_u_full, self._phase_v_full)
            u, v = self._nonlinear(u, v, dt)
        if self._sponge is not None:
            u = u * self._sponge
            v = v * self._sponge
        if not (np.isfinite(u.real).all() and np.isfinite(u.imag).all()
                and np.isfinite(v).all()):
            raise IntegrationError(
                f"non-finite field detected after step to t={state.t + dt:.6g}"
            )
        return FieldState(self.grid, u, v, state.t + dt)


def step(state: FieldState, params: ModelParams,
         options: IntegratorOptions) -> FieldState:
    """Advance one time step (convenience wrapper around SplitStepper)."""
    return SplitStepper(state.grid, params, options).step(state)


def evolve(
    state: FieldState,
    params: ModelParams,
    options: IntegratorOptions,
    t_final: float,
    sample_dt: Optional[float] = None,
    sample_fn: Optional[Callable[[FieldState], dict]] = None,
    snapshot_times: Sequence[float] = (),
    sink: Optional[Callable[[dict], None]] = None,
    t_origin: Optional[float] = None,
) -> Trajectory:
    """Advance `state` to t_final, sampling diagnostics on a uniform schedule.

    sample_dt must be a multiple of options.dt; the initial state is always
    sampled.  `snapshot_times` (multiples of dt) store deep copies of the
    fields in the returned trajectory.  `sink` is called with every sample
    record as it is produced.  On a non-finite abort the partial trajectory
    is attached to the raised IntegrationError.

    `t_origin` (default: the state time) anchors the step-time arithmetic:
    times are computed as t_origin + k*dt, so a run resumed from a
    checkpoint reproduces the uninterrupted run's times bit for bit.
    """
    dt = options.dt
    t0 = state.t
    if t_origin is None:
        t_origin = t0
    k0 = int(round((t0 - t_origin) / dt))
    if abs(t_origin + k0 * dt - t0) > 1e-9 * max(1.0, abs(t0)):
        raise ValueError("state time must sit on the t_origin step grid")
    if t_final < t0 - 1e-12:
        raise ValueError("t_final precedes the state time")
    n_steps = int(round((t_final - t0) / dt))
    if abs(t0 + n_steps * dt - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise ValueError("t_final - t0 must be an integer multiple of dt")

    stride = None
    if sample_dt is not None:
        stride = int(round(sample_dt / dt))
        if stride < 1 or abs(stride * dt - sample_dt) > 1e-12 * max(1.0, sample_dt):
            raise ValueError("sample_dt must be a positive multiple of dt")

    snap_steps = {}
    for ts in snapshot_times:
        i = int(round((ts - t0) / dt))
        if i < 0 or i > n_steps or abs(t0 + i * dt - ts) > 1e-9:
            raise ValueError(f"snapshot time {ts} is not on the step grid")
        snap_steps.setdefault(i, ts)

    stepper = SplitStepper(state.grid, params, options)
    traj = Trajectory()
    current = state.copy()

    def take_sample(s: FieldState):
        rec = {"t": s.t}
        if sample_fn is not None:
            try:
                rec.update(sample_fn(s) or {})
            except (ValueError, FloatingPointError, OverflowError) as exc:
                # finite but huge fields can overflow diagnostic densities
                err = IntegrationError(
                    f"diagnostics overflowed at t={s.t:.6g}: {exc}")
                err.trajectory = traj
                raise err from exc
        traj.append(rec)
        if sink is not None:
            sink(rec)

    take_sample(current)
    if 0 in snap_steps:
        traj.snapshots.append(current.copy())

    for i in range(1, n_steps + 1):
        try:
            current = stepper.step(current)
        except IntegrationError as err:
            err.trajectory = traj
            raise
        current.t = t_origin + (k0 + i) * dt  # avoid accumulated float drift
        if i in snap_steps:
            traj.snapshots.append(current.copy())
        if (stride is not None and i % stride == 0) or i == n_steps:
            take_sample(current)

    return traj


@dataclass(frozen=True)
class ConvergenceResult:
    orders: tuple
    errors: tuple
    exact: bool

    @property
    def observed_order(self) -> float:
        return float("inf") if self.exact else float(np.mean(self.orders))


def convergence_probe(
    state: FieldState,
    params: ModelParams,
    base_dt: float,
    t_span: float,
    scheme: str = "strang",
    dealias: bool = True,
) -> ConvergenceResult:
    """Measure the observed order of the splitting on smooth data.

    Runs at base_dt, base_dt/2 and base_dt/4 against a base_dt/16 reference
    and returns the log2 error ratios.
    """
    def final(dt):
        opts = IntegratorOptions(dt=dt, scheme=scheme, dealias=dealias)
        traj_state = state.copy()
        stepper = SplitStepper(state.grid, params, opts)
        n = int(round(t_span / dt))
        for _ in range(n):
            traj_state = stepper.step(traj_state)
        return traj_state

    ref = final(base_dt / 16)
    scale = np.linalg.norm(ref.u) + np.linalg.norm(ref.v)
    errors = []
    for dt in (base_dt, base_dt / 2, base_dt / 4):
        s = final(dt)
        errors.append(np.linalg.norm(s.u - ref.u) + np.linalg.norm(s.v - ref.v))
    if max(errors) <= 1e-13 * max(scale, 1.0):
        return ConvergenceResult(orders=(), errors=tuple(errors), exact=True)
    orders = tuple(
        float(np.log2(errors[i] / errors[i + 1])) for i in range(len(errors) - 1)
    )
    return ConvergenceResult(orders=orders, errors=tuple(errors), exact=False)
