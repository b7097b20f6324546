"""Local masses over growing/moving regions and the partial time integrals
whose boundedness underlies the decay statements.

The regions are |x| <= K t^p1 (centered) and |x - t^m| <= K t^p1 (ray,
0 < m < 1 - p1/2).  Indicators are sharp at grid resolution with half
weight on nodes exactly at the boundary, so region + complement masses
partition the whole-line integrals exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import quadrature, spectral_derivative
from .model import FieldState
from .virial import VirialConfig, scales, weight


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class RegionSpec:
    kind: str = "centered"  # "centered" or "ray"
    p1: float = 0.5
    prefactor: float = 1.0  # the explicit constant K hiding in "<~"
    m: float = 0.6          # ray exponent, used only for kind="ray"
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("centered", "ray"):
            raise RegionError(f"unknown region kind {self.kind!r}")
        if not 0.0 < self.p1 < 2.0 / 3.0:
            raise RegionError(f"region exponent needs 0 < p1 < 2/3, got {self.p1}")
        if not self.prefactor > 0:
            raise RegionError(f"region prefactor K must be positive, got {self.prefactor}")
        if self.kind == "ray" and not 0.0 < self.m < 1.0 - self.p1 / 2.0:
            raise RegionError(
                f"ray exponent constraint 0 < m < 1 - p1/2 violated: "
                f"m={self.m}, bound={1.0 - self.p1 / 2.0}"
            )
        if not self.name:
            object.__setattr__(self, "name",
                               "omega" if self.kind == "centered" else "ray")

    def bounds(self, t: float):
        if not t > 1.0:
            raise RegionError(f"time-dependent regions need t > 1, got t={t}")
        half = self.prefactor * t**self.p1
        center = t**self.m if self.kind == "ray" else 0.0
        return center - half, center + half

    def indicator(self, grid, t: float) -> np.ndarray:
        lo, hi = self.bounds(t)
        box_lo = grid.center - grid.length / 2
        box_hi = box_lo + grid.length
        if lo < box_lo or hi > box_hi:
            raise RegionError(
                f"region [{lo:.4g}, {hi:.4g}] at t={t:.4g} exceeds the box "
                f"[{box_lo:.4g}, {box_hi:.4g}]"
            )
        x = grid.nodes
        w = ((x > lo) & (x < hi)).astype(float)
        w[x == lo] = 0.5
        w[x == hi] = 0.5
        return w


@dataclass(frozen=True)
class MassRecord:
    t: float
    mass_v2: float
    mass_u2: float
    mass_dv2: float
    mass_du2: float
    mass_u4: float

    def as_dict(self, prefix: str = "") -> dict:
        return {
            prefix + "mass_v2": self.mass_v2,
            prefix + "mass_u2": self.mass_u2,
            prefix + "mass_dv2": self.mass_dv2,
            prefix + "mass_du2": self.mass_du2,
            prefix + "mass_u4": self.mass_u4,
        }


def region_mass(state: FieldState, region: RegionSpec,
                indicator: np.ndarray = None) -> MassRecord:
    """Region integrals of v^2, |u|^2, (v_x)^2, |u_x|^2 and |u|^4."""
    grid = state.grid
    w = region.indicator(grid, state.t) if indicator is None else indicator
    usq = np.abs(state.u) ** 2
    vx = spectral_derivative(grid, state.v, 1)
    ux = spectral_derivative(grid, state.u, 1)

    def q(dens):
        return float(quadrature(grid, dens * w))

    return MassRecord(
        t=state.t,
        mass_v2=q(state.v**2),
        mass_u2=q(usq),
        mass_dv2=q(vx**2),
        mass_du2=q(np.abs(ux) ** 2),
        mass_u4=q(usq**2),
    )


def weighted_integrands(state: FieldState, config: VirialConfig):
    """Pointwise-in-time integrands of the two monitored partial integrals:

      g_J(t) = (1/(eta*lambda1)) int (v^2 + |u|^2) phi_a'(x/l1) chi_b(x/l2) dx
      g_I(t) = (1/(eta*lambda1)) int (|u_x|^2 + (v_x)^2) phi_l'(x/l1) dx
    """
    grid = state.grid
    lam1, lam2, eta = scales(state.t, config)
    x = grid.nodes
    wap = weight("dphi", config.a, x / lam1)
    cb = weight("dphi", config.b, x / lam2)
    wlp = weight("dphi", config.l, x / lam1)
    usq = np.abs(state.u) ** 2
    vx = spectral_derivative(grid, state.v, 1)
    ux = spectral_derivative(grid, state.u, 1)
    gj = float(quadrature(grid, (state.v**2 + usq) * wap * cb)) / (eta * lam1)
    gi = float(quadrature(grid, (np.abs(ux) ** 2 + vx**2) * wlp)) / (eta * lam1)
    return gj, gi


def accumulate_weighted_integrals(times, gj_values, gi_values):
    """Trapezoid-in-time running accumulation of the partial integrals.

    Returns arrays (P_J(t), P_I(t)) aligned with `times`, starting at zero.
    Both integrands are nonnegative, so the outputs are nondecreasing.
    """
    t = np.asarray(times, dtype=float)
    gj = np.asarray(gj_values, dtype=float)
    gi = np.asarray(gi_values, dtype=float)
    if t.ndim != 1 or np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly increasing")
    dt = np.diff(t)
    pj = np.concatenate([[0.0], np.cumsum(0.5 * dt * (gj[1:] + gj[:-1]))])
    pi = np.concatenate([[0.0], np.cumsum(0.5 * dt * (gi[1:] + gi[:-1]))])
    return pj, pi


def liminf_tracker(times, masses):
    """Tail-minimum proxy for a liminf: for each sample T, the minimum of
    the mass over samples with t in [T/2, T]."""
    t = np.asarray(times, dtype=float)
    m = np.asarray(masses, dtype=float)
    if t.size == 0:
        raise ValueError("empty series")
    if np.any(np.diff(t) <= 0):
        raise ValueError("series must be time-sorted")
    out = np.empty_like(m)
    lo = 0
    for i in range(t.size):
        while t[lo] < t[i] / 2.0:
            lo += 1
        out[i] = m[lo:i + 1].min()
    return out
