"""Coupled short-wave/long-wave model: parameters, state and tendencies.

The evolution is written in tendency form

    du/dt = i u_xx - i (alpha*v + beta*|u|^2) u
    dv/dt = -v_xxx - (1/2) (v^2)_x + gamma (|u|^2)_x

with u complex and v real on one periodic grid.  The advection term is
computed in conservative form (1/2)(v^2)_x so the discrete integral of v^2
matches the integration-by-parts structure of the weighted energy budgets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, spectral_derivative


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            val = getattr(self, name)
            if not np.isfinite(val):
                raise ModelError(f"model parameter {name} must be finite, got {val}")

    @property
    def theorem_regime(self) -> bool:
        """True when alpha < 0 and gamma < 0 (the decay-theorem hypothesis)."""
        return self.alpha < 0 and self.gamma < 0


@dataclass
class FieldState:
    """The pair (u complex, v real) on a grid at time t."""

    grid: Grid
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        if len(self.u) != self.grid.n or len(self.v) != self.grid.n:
            raise ModelError("field length does not match grid size")
        self.u = np.asarray(self.u, dtype=complex)
        self.v = np.asarray(self.v, dtype=float)

    def copy(self) -> "FieldState":
        return FieldState(self.grid, self.u.copy(), self.v.copy(), self.t)


def dealias_mask(grid: Grid, fraction: float) -> np.ndarray:
    """Boolean keep-mask retaining modes with |index| <= fraction * n.

    fraction=1/3 is the usual rule for quadratic products, 1/4 for cubic.
    """
    idx = np.fft.fftfreq(grid.n, d=1.0 / grid.n)
    return np.abs(idx) <= fraction * grid.n


def _filtered(grid: Grid, f: np.ndarray, mask: np.ndarray) -> np.ndarray:
    out = np.fft.ifft(np.where(mask, np.fft.fft(f), 0.0))
    return out.real if np.isrealobj(f) else out


def nonlinear_phase_potential(state: FieldState, params: ModelParams) -> np.ndarray:
    """The real potential W = alpha*v + beta*|u|^2 multiplying u.

    The nonlinear split step rotates u by exp(-i W dt).
    """
    return params.alpha * state.v + params.beta * np.abs(state.u) ** 2


def rhs(state: FieldState, params: ModelParams, dealias: bool = True):
    """Semidiscrete tendencies (du/dt, dv/dt) of the coupled system."""
    grid = state.grid
    u, v = state.u, state.v

    if dealias:
        m2 = dealias_mask(grid, 1.0 / 3.0)
        m3 = dealias_mask(grid, 1.0 / 4.0)
        v2 = _filtered(grid, _filtered(grid, v, m2) ** 2, m2)
        usq = _filtered(grid, np.abs(_filtered(grid, u, m2)) ** 2, m2)
        u3 = _filtered(grid, u, m3)
        cubic = _filtered(grid, np.abs(u3) ** 2 * u3, m3)
        uv = _filtered(grid, _filtered(grid, u, m2) * _filtered(grid, v, m2), m2)
    else:
        v2 = v * v
        usq = np.abs(u) ** 2
        cubic = np.abs(u) ** 2 * u
        uv = u * v

    du = (
        1j * spectral_derivative(grid, u, 2)
        - 1j * params.alpha * uv
        - 1j * params.beta * cubic
    )
    dv = (
        -spectral_derivative(grid, v, 3)
        - 0.5 * spectral_derivative(grid, v2, 1)
        + params.gamma * spectral_derivative(grid, usq, 1)
    )
    return du, dv
