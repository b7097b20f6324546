"""The three invariants of the coupled flow and their drift along a run.

    I1 = int |u|^2
    I2 = int { alpha*gamma*v*|u|^2 - (alpha/6)*v^3 + (beta*gamma/2)*|u|^4
               + (alpha/2)*(v_x)^2 + gamma*|u_x|^2 }
    I3 = int { alpha*v^2 + 2*gamma*Im(u * conj(u_x)) }

I2 mixes signs, so its density is summed with compensated summation (the
quadrature already does this) to keep drift measurements clean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import quadrature, spectral_derivative
from .model import FieldState, ModelParams


@dataclass(frozen=True)
class ConservedTriple:
    i1: float
    i2: float
    i3: float

    def __iter__(self):
        return iter((self.i1, self.i2, self.i3))


def conserved_triple(state: FieldState, params: ModelParams) -> ConservedTriple:
    grid = state.grid
    u, v = state.u, state.v
    a, b, g = params.alpha, params.beta, params.gamma
    usq = np.abs(u) ** 2
    ux = spectral_derivative(grid, u, 1)
    vx = spectral_derivative(grid, v, 1)

    i1 = quadrature(grid, usq)
    dens2 = (
        a * g * v * usq
        - (a / 6.0) * v**3
        + (b * g / 2.0) * usq**2
        + (a / 2.0) * vx**2
        + g * np.abs(ux) ** 2
    )
    i2 = quadrature(grid, dens2)
    dens3 = a * v**2 + 2.0 * g * (u * np.conj(ux)).imag
    i3 = quadrature(grid, dens3)
    return ConservedTriple(float(i1), float(i2), float(i3))


DRIFT_FLOOR = 1e-12


def drift_report(values) -> ConservedTriple:
    """Per-quantity relative drift max_t |I_k(t)-I_k(0)| / max(|I_k(0)|, floor).

    `values` is a sequence of ConservedTriple (or 3-tuples) along a run.
    """
    values = [tuple(v) for v in values]
    if not values:
        raise ValueError("drift_report needs a nonempty trajectory")
    first = values[0]
    drifts = []
    for k in range(3):
        ref = max(abs(first[k]), DRIFT_FLOOR)
        drifts.append(max(abs(v[k] - first[k]) for v in values) / ref)
    return ConservedTriple(*drifts)


def velocity_l2_bound(state: FieldState, params: ModelParams,
                      i3_initial: float) -> float:
    """Upper bound on ||v||_2^2 from the invariants:
    |I3[0]|/|alpha| + (2|gamma|/|alpha|) ||u||_2 ||u_x||_2  (alpha, gamma != 0).
    """
    if params.alpha == 0:
        raise ValueError("bound requires alpha != 0")
    grid = state.grid
    u = state.u
    ux = spectral_derivative(grid, u, 1)
    nu = np.sqrt(float(quadrature(grid, np.abs(u) ** 2)))
    nux = np.sqrt(float(quadrature(grid, np.abs(ux) ** 2)))
    return (
        abs(i3_initial) / abs(params.alpha)
        + 2.0 * abs(params.gamma) / abs(params.alpha) * nu * nux
    )
