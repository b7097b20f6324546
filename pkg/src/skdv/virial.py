"""Weight functions, scaling schedules, the weighted functionals J and I,
and their exact term-by-term time-derivative budgets.

The base weight is phi(x) = (2/pi) arctan(e^x), a smooth switch with
phi' = sech(x)/pi decaying like e^{-|x|}.  Scaled families:

    phi_s(x) = s * phi(x/s)        (switch, saturates at s)
    chi_s(x) = phi'(x/s)           (bump)

J(t)  = (1/eta) int v * phi_a(x/l1) * chi_b(x/l2) dx
I(t)  = (theta/2eta) int v^2 phi_l(x/l1) dx
        + (mu/eta) Im int u conj(u_x) phi_l(x/l1) dx

with schedules l1(t) = t^p1 / ln^q1 t, l2 = l1^p2, eta(t) = t^r1 ln^r2 t,
r1 = 1 - p1, r2 = 1 + q1.  The budgets below are the analytic expansions of
dJ/dt and dI/dt via the equations of motion and integration by parts; each
term is a plain weighted quadrature, and a centered finite difference of
J, I over the sampling interval provides the residual check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .grid import quadrature, spectral_derivative
from .model import FieldState, ModelParams, rhs
from .waves import sech


class VirialConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# base weight and derivatives (closed forms, numerically stable everywhere)

def weight_phi(x):
    x = np.asarray(x, dtype=float)
    # reflection phi(x) + phi(-x) = 1 avoids exp overflow for x >> 1
    pos = x > 0
    base = (2.0 / np.pi) * np.arctan(np.exp(-np.abs(x)))
    return np.where(pos, 1.0 - base, base)


def weight_dphi(x):
    return sech(np.asarray(x, dtype=float)) / np.pi


def weight_d2phi(x):
    x = np.asarray(x, dtype=float)
    return -sech(x) * np.tanh(x) / np.pi


def weight_d3phi(x):
    x = np.asarray(x, dtype=float)
    s, t = sech(x), np.tanh(x)
    return s * (t * t - s * s) / np.pi


def weight_d4phi(x):
    x = np.asarray(x, dtype=float)
    s, t = sech(x), np.tanh(x)
    return s * t * (5.0 * s * s - t * t) / np.pi


def weight(kind: str, scale: float, x):
    """Scaled switch family phi_s and its first three derivatives.

    kind "phi" is s*phi(x/s); "dphi", "d2phi", "d3phi" are its derivatives.
    """
    if not scale > 0:
        raise VirialConfigError(f"weight scale must be positive, got {scale}")
    y = np.asarray(x, dtype=float) / scale
    if kind == "phi":
        return scale * weight_phi(y)
    if kind == "dphi":
        return weight_dphi(y)
    if kind == "d2phi":
        return weight_d2phi(y) / scale
    if kind == "d3phi":
        return weight_d3phi(y) / scale**2
    raise VirialConfigError(f"unknown weight kind {kind!r}")


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class VirialConfig:
    p1: float = 0.5
    p2: float = 2.0
    q1: float = 1.0
    a: float = 2.0
    b: float = 2.0
    l: float = 1.0
    theta: float = 1.0
    mu: float = 0.0
    m: float = 0.6

    def __post_init__(self):
        if not self.p2 > 1.0:
            raise VirialConfigError(f"p2 > 1 required, got p2={self.p2}")
        # p2 > 1 makes 2/(p2+2) < 2/3, so this also keeps p1 in (0, 2/3)
        if not 0.0 < self.p1 <= 2.0 / (self.p2 + 2.0):
            raise VirialConfigError(
                f"boundedness constraint 0 < p1 <= 2/(p2+2) violated: "
                f"p1={self.p1}, 2/(p2+2)={2.0 / (self.p2 + 2.0)}"
            )
        if not self.q1 > 0:
            raise VirialConfigError(f"q1 > 0 required, got q1={self.q1}")
        for name in ("a", "b", "l", "theta"):
            if not getattr(self, name) > 0:
                raise VirialConfigError(
                    f"weight scale {name} must be positive, got {getattr(self, name)}"
                )
        if 1.0 / self.a + 1.0 / self.b > 1.0 / self.l:
            raise VirialConfigError(
                f"weight-scale compatibility 1/a + 1/b <= 1/l violated: "
                f"1/{self.a} + 1/{self.b} > 1/{self.l}"
            )
        if not np.isfinite(self.mu):
            raise VirialConfigError(f"mu must be finite, got {self.mu}")
        if not 0.0 < self.m < 1.0 - self.p1 / 2.0:
            raise VirialConfigError(
                f"moving-region exponent constraint 0 < m < 1 - p1/2 violated: "
                f"m={self.m}, bound={1.0 - self.p1 / 2.0}"
            )

    @property
    def r1(self) -> float:
        return 1.0 - self.p1

    @property
    def r2(self) -> float:
        return 1.0 + self.q1

    @staticmethod
    def default_mu(params: ModelParams, theta: float = 1.0) -> float:
        """mu = gamma*theta/alpha, the choice cancelling the mixed transport
        terms (B1 + B10 = 0) in the I budget."""
        if params.alpha == 0:
            raise VirialConfigError("default mu needs alpha != 0")
        return params.gamma * theta / params.alpha

    @classmethod
    def for_model(cls, params: ModelParams, **overrides) -> "VirialConfig":
        theta = overrides.get("theta", 1.0)
        overrides.setdefault("mu", cls.default_mu(params, theta))
        return cls(**overrides)


def scales(t: float, config: VirialConfig):
    """(lambda1, lambda2, eta) at time t; requires t > 1."""
    if not t > 1.0:
        raise VirialConfigError(f"scaling schedules need t > 1, got t={t}")
    lt = math.log(t)
    lam1 = t**config.p1 / lt**config.q1
    lam2 = lam1**config.p2
    eta = t**config.r1 * lt**config.r2
    return lam1, lam2, eta


def scale_rates(t: float, config: VirialConfig):
    """(lambda1', lambda2', eta') at time t (closed-form derivatives)."""
    lam1, lam2, eta = scales(t, config)
    lt = math.log(t)
    dlam1 = lam1 * (config.p1 / t - config.q1 / (t * lt))
    dlam2 = config.p2 * lam1 ** (config.p2 - 1.0) * dlam1
    deta = eta * (config.r1 / t + config.r2 / (t * lt))
    return dlam1, dlam2, deta


# ---------------------------------------------------------------------------
# functionals

def _offsets(state: FieldState, config: VirialConfig, moving: bool):
    shift = state.t**config.m if moving else 0.0
    return state.grid.nodes - shift


def functional_J(state: FieldState, config: VirialConfig,
                 moving: bool = False) -> float:
    """J = (1/eta) int v phi_a(x/lambda1) chi_b(x/lambda2) dx.

    With moving=True the weights are centered on the ray x = t^m.
    """
    lam1, lam2, eta = scales(state.t, config)
    x = _offsets(state, config, moving)
    wa = weight("phi", config.a, x / lam1)
    cb = weight("dphi", config.b, x / lam2)
    return float(quadrature(state.grid, state.v * wa * cb)) / eta


def functional_I(state: FieldState, config: VirialConfig,
                 moving: bool = False) -> float:
    """I = (theta/2eta) int v^2 phi_l + (mu/eta) Im int u conj(u_x) phi_l."""
    lam1, _, eta = scales(state.t, config)
    x = _offsets(state, config, moving)
    wl = weight("phi", config.l, x / lam1)
    ux = spectral_derivative(state.grid, state.u, 1)
    momentum = (state.u * np.conj(ux)).imag
    term_v = 0.5 * config.theta * float(quadrature(state.grid, state.v**2 * wl))
    term_u = config.mu * float(quadrature(state.grid, momentum * wl))
    return (term_v + term_u) / eta


# ---------------------------------------------------------------------------
# budgets

@dataclass(frozen=True)
class BudgetJ:
    t: float
    a1_parts: tuple
    a2: float
    a3: float
    a4: float
    djdt_fd: float
    residual: float

    @property
    def a1(self) -> float:
        return float(sum(self.a1_parts))

    @property
    def total(self) -> float:
        return self.a1 + self.a2 + self.a3 + self.a4

    @property
    def max_term(self) -> float:
        return max(max(abs(p) for p in self.a1_parts),
                   abs(self.a2), abs(self.a3), abs(self.a4))


@dataclass(frozen=True)
class BudgetI:
    t: float
    b_parts: tuple
    didt_fd: float
    residual: float

    @property
    def total(self) -> float:
        return float(sum(self.b_parts))

    @property
    def max_term(self) -> float:
        return max(abs(p) for p in self.b_parts)

    @property
    def cancellation(self) -> float:
        """|B1 + B10| relative to max(|B1|, |B10|, floor)."""
        b1, b10 = self.b_parts[0], self.b_parts[9]
        return abs(b1 + b10) / max(abs(b1), abs(b10), 1e-300)


def _check_window(window: Sequence[FieldState]):
    if len(window) != 3:
        raise ValueError("budget windows need exactly 3 consecutive samples")
    t0, t1, t2 = (s.t for s in window)
    h1, h2 = t1 - t0, t2 - t1
    if h1 <= 0 or h2 <= 0 or abs(h1 - h2) > 1e-9 * max(h1, h2):
        raise ValueError("budget window must be uniformly spaced in time")
    return 0.5 * (h1 + h2)


def budget_terms_J(state: FieldState, config: VirialConfig) -> dict:
    """All eleven instantaneous terms of dJ/dt at the state's time."""
    grid = state.grid
    t = state.t
    lam1, lam2, eta = scales(t, config)
    dlam1, dlam2, deta = scale_rates(t, config)
    x = grid.nodes
    w1, w2 = x / lam1, x / lam2
    a, b = config.a, config.b

    wa = a * weight_phi(w1 / a)
    wap = weight_dphi(w1 / a)
    wapp = weight_d2phi(w1 / a) / a
    wappp = weight_d3phi(w1 / a) / a**2
    cb = weight_dphi(w2 / b)
    cbp = weight_d2phi(w2 / b) / b
    cbpp = weight_d3phi(w2 / b) / b**2
    cbppp = weight_d4phi(w2 / b) / b**3

    v = state.v
    usq = np.abs(state.u) ** 2

    def q(dens):
        return float(quadrature(grid, dens))

    terms = {
        # gamma-scaled pieces are returned without gamma; budget_J applies it
        "a1_1_over_gamma": -q(usq * wap * cb) / (lam1 * eta),
        "a1_2_over_gamma": -q(usq * wa * cbp) / (lam2 * eta),
        "a1_3": q(v**2 * wap * cb) / (2.0 * lam1 * eta),
        "a1_4": q(v**2 * wa * cbp) / (2.0 * lam2 * eta),
        "a1_5": q(v * wappp * cb) / (eta * lam1**3),
        "a1_6": 3.0 * q(v * wapp * cbp) / (eta * lam1**2 * lam2),
        "a1_7": 3.0 * q(v * wap * cbpp) / (eta * lam1 * lam2**2),
        "a1_8": q(v * wa * cbppp) / (eta * lam2**3),
        "a2": -(dlam1 / (eta * lam1)) * q(v * wap * w1 * cb),
        "a3": -(dlam2 / (eta * lam2)) * q(v * wa * w2 * cbp),
        "a4": -(deta / eta**2) * q(v * wa * cb),
    }
    return terms


def budget_J(window: Sequence[FieldState], config: VirialConfig,
             gamma: float) -> BudgetJ:
    """Budget of dJ/dt on a 3-sample window: terms at the middle sample,
    centered finite difference of J across the window, and their residual."""
    h = _check_window(window)
    mid = window[1]
    terms = budget_terms_J(mid, config)
    a1_parts = (
        gamma * terms["a1_1_over_gamma"],
        gamma * terms["a1_2_over_gamma"],
        terms["a1_3"], terms["a1_4"], terms["a1_5"],
        terms["a1_6"], terms["a1_7"], terms["a1_8"],
    )
    dj = (functional_J(window[2], config) - functional_J(window[0], config)) / (2 * h)
    total = sum(a1_parts) + terms["a2"] + terms["a3"] + terms["a4"]
    return BudgetJ(
        t=mid.t, a1_parts=a1_parts, a2=terms["a2"], a3=terms["a3"],
        a4=terms["a4"], djdt_fd=dj, residual=dj - total,
    )


def a1_direct(state: FieldState, params: ModelParams, config: VirialConfig,
              dealias: bool = True) -> float:
    """Independent recomposition oracle: (1/eta) int (dv/dt) phi_a chi_b dx
    with dv/dt from the semidiscrete right-hand side."""
    lam1, lam2, eta = scales(state.t, config)
    x = state.grid.nodes
    wa = weight("phi", config.a, x / lam1)
    cb = weight("dphi", config.b, x / lam2)
    _, dv = rhs(state, params, dealias=dealias)
    return float(quadrature(state.grid, dv * wa * cb)) / eta


def budget_terms_I(state: FieldState, params: ModelParams,
                   config: VirialConfig) -> tuple:
    """The thirteen instantaneous terms of dI/dt at the state's time."""
    grid = state.grid
    t = state.t
    lam1, _, eta = scales(t, config)
    dlam1, _, deta = scale_rates(t, config)
    x = grid.nodes
    w1 = x / lam1
    l = config.l
    th, mu = config.theta, config.mu
    al, be, ga = params.alpha, params.beta, params.gamma

    wl = l * weight_phi(w1 / l)
    wlp = weight_dphi(w1 / l)
    wlppp = weight_d3phi(w1 / l) / l**2

    v = state.v
    vx = spectral_derivative(grid, v, 1)
    ux = spectral_derivative(grid, state.u, 1)
    usq = np.abs(state.u) ** 2
    mom = (state.u * np.conj(ux)).imag

    def q(dens):
        return float(quadrature(grid, dens))

    b1 = -(th * ga / eta) * q(vx * usq * wl)
    b2 = -(th * ga / (eta * lam1)) * q(v * usq * wlp)
    b3 = (th / (3.0 * eta * lam1)) * q(v**3 * wlp)
    b4 = -(1.5 * th / (eta * lam1)) * q(vx**2 * wlp)
    b5 = (th / (2.0 * eta * lam1**3)) * q(v**2 * wlppp)
    b6 = -(th * dlam1 / (2.0 * eta * lam1)) * q(v**2 * wlp * w1)
    b7 = -(th * deta / (2.0 * eta**2)) * q(v**2 * wl)
    b8 = -(mu * deta / eta**2) * q(mom * wl)
    b9 = -(2.0 * mu / (eta * lam1)) * q(np.abs(ux) ** 2 * wlp)
    b10 = (al * mu / eta) * q(vx * usq * wl)
    b11 = -(mu * be / (2.0 * eta * lam1)) * q(usq**2 * wlp)
    b12 = (mu / (2.0 * eta * lam1**3)) * q(usq * wlppp)
    b13 = -(mu * dlam1 / (eta * lam1)) * q(mom * wlp * w1)
    return (b1, b2, b3, b4, b5, b6, b7, b8, b9, b10, b11, b12, b13)


def budget_I(window: Sequence[FieldState], params: ModelParams,
             config: VirialConfig) -> BudgetI:
    h = _check_window(window)
    mid = window[1]
    parts = budget_terms_I(mid, params, config)
    di = (functional_I(window[2], config) - functional_I(window[0], config)) / (2 * h)
    return BudgetI(t=mid.t, b_parts=parts, didt_fd=di,
                   residual=di - float(sum(parts)))


# ---------------------------------------------------------------------------
# weight comparability over unit cells

def weight_comparability_check(l: float, lambda1: float,
                               n_range=(-100, 100),
                               samples_per_cell: int = 200) -> float:
    """Check sup/inf of the bump phi_l'(x/lambda1) over unit cells [n, n+1]
    against the bound max(e^{-1/(l*lambda1)}, e^{1/(l*lambda1)}).

    Returns the maximum over cells of sup / (bound * inf); a value <= 1
    means the comparability inequality holds on every cell.  The bound is
    saturated asymptotically on the exponential tails, so it carries a
    1e-12 relative headroom to absorb floating-point roundoff there.
    """
    if not lambda1 > 0 or not l > 0:
        raise VirialConfigError("l and lambda1 must be positive")
    bound = max(np.exp(-1.0 / (l * lambda1)),
                np.exp(1.0 / (l * lambda1))) * (1.0 + 1e-12)
    worst = 0.0
    offsets = np.linspace(0.0, 1.0, samples_per_cell)
    for n in range(int(n_range[0]), int(n_range[1])):
        vals = weight_dphi((n + offsets) / (lambda1 * l))
        worst = max(worst, float(vals.max() / (bound * vals.min())))
    return worst
