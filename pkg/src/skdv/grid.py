"""Uniform periodic grid, spectral transforms, differentiation and quadrature.

Everything downstream (time stepping, conserved quantities, weighted
functionals) sits on top of this module.  The real line is truncated to a
periodic box; callers are responsible for choosing the box long enough that
their fields decay below roundoff at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid of n points on [center - L/2, center + L/2)."""

    n: int
    length: float
    center: float
    nodes: np.ndarray = field(repr=False)
    wavenumbers: np.ndarray = field(repr=False)

    @property
    def dx(self) -> float:
        return self.length / self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return (
            self.n == other.n
            and self.length == other.length
            and self.center == other.center
        )


def make_grid(n: int, length: float, center: float = 0.0) -> Grid:
    """Build a periodic grid with nodes x_j = center - L/2 + j*L/n.

    n must be even and at least 8; length must be positive.
    """
    if n % 2 != 0 or n < 8:
        raise GridError(f"grid size must be even and >= 8, got n={n}")
    if not length > 0:
        raise GridError(f"domain length must be positive, got {length}")
    nodes = center - length / 2 + np.arange(n) * (length / n)
    # Signed integer mode indices scaled by 2*pi/L; index n/2 is the Nyquist
    # mode (fftfreq puts it at -n/2).
    wavenumbers = 2 * np.pi * np.fft.fftfreq(n, d=1.0 / n) / length
    return Grid(n=n, length=length, center=center, nodes=nodes,
                wavenumbers=wavenumbers)


def to_spectral(f: np.ndarray) -> np.ndarray:
    return np.fft.fft(f)


def from_spectral(fhat: np.ndarray, real: bool = False) -> np.ndarray:
    out = np.fft.ifft(fhat)
    return out.real if real else out


def spectral_derivative(grid: Grid, f: np.ndarray, order: int = 1) -> np.ndarray:
    """Differentiate a periodic field by multiplication with (ik)^order.

    Odd orders zero the Nyquist mode so real input stays real.  Supported
    orders are 1, 2 and 3.
    """
    if order not in (1, 2, 3):
        raise GridError(f"derivative order must be 1, 2 or 3, got {order}")
    if len(f) != grid.n:
        raise GridError(f"field length {len(f)} does not match grid n={grid.n}")
    k = grid.wavenumbers
    sym = (1j * k) ** order
    if order % 2 == 1:
        sym = sym.copy()
        sym[grid.n // 2] = 0.0
    out = np.fft.ifft(sym * np.fft.fft(f))
    if np.isrealobj(f):
        return out.real
    return out


def quadrature(grid: Grid, f: np.ndarray):
    """Periodic trapezoid rule: dx * sum(f).

    Spectrally accurate for smooth periodic integrands.  Summation is
    compensated (math.fsum semantics via float128-free pairwise + fsum) so
    that cancellation-prone densities do not pick up summation error.
    """
    if len(f) != grid.n:
        raise GridError(f"field length {len(f)} does not match grid n={grid.n}")
    if np.iscomplexobj(f):
        return grid.dx * complex(_fsum(f.real), _fsum(f.imag))
    return grid.dx * _fsum(f)


def _fsum(values: np.ndarray) -> float:
    import math

    return math.fsum(values.tolist())
