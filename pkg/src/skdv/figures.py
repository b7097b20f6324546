"""Figure rendering from the diagnostics CSV.

Figures consume only the CSV so they can be regenerated from run artifacts.
Each toggle produces one self-contained SVG file.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .runner import A_COLUMNS, B_COLUMNS, RunError, read_csv

TOGGLES = ("conserved", "budget", "masses", "functionals")


def _require(data, cols, path):
    missing = [c for c in cols if c not in data]
    if missing:
        raise RunError(f"{path}: CSV schema mismatch, missing columns {missing}")
    if len(data["t"]) == 0:
        raise RunError(f"{path}: CSV contains no samples")


def _finite(t, y):
    mask = np.isfinite(y)
    return t[mask], y[mask]


def figure_conserved(data, path, out):
    _require(data, ["t", "i1", "i2", "i3"], path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    t = data["t"]
    for name in ("i1", "i2", "i3"):
        y = data[name]
        ref = max(abs(y[0]), 1e-12)
        ax.plot(t, np.abs(y - y[0]) / ref, label=name)
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("relative drift")
    ax.set_title("conserved-quantity drift")
    ax.legend()
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def figure_budget(data, path, out):
    _require(data, ["t", "residual_j"] + A_COLUMNS, path)
    fig, ax = plt.subplots(figsize=(8, 5))
    t = data["t"]
    for name in A_COLUMNS:
        ax.plot(*_finite(t, data[name]), label=name, linewidth=0.9)
    tt, rr = _finite(t, data["residual_j"])
    ax.plot(tt, rr, "k--", label="residual", linewidth=1.4)
    ax.set_xlabel("t")
    ax.set_ylabel("budget term")
    ax.set_title("dJ/dt budget")
    ax.legend(ncol=3, fontsize=7)
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def figure_masses(data, path, out):
    mass_cols = [c for c in data if c.endswith(("mass_v2", "mass_u2",
                                                "mass_dv2", "mass_du2",
                                                "mass_u4"))]
    _require(data, ["t"] + (mass_cols or ["mass_v2"]), path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    t = data["t"]
    for name in sorted(mass_cols):
        tt, yy = _finite(t, data[name])
        ax.plot(tt, np.maximum(yy, 1e-300), label=name, linewidth=0.9)
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("region mass")
    ax.set_title("local masses over the monitored regions")
    ax.legend(fontsize=7)
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


def figure_functionals(data, path, out):
    _require(data, ["t", "j", "i", "pj", "pi"], path)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    t = data["t"]
    for name in ("j", "i"):
        axes[0].plot(*_finite(t, data[name]), label=name)
    axes[0].set_xlabel("t")
    axes[0].set_title("weighted functionals")
    axes[0].legend()
    for name in ("pj", "pi"):
        axes[1].plot(*_finite(t, data[name]), label=name)
    axes[1].set_xlabel("t")
    axes[1].set_title("partial time integrals")
    axes[1].legend()
    fig.savefig(out, bbox_inches="tight")
    plt.close(fig)


_RENDERERS = {
    "conserved": figure_conserved,
    "budget": figure_budget,
    "masses": figure_masses,
    "functionals": figure_functionals,
}


def emit_figures(csv_path, toggles, out_dir=None) -> list:
    """Render one SVG per requested toggle next to the CSV (or in out_dir).

    Returns the list of written files.  Raises on unknown toggles, schema
    mismatch or an empty CSV (in which case no file is written).
    """
    unknown = [t for t in toggles if t not in _RENDERERS]
    if unknown:
        raise RunError(f"unknown figure toggles {unknown}; known: {list(TOGGLES)}")
    data = read_csv(csv_path)
    out_dir = out_dir or os.path.dirname(os.path.abspath(csv_path))
    written = []
    for name in toggles:
        out = os.path.join(out_dir, f"fig_{name}.svg")
        _RENDERERS[name](data, csv_path, out)
        written.append(out)
    return written
