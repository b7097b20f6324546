"""Binary snapshot and checkpoint files.

Snapshot layout (all little-endian):

    magic   4 bytes  b"SKDV"
    version u32      currently 1
    n       u64
    length  f64
    center  f64
    t       f64
    alpha, beta, gamma   f64 each
    u       n pairs of f64 (Re, Im)
    v       n f64

A checkpoint is a snapshot followed by a UTF-8 JSON trailer echoing the
integrator options and the accumulated diagnostics state, so a resumed run
reproduces the uninterrupted one bit-exactly.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .grid import make_grid
from .model import FieldState, ModelParams

MAGIC = b"SKDV"
VERSION = 1
_HEADER = struct.Struct("<4sIQdddddd")


class SnapshotError(IOError):
    pass


def write_snapshot(path, state: FieldState, params: ModelParams):
    grid = state.grid
    header = _HEADER.pack(
        MAGIC, VERSION, grid.n, grid.length, grid.center, state.t,
        params.alpha, params.beta, params.gamma,
    )
    u = np.empty(2 * grid.n, dtype="<f8")
    u[0::2] = state.u.real
    u[1::2] = state.u.imag
    v = np.asarray(state.v, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(u.tobytes())
        fh.write(v.tobytes())


def read_snapshot(path):
    """Returns (FieldState, ModelParams)."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise SnapshotError(f"{path}: truncated header")
        magic, version, n, length, center, t, alpha, beta, gamma = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise SnapshotError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise SnapshotError(f"{path}: unsupported version {version}")
        u_raw = np.frombuffer(fh.read(16 * n), dtype="<f8")
        v = np.frombuffer(fh.read(8 * n), dtype="<f8").copy()
        if u_raw.size != 2 * n or v.size != n:
            raise SnapshotError(f"{path}: truncated payload")
    u = u_raw[0::2] + 1j * u_raw[1::2]
    grid = make_grid(int(n), length, center)
    return FieldState(grid, u, v, t=t), ModelParams(alpha, beta, gamma)


def write_checkpoint(path, state: FieldState, params: ModelParams,
                     extra: dict):
    write_snapshot(path, state, params)
    with open(path, "ab") as fh:
        fh.write(json.dumps(extra, sort_keys=True).encode("utf-8"))


def read_checkpoint(path):
    """Returns (FieldState, ModelParams, extra_dict)."""
    state, params = read_snapshot(path)
    offset = _HEADER.size + 24 * state.grid.n
    with open(path, "rb") as fh:
        fh.seek(offset)
        trailer = fh.read()
    if not trailer:
        raise SnapshotError(f"{path}: checkpoint has no options trailer")
    return state, params, json.loads(trailer.decode("utf-8"))
