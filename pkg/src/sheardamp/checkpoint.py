"""Binary checkpoint blobs with a fixed little-endian layout.

Layout: magic "CDW1" (4 bytes), format version u32, nx u32, ny u32, ly f64,
t f64, s f64, epsilon f64, then nx*ny complex coefficients as interleaved
(re, im) f64 pairs in k-major row order.  Loading a saved state is
bit-identical.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .dynamics import ShearFrameState
from .spectral import GridSpec, SpectralField

MAGIC = b"CDW1"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIIdddd")


def save_checkpoint(
    path: str | Path, state: ShearFrameState, s: float, epsilon: float
) -> None:
    grid = state.grid
    header = _HEADER.pack(
        MAGIC, FORMAT_VERSION, grid.nx, grid.ny, grid.ly, state.t, s, epsilon
    )
    data = np.ascontiguousarray(state.w_hat.coef, dtype="<c16").tobytes()
    Path(path).write_bytes(header + data)


def checkpoint_info(path: str | Path) -> dict:
    """Parse and validate the header; returns its fields as a dict."""
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise ValueError(f"checkpoint file too short: {len(blob)} bytes")
    magic, version, nx, ny, ly, t, s, epsilon = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ValueError(f"bad checkpoint magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint version {version}")
    expected = _HEADER.size + nx * ny * 16
    if len(blob) != expected:
        raise ValueError(
            f"checkpoint size mismatch: {len(blob)} bytes, expected {expected}"
        )
    return {
        "version": version,
        "nx": nx,
        "ny": ny,
        "ly": ly,
        "t": t,
        "s": s,
        "epsilon": epsilon,
    }


def load_checkpoint(
    path: str | Path, dealias_fraction: float = 2.0 / 3.0
) -> tuple[ShearFrameState, float, float]:
    """Returns (state, s, epsilon).  The blob does not carry the dealias
    fraction or step count; callers resume cadence from t and the config."""
    info = checkpoint_info(path)
    blob = Path(path).read_bytes()
    coef = np.frombuffer(blob, dtype="<c16", offset=_HEADER.size).copy()
    grid = GridSpec(info["nx"], info["ny"], info["ly"], dealias_fraction)
    w_hat = SpectralField(grid, coef.reshape(info["nx"], info["ny"]))
    state = ShearFrameState(t=info["t"], w_hat=w_hat)
    return state, info["s"], info["epsilon"]
