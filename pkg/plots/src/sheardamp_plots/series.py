"""NDJSON readers, log-log fitting, and the growth-envelope curve.

The envelope math mirrors the published exponent table so overlays can be
drawn from the time series alone: beta = 3-s on 1 < s < 2, 1+delta at s = 2,
1 on s > 2, with the certified-lifespan exponent 1/(1+beta) away from s = 2;
the integrated bound is 1/(N0^{-1} - C * I(t)) with
I(t) = integral_0^t (1+tau^2)^(beta/2) dtau = t * 2F1(1/2, -beta/2; 3/2; -t^2).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
from scipy.special import hyp2f1

from .spec import PlotSpecError


def read_ndjson(path: str | Path) -> list[dict]:
    rows = []
    with open(path) as stream:
        for line in stream:
            if line.strip():
                rows.append(json.loads(line))
    if not rows:
        raise PlotSpecError(f"no records in {path}")
    return rows


def column(rows: list[dict], name: str) -> np.ndarray:
    """Extract one field from every row; missing anywhere is an error."""
    missing = [i for i, r in enumerate(rows) if name not in r]
    if missing:
        raise PlotSpecError(
            f"field {name!r} missing from {len(missing)} record(s) "
            f"(first at line {missing[0] + 1})"
        )
    return np.array([r[name] for r in rows], dtype=np.float64)


def metadata_value(rows: list[dict], name: str, override: float | None) -> float:
    """Resolve a run parameter from the spec override or the row metadata."""
    if override is not None:
        return override
    values = {r[name] for r in rows if name in r}
    if len(values) == 1:
        return float(values.pop())
    raise PlotSpecError(
        f"cannot determine {name!r}: pass --set {name}=... "
        f"(rows carry {len(values)} distinct values)"
    )


def loglog_fit(t: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    """(slope, log-prefactor) of the least-squares line on (log t, log v)."""
    if np.any(t <= 0) or np.any(v <= 0):
        raise PlotSpecError("log-log fit requires positive t and values")
    slope, intercept = np.polyfit(np.log(t), np.log(v), 1)
    return float(slope), float(intercept)


def windowed(t: np.ndarray, v: np.ndarray, window: tuple[float, float] | None,
             min_samples: int = 8) -> tuple[np.ndarray, np.ndarray]:
    if window is None:
        window = (float(t.max()) / 10.0, float(t.max()))
    keep = (t >= window[0]) & (t <= window[1]) & (t > 0) & (v > 0)
    if int(keep.sum()) < min_samples:
        raise PlotSpecError(
            f"need at least {min_samples} positive samples in window {window}, "
            f"got {int(keep.sum())}"
        )
    return t[keep], v[keep]


def growth_exponent(s: float, delta: float) -> float:
    if s <= 1:
        raise PlotSpecError(f"exponent table requires s > 1, got {s}")
    if s < 2:
        return 3.0 - s
    if s == 2:
        return 1.0 + delta
    return 1.0


def lifespan_exponent(s: float, delta: float) -> float:
    return 1.0 / (1.0 + growth_exponent(s, delta))


def bracket_integral(t: np.ndarray, beta: float) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return t * hyp2f1(0.5, -beta / 2.0, 1.5, -(t * t))


def fit_envelope_constant(t: np.ndarray, v: np.ndarray, beta: float) -> float:
    """Least C >= 0 whose envelope from the first sample dominates them all."""
    if np.any(np.diff(t) <= 0):
        raise PlotSpecError("history must be strictly increasing in t")
    if np.any(v <= 0):
        raise PlotSpecError("envelope fit requires positive norm values")
    integral = bracket_integral(t, beta)
    implied = (1.0 / v[:-1] - 1.0 / v[1:]) / np.diff(integral)
    return float(max(0.0, np.max(implied)))


def envelope_curve(t: np.ndarray, n0: float, c: float, beta: float) -> np.ndarray:
    denom = 1.0 / n0 - c * bracket_integral(t, beta)
    out = np.full_like(denom, math.inf)
    good = denom > 0
    out[good] = 1.0 / denom[good]
    return out
