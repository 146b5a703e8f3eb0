"""The three figure kinds: decay curves, envelope overlay, lifespan scaling.

Every renderer returns the fitted quantities it annotated, so callers and
tests can assert on numbers instead of pixels.  Output is deterministic for
identical inputs: fixed style, fixed dpi, no timestamps in image metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import series
from .spec import PlotSpec, PlotSpecError

_STYLE = {
    "figure.figsize": (6.4, 4.4),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
    "svg.hashsalt": "sheardamp-plots",
}


@dataclass
class RenderResult:
    output: str
    fits: dict[str, float] = field(default_factory=dict)
    annotations: list[str] = field(default_factory=list)


def _save(fig, output: str) -> None:
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if path.suffix == ".svg" else None
    fig.savefig(path, metadata=metadata)
    plt.close(fig)


def _reference_line(ax, t, anchor_v, anchor_t, slope, label):
    ax.plot(t, anchor_v * (t / anchor_t) ** slope, "k--", lw=0.9, alpha=0.7,
            label=label)


def plot_decay(spec: PlotSpec) -> RenderResult:
    """Log-log velocity-norm decay with fitted and reference slopes."""
    rows = series.read_ndjson(spec.inputs[0])
    t_all = series.column(rows, "t")
    s = series.metadata_value(rows, "s", spec.s)

    result = RenderResult(output=spec.output)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        t_ref = None
        for name in spec.fields:
            v_all = series.column(rows, name)
            t, v = series.windowed(t_all, v_all, spec.window)
            slope, _ = series.loglog_fit(t, v)
            result.fits[name] = slope
            label = f"{name}: fit {slope:+.2f}"
            result.annotations.append(label)
            ax.loglog(t, v, "o-", ms=2.5, lw=1.0, label=label)
            if t_ref is None:
                t_ref, v_ref = t, v
        for ref_slope in (-1.0, -min(2.0, s)):
            _reference_line(ax, t_ref, v_ref[0], t_ref[0], ref_slope,
                            f"reference slope {ref_slope:+.2f}")
        ax.set_xlabel("t")
        ax.set_ylabel("velocity norm")
        ax.set_title("velocity decay (log-log)")
        ax.legend(fontsize=8)
        _save(fig, spec.output)
    return result


def plot_envelope(spec: PlotSpec) -> RenderResult:
    """Measured weighted norm against the fitted growth envelope and 3*eps."""
    rows = series.read_ndjson(spec.inputs[0])
    t = series.column(rows, "t")
    v = series.column(rows, "bar_hs")
    if len(t) < 8:
        raise PlotSpecError(f"need at least 8 samples, got {len(t)}")
    if np.all(v == 0):
        raise PlotSpecError("history is identically zero; nothing to envelope")
    s = series.metadata_value(rows, "s", spec.s)
    epsilon = series.metadata_value(rows, "epsilon", spec.epsilon)
    beta = series.growth_exponent(s, spec.delta)

    c_fit = series.fit_envelope_constant(t, v, beta)
    t_curve = np.linspace(t[0], t[-1], 400)
    env = series.envelope_curve(t_curve, v[0], c_fit, beta)

    result = RenderResult(output=spec.output, fits={"C": c_fit})
    label = f"envelope, fitted C = {c_fit:.3g}"
    result.annotations.append(label)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot(t, v, "o", ms=2.5, label="measured weighted norm")
        finite = np.isfinite(env)
        ax.plot(t_curve[finite], env[finite], "-", lw=1.2, label=label)
        ax.axhline(3 * epsilon, color="k", ls=":", lw=1.0,
                   label=f"3*epsilon = {3 * epsilon:g}")
        ax.set_xlabel("t")
        ax.set_ylabel("weighted norm")
        ax.set_title(f"norm history vs envelope (s = {s:g})")
        ax.legend(fontsize=8)
        _save(fig, spec.output)
    return result


def plot_lifespan(spec: PlotSpec) -> RenderResult:
    """Log-log growth time against epsilon with the predicted reference slope."""
    rows = series.read_ndjson(spec.inputs[0])
    pts = [
        (float(r["epsilon"]), float(r["t_grow"]))
        for r in rows
        if r.get("t_grow") is not None and "epsilon" in r
    ]
    eps_values = sorted({p[0] for p in pts})
    if len(eps_values) < 3:
        raise PlotSpecError(
            f"lifespan scaling needs at least 3 epsilon values with a growth "
            f"time, got {len(eps_values)}"
        )
    s_meta = [r["s"] for r in rows if "s" in r]
    s = spec.s if spec.s is not None else float(s_meta[0]) if s_meta else None
    if s is None:
        raise PlotSpecError("cannot determine s: pass --set s=...")

    eps = np.array([p[0] for p in pts])
    t_grow = np.array([p[1] for p in pts])
    slope, intercept = series.loglog_fit(eps, t_grow)
    predicted = -series.lifespan_exponent(s, spec.delta)

    result = RenderResult(output=spec.output, fits={"slope": slope})
    label = f"fit {slope:+.2f}"
    result.annotations.append(label)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        order = np.argsort(eps)
        ax.loglog(eps[order], t_grow[order], "o-", ms=4, lw=1.0, label=label)
        _reference_line(ax, eps[order], t_grow[order][0], eps[order][0],
                        predicted, f"reference slope {predicted:+.2f}")
        ax.set_xlabel("epsilon")
        ax.set_ylabel("growth time")
        ax.set_title(f"lifespan scaling (s = {s:g})")
        ax.legend(fontsize=8)
        _save(fig, spec.output)
    return result


RENDERERS = {
    "decay": plot_decay,
    "envelope": plot_envelope,
    "lifespan": plot_lifespan,
}
