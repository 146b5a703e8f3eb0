"""Experiment orchestration: initial data, single runs, and parameter sweeps.

A run writes three artifacts into its output directory:

  diagnostics.ndjson   one JSON object per record (schema: DiagnosticsRecord
                       fields plus the run metadata keys "s" and "epsilon")
  checkpoint.bin       latest binary checkpoint, overwritten in place
  summary.json         final norms, exit status, T_grow, and decay fits

Exit codes: 0 completed, 2 guard abort (boundary or regime guard), 3
numerical failure (non-finite state), 4 configuration error.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .checkpoint import load_checkpoint, save_checkpoint
from .config import ConfigError, RunConfig
from .diagnostics import (
    BOUNDARY_THRESHOLD_DEFAULT,
    DiagnosticsRecord,
    boundary_guard,
    fit_decay,
    record,
    resolution_guard,
)
from .dynamics import BlowUpError, ShearFrameState, cfl_dt, linearize_flag, step_rk4
from .spectral import (
    GridSpec,
    PhysicalField,
    SpectralField,
    forward_transform,
    inverse_transform,
    sobolev_norm,
)

EXIT_OK = 0
EXIT_GUARD = 2
EXIT_NUMERICAL = 3
EXIT_CONFIG = 4

# Growth marker: first time bar_hs exceeds this factor times its initial value.
GROWTH_FACTOR = 1.1

# Extra geometric record cadence for log-log fitting (on top of every_steps).
GEO_FIRST_T = 1.0
GEO_RATIO = 1.25


def make_grid(cfg: RunConfig) -> GridSpec:
    g = cfg.grid
    return GridSpec(g.nx, g.ny, g.ly, g.dealias_fraction)


def make_initial_data(cfg: RunConfig) -> ShearFrameState:
    """Synthesize initial data obeying the size hypotheses.

    family "single": A * sin(X) * exp(-Y^2).
    family "multi":  random phases from a seeded Philox counter-based 64-bit
    generator on modes |k| <= kmax, |j| <= jmax (the k = 0 component has zero
    integral), amplitudes (1 + k^2 + xi^2)^(-slope/2), under a Gaussian
    Y-envelope.

    The amplitude A is fixed so max(||W0||_{H^s}, ||Y W0||_{L^2}) equals
    epsilon exactly, and the (0, 0) mode is zeroed.
    """
    grid = make_grid(cfg)
    init = cfg.init
    if init.family == "single":
        values = np.sin(grid.x_mesh) * np.exp(-grid.y_mesh**2)
        w_hat = forward_transform(PhysicalField(grid, values))
    elif init.family == "multi":
        kcut = grid.dealias_fraction * grid.nx / 2.0
        jcut = grid.dealias_fraction * grid.ny / 2.0
        if init.kmax > kcut or init.jmax > jcut:
            raise ConfigError(
                f"init modes (kmax={init.kmax}, jmax={init.jmax}) extend beyond "
                f"the dealias region (|k| <= {kcut:.1f}, |j| <= {jcut:.1f})"
            )
        rng = np.random.Generator(np.random.Philox(key=init.seed))
        coef = np.zeros(grid.shape, dtype=np.complex128)
        # Half lattice (k > 0, any j) plus (k = 0, j > 0); the mirror modes
        # are conjugates, so the field is real. Fixed iteration order keeps
        # the draw sequence reproducible.
        half: list[tuple[int, int]] = [
            (0, j) for j in range(1, init.jmax + 1)
        ] + [
            (k, j)
            for k in range(1, init.kmax + 1)
            for j in range(-init.jmax, init.jmax + 1)
        ]
        for k, j in half:
            xi = np.pi * j / grid.ly
            amp = (1.0 + k * k + xi * xi) ** (-init.spectral_slope / 2.0)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            c = 0.5 * amp * np.exp(1j * phase)
            coef[k % grid.nx, j % grid.ny] = c
            coef[(-k) % grid.nx, (-j) % grid.ny] = np.conj(c)
        rough = SpectralField(grid, coef)
        env = np.exp(-grid.y_mesh**2)
        enveloped = inverse_transform(rough).values * env
        # Remove the mean with a localized profile: a flat shift would park
        # mass at the Y-boundary and trip the boundary guard.
        enveloped -= np.sum(enveloped) / np.sum(env) * env
        w_hat = forward_transform(PhysicalField(grid, enveloped))
    else:
        raise ConfigError(f"unknown init family {init.family!r}")

    w_hat.coef[0, 0] = 0.0
    hs = sobolev_norm(w_hat, cfg.sim.s, "inhomogeneous")
    w_phys = inverse_transform(w_hat).values
    yw = float(np.sqrt(grid.dx * grid.dy * np.sum((grid.y_mesh * w_phys) ** 2)))
    binding = max(hs, yw)
    scale = cfg.sim.epsilon / binding if binding > 0 else 0.0
    w_hat.coef *= scale
    return ShearFrameState(t=0.0, w_hat=w_hat)


@dataclass
class RunResult:
    exit_code: int
    reason: str
    records: list[DiagnosticsRecord]
    t_grow: float | None
    summary: dict

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK


def _maybe_fit(records: list[DiagnosticsRecord], field: str, t_end: float):
    """Decay fit over the default window [t_end/10, t_end]; None if not fittable."""
    series = [(r.t, getattr(r, field)) for r in records]
    try:
        return fit_decay(series, (t_end / 10.0, t_end))
    except ValueError:
        return None


def run(
    cfg: RunConfig,
    resume_from: str | Path | None = None,
    stop_after_growth: bool = False,
    boundary_threshold: float = BOUNDARY_THRESHOLD_DEFAULT,
) -> RunResult:
    """Step to t_end (or abort), writing diagnostics and checkpoints.

    With stop_after_growth the run ends early once the growth marker T_grow
    has been recorded (used by lifespan sweeps, where nothing after the
    marker is consumed).
    """
    try:
        cfg.validate()
    except ConfigError:
        raise

    sim = cfg.sim
    out_dir = Path(cfg.output.path)
    out_dir.mkdir(parents=True, exist_ok=True)
    ndjson_path = out_dir / "diagnostics.ndjson"
    ckpt_path = out_dir / "checkpoint.bin"

    if resume_from is not None:
        state, ck_s, ck_eps = load_checkpoint(resume_from, cfg.grid.dealias_fraction)
        if (state.grid.nx, state.grid.ny) != (cfg.grid.nx, cfg.grid.ny):
            raise ConfigError("checkpoint grid does not match configuration")
        if not math.isclose(state.grid.ly, cfg.grid.ly, rel_tol=1e-12):
            raise ConfigError("checkpoint ly does not match configuration")
        if not math.isclose(ck_s, sim.s) or not math.isclose(ck_eps, sim.epsilon):
            raise ConfigError("checkpoint (s, epsilon) do not match configuration")
        # Blob layout has no step counter; with a fixed dt the count is t/dt.
        state.step_count = int(round(state.t / sim.dt))
        mode = "a"
    else:
        state = make_initial_data(cfg)
        mode = "w"
    linearize_flag(state, sim.linear_mode)

    records: list[DiagnosticsRecord] = []
    exit_code = EXIT_OK
    reason = "completed"
    t_grow: float | None = None
    bar0: float | None = None
    next_geo = GEO_FIRST_T
    while next_geo <= state.t:
        next_geo *= GEO_RATIO
    started = time.monotonic()

    with open(ndjson_path, mode) as stream:

        def emit(rec: DiagnosticsRecord) -> None:
            records.append(rec)
            row = rec.to_dict()
            row["s"] = sim.s
            row["epsilon"] = sim.epsilon
            stream.write(json.dumps(row) + "\n")

        def check_guards(rec: DiagnosticsRecord) -> str | None:
            if boundary_guard(rec, boundary_threshold) == "violated":
                return (
                    f"boundary guard: fraction {rec.boundary_frac:.3e} exceeds "
                    f"{boundary_threshold:.1e} (Y-domain too small for the data)"
                )
            if resolution_guard(state, sim.s, sim.epsilon) == "violated":
                return (
                    f"regime guard: H^s norm {rec.hs:.3e} or spectral tail left "
                    "the certified range (blow-up or underresolution)"
                )
            return None

        rec = record(state, sim.s, dt_used=0.0)
        bar0 = rec.bar_hs
        emit(rec)
        guard_msg = check_guards(rec)
        if guard_msg is not None:
            exit_code, reason = EXIT_GUARD, guard_msg

        while exit_code == EXIT_OK and state.t < sim.t_end - 1e-12:
            dt = sim.dt
            if sim.cfl:
                dt = min(dt, cfl_dt(state))
            dt = min(dt, sim.t_end - state.t)
            try:
                state = step_rk4(state, dt)
            except BlowUpError as exc:
                state = exc.last_state
                exit_code, reason = EXIT_NUMERICAL, str(exc)
                break

            due = (
                state.step_count % cfg.output.every_steps == 0
                or state.t >= next_geo
                or state.t >= sim.t_end - 1e-12
            )
            if due:
                while next_geo <= state.t:
                    next_geo *= GEO_RATIO
                rec = record(state, sim.s, dt_used=dt)
                emit(rec)
                if t_grow is None and bar0 > 0 and rec.bar_hs > GROWTH_FACTOR * bar0:
                    t_grow = rec.t
                    if stop_after_growth:
                        reason = "stopped after growth marker"
                        break
                guard_msg = check_guards(rec)
                if guard_msg is not None:
                    exit_code, reason = EXIT_GUARD, guard_msg
            if state.step_count % cfg.output.checkpoint_every == 0:
                save_checkpoint(ckpt_path, state, sim.s, sim.epsilon)

    save_checkpoint(ckpt_path, state, sim.s, sim.epsilon)

    fits = {}
    for field in ("uy_l2", "ux_neq0_l2"):
        fit = _maybe_fit(records, field, sim.t_end)
        fits[field] = fit.to_dict() if fit is not None else None

    summary = {
        "config": cfg.to_flat_dict(),
        "exit_code": exit_code,
        "reason": reason,
        "t_final": state.t,
        "steps": state.step_count,
        "t_grow": t_grow,
        "initial_bar_hs": bar0,
        "final": records[-1].to_dict() if records else None,
        "max_hs": max((r.hs for r in records), default=0.0),
        "l2_drift": (
            abs(records[-1].l2 - records[0].l2) / records[0].l2
            if records and records[0].l2 > 0
            else 0.0
        ),
        "fits": fits,
        "wall_seconds": time.monotonic() - started,
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return RunResult(exit_code, reason, records, t_grow, summary)


def _sweep_cell(args: tuple[RunConfig, float, float, str, bool]) -> dict:
    cfg_template, eps, s, out_dir, stop_after_growth = args
    cfg = cfg_template.copy()
    cfg.sim.epsilon = eps
    cfg.sim.s = s
    cfg.output.path = str(Path(out_dir) / f"eps{eps:g}_s{s:g}")
    row = {"epsilon": eps, "s": s}
    try:
        result = run(cfg, stop_after_growth=stop_after_growth)
        row.update(
            exit_code=result.exit_code,
            reason=result.reason,
            t_grow=result.t_grow,
            t_final=result.summary["t_final"],
            max_hs=result.summary["max_hs"],
            fits=result.summary["fits"],
        )
    except Exception as exc:  # per-cell isolation: one failure must not kill the sweep
        row.update(exit_code=EXIT_NUMERICAL, reason=f"cell failed: {exc}", t_grow=None)
    return row


def sweep(
    cfg_template: RunConfig,
    epsilons: list[float],
    s_values: list[float],
    out_dir: str | Path | None = None,
    parallel: bool = True,
    stop_after_growth: bool = False,
) -> dict:
    """Run every (epsilon, s) cell independently and aggregate a lifespan table.

    Cells are isolated (own state, own output directory) and may run
    concurrently.  The summary reports, per s, the log-log slope of T_grow
    against epsilon for comparison with the predicted -delta_s.
    """
    if not epsilons or not s_values:
        raise ConfigError("sweep requires nonempty epsilon and s lists")
    out_dir = Path(out_dir) if out_dir is not None else Path(cfg_template.output.path)
    out_dir.mkdir(parents=True, exist_ok=True)

    cells = [
        (cfg_template, float(eps), float(s), str(out_dir), stop_after_growth)
        for s in s_values
        for eps in epsilons
    ]
    if parallel and len(cells) > 1:
        with ProcessPoolExecutor() as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(cell) for cell in cells]

    slopes = {}
    for s in s_values:
        pts = [
            (r["epsilon"], r["t_grow"])
            for r in rows
            if r["s"] == s and r.get("t_grow") is not None
        ]
        if len(pts) >= 2:
            eps_arr = np.log([p[0] for p in pts])
            tg_arr = np.log([p[1] for p in pts])
            slope = float(np.polyfit(eps_arr, tg_arr, 1)[0])
        else:
            slope = None
        from .envelope import exponents

        slopes[f"{s:g}"] = {
            "t_grow_vs_eps_slope": slope,
            "predicted_slope": -exponents(s)[1],
            "n_points": len(pts),
        }

    table = {"rows": rows, "slopes": slopes}
    with open(out_dir / "sweep_cells.ndjson", "w") as stream:
        for row in rows:
            stream.write(json.dumps(row) + "\n")
    (out_dir / "sweep_summary.json").write_text(json.dumps(table, indent=2) + "\n")
    return table
