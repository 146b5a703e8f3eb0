"""Command-line interface.

Subcommands: run, sweep, oracle (damping | elliptic | hardy), fit, envelope,
checkpoint-info.  Config keys are overridden with `--set section.key=value`.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import envelope as env
from . import harness, oracle
from .checkpoint import checkpoint_info
from .config import ConfigError, RunConfig, load_config
from .diagnostics import fit_decay
from .harness import EXIT_CONFIG
from .spectral import GridSpec, PhysicalField, SpectralField, forward_transform


def _parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _geometric_times(lo: float, hi: float, factor: float = 2.0) -> list[float]:
    out = [lo]
    while out[-1] * factor <= hi * (1 + 1e-12):
        out.append(out[-1] * factor)
    return out


def _emit(rows: list[dict], path: str | None) -> None:
    text = "".join(json.dumps(r) + "\n" for r in rows)
    if path:
        with open(path, "w") as stream:
            stream.write(text)
    else:
        sys.stdout.write(text)


def _gaussian_single_mode(grid: GridSpec) -> SpectralField:
    values = np.sin(grid.x_mesh) * np.exp(-grid.y_mesh**2)
    w = forward_transform(PhysicalField(grid, values))
    w.coef[0, 0] = 0.0
    return w


def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args.set)
    result = harness.run(cfg, resume_from=args.resume)
    print(json.dumps({"exit_code": result.exit_code, "reason": result.reason}))
    return result.exit_code


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, args.set)
    table = harness.sweep(
        cfg,
        epsilons=_parse_floats(args.epsilons),
        s_values=_parse_floats(args.s),
        out_dir=args.out,
        parallel=not args.serial,
        stop_after_growth=args.stop_after_growth,
    )
    print(json.dumps(table["slopes"], indent=2))
    return 0


def _oracle_grid(args: argparse.Namespace) -> GridSpec:
    return GridSpec(args.nx, args.ny, args.ly)


def cmd_oracle_damping(args: argparse.Namespace) -> int:
    grid = _oracle_grid(args)
    w = _gaussian_single_mode(grid)
    t_values = _parse_floats(args.t) if args.t else _geometric_times(1.0, 1024.0)
    rows = []
    for t in t_values:
        value = oracle.damping_norm(w, t, args.s)
        ratio = oracle.damping_bound_ratio(w, t, args.s)
        rows.append(
            {"kind": "damping", "s": args.s, "t": t, "value": value, "bound_ratio": ratio}
        )
    _emit(rows, args.out)
    return 0


def cmd_oracle_elliptic(args: argparse.Namespace) -> int:
    grid = _oracle_grid(args)
    t_values = _parse_floats(args.t) if args.t else _geometric_times(1.0, 1024.0)
    report = oracle.elliptic_symbol_check(grid, args.s1, args.s2, t_values)
    rows = [
        {
            "kind": "elliptic",
            "s1": args.s1,
            "s2": args.s2,
            "t": t,
            "sup_ratio": sup,
            "normalized_sup": norm,
        }
        for t, sup, norm in zip(report.t_values, report.sup_ratio, report.normalized_sup)
    ]
    rows.append(
        {"kind": "elliptic_summary", "s1": args.s1, "s2": args.s2,
         "max_normalized": report.max_normalized}
    )
    _emit(rows, args.out)
    return 0


def random_hardy_profile(grid: GridSpec, seed: int) -> SpectralField:
    """Seeded x-independent profile with exactly zero integral.

    Built as d_Y of a localized random function, so the mean vanishes by
    construction and the profile stays inside the Y-domain.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    width = rng.uniform(0.8, 2.5)
    shift = rng.uniform(-0.2 * grid.ly, 0.2 * grid.ly)
    n_modes = int(rng.integers(2, 8))
    amps = rng.normal(size=n_modes)
    phases = rng.uniform(0, 2 * np.pi, size=n_modes)
    y = grid.y_mesh
    h = np.zeros_like(y)
    for m in range(n_modes):
        h += amps[m] * np.cos((m + 1) * np.pi * y / grid.ly + phases[m])
    h *= np.exp(-(((y - shift) / width) ** 2))
    h_hat = forward_transform(PhysicalField(grid, h))
    g = SpectralField(grid, 1j * grid.xi_mesh * h_hat.coef)
    g.coef[1:, :] = 0.0  # keep only the x-independent part
    g.coef[:, grid.ny // 2] = 0.0  # the derivative cannot keep Nyquist symmetric
    return g


def cmd_oracle_hardy(args: argparse.Namespace) -> int:
    grid = _oracle_grid(args)
    rows = []
    ratios = []
    for i in range(args.seeds):
        w = random_hardy_profile(grid, args.seed0 + i)
        lhs, rhs = oracle.zero_mode_hardy_check(w)
        ratio = lhs / rhs if rhs > 0 else 0.0
        ratios.append(ratio)
        rows.append(
            {"kind": "hardy", "seed": args.seed0 + i, "lhs": lhs, "rhs": rhs, "ratio": ratio}
        )
    ratios_arr = np.array(ratios)
    rows.append(
        {
            "kind": "hardy_summary",
            "n": args.seeds,
            "max_ratio": float(ratios_arr.max()),
            "median_ratio": float(np.median(ratios_arr)),
            "max_over_median": float(ratios_arr.max() / np.median(ratios_arr)),
        }
    )
    _emit(rows, args.out)
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    lo, hi = _parse_floats(args.window)
    series = []
    with open(args.ndjson) as stream:
        for line in stream:
            if not line.strip():
                continue
            row = json.loads(line)
            series.append((row["t"], row[args.field]))
    fit = fit_decay(series, (lo, hi))
    print(json.dumps({"field": args.field, **fit.to_dict()}, indent=2))
    return 0


def cmd_envelope(args: argparse.Namespace) -> int:
    rows = []
    with open(args.ndjson) as stream:
        for line in stream:
            if line.strip():
                rows.append(json.loads(line))
    from .diagnostics import DiagnosticsRecord

    fields = {f.name for f in __import__("dataclasses").fields(DiagnosticsRecord)}
    history = [DiagnosticsRecord(**{k: r[k] for k in fields}) for r in rows]
    params = env.EnvelopeParams(s=args.s, epsilon=args.epsilon, delta=args.delta, c_s=args.c_s)
    fitted = env.fit_gronwall_constant(history, params)
    params.C_s = fitted
    n0 = history[0].bar_hs
    out = {
        "s": args.s,
        "epsilon": args.epsilon,
        "beta_s": params.beta_s,
        "delta_s": params.delta_s,
        "fitted_C": fitted,
        "predicted_lifespan": env.predicted_lifespan(params),
        "envelope_blowup_time": env.envelope_blowup_time(params, n0)
        if fitted > 0
        else None,
        "initial_bar_hs": n0,
        "max_bar_hs": max(r.bar_hs for r in history),
        "three_epsilon": 3.0 * args.epsilon,
        "within_three_epsilon": max(r.bar_hs for r in history) <= 3.0 * args.epsilon,
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_checkpoint_info(args: argparse.Namespace) -> int:
    print(json.dumps(checkpoint_info(args.file), indent=2))
    return 0


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    defaults = RunConfig().grid
    p.add_argument("--nx", type=int, default=defaults.nx)
    p.add_argument("--ny", type=int, default=defaults.ny)
    p.add_argument("--ly", type=float, default=defaults.ly)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sheardamp",
        description="Shear-frame 2D Euler simulator and damping verification suite",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate one configuration")
    p_run.add_argument("config")
    p_run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p_run.add_argument("--resume", default=None, metavar="CHECKPOINT")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run an (epsilon, s) parameter sweep")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--epsilons", required=True)
    p_sweep.add_argument("--s", required=True)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p_sweep.add_argument("--serial", action="store_true")
    p_sweep.add_argument("--stop-after-growth", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="frozen-time lemma checks")
    osub = p_oracle.add_subparsers(dest="oracle_kind", required=True)

    p_damp = osub.add_parser("damping")
    p_damp.add_argument("--s", type=float, required=True)
    p_damp.add_argument("--t", default=None, help="comma-separated times")
    p_damp.add_argument("--out", default=None)
    _add_grid_args(p_damp)
    p_damp.set_defaults(func=cmd_oracle_damping)

    p_ell = osub.add_parser("elliptic")
    p_ell.add_argument("--s1", type=float, required=True)
    p_ell.add_argument("--s2", type=float, required=True)
    p_ell.add_argument("--t", default=None, help="comma-separated times")
    p_ell.add_argument("--out", default=None)
    _add_grid_args(p_ell)
    p_ell.set_defaults(func=cmd_oracle_elliptic)

    p_hardy = osub.add_parser("hardy")
    p_hardy.add_argument("--seeds", type=int, default=100)
    p_hardy.add_argument("--seed0", type=int, default=0)
    p_hardy.add_argument("--out", default=None)
    _add_grid_args(p_hardy)
    p_hardy.set_defaults(func=cmd_oracle_hardy)

    p_fit = sub.add_parser("fit", help="fit a decay exponent from NDJSON output")
    p_fit.add_argument("ndjson")
    p_fit.add_argument("--field", required=True)
    p_fit.add_argument("--window", required=True, metavar="TMIN,TMAX")
    p_fit.set_defaults(func=cmd_fit)

    p_env = sub.add_parser("envelope", help="fit the growth envelope to a run")
    p_env.add_argument("ndjson")
    p_env.add_argument("--s", type=float, required=True)
    p_env.add_argument("--epsilon", type=float, required=True)
    p_env.add_argument("--delta", type=float, default=0.1)
    p_env.add_argument("--c-s", dest="c_s", type=float, default=1.0)
    p_env.set_defaults(func=cmd_envelope)

    p_ck = sub.add_parser("checkpoint-info", help="print a checkpoint header")
    p_ck.add_argument("file")
    p_ck.set_defaults(func=cmd_checkpoint_info)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
