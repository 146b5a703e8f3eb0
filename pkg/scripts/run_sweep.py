#!/usr/bin/env python3
"""Lifespan sweep: multi-family seeded data, s = 3, epsilon in {0.4, 0.2, 0.1}.

Each cell runs to t = 500 (or until its growth marker fires, with
--stop-after-growth) and the aggregate reports the log-log slope of T_grow
against epsilon next to the predicted -1/2.
"""

import argparse
import json

from sheardamp.config import RunConfig
from sheardamp.harness import sweep


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--epsilons", default="0.4,0.2,0.1")
    parser.add_argument("--s", default="3.0")
    parser.add_argument("--out", default="runs/sweep")
    parser.add_argument("--stop-after-growth", action="store_true")
    parser.add_argument("--serial", action="store_true")
    args = parser.parse_args()

    cfg = RunConfig()
    cfg.init.family = "multi"
    cfg.sim.t_end = 500.0
    cfg.sim.dt = 0.1
    cfg.output.every_steps = 20
    table = sweep(
        cfg,
        epsilons=[float(x) for x in args.epsilons.split(",")],
        s_values=[float(x) for x in args.s.split(",")],
        out_dir=args.out,
        parallel=not args.serial,
        stop_after_growth=args.stop_after_growth,
    )
    for row in table["rows"]:
        print(f"eps={row['epsilon']:g} s={row['s']:g}: T_grow={row['t_grow']}, "
              f"exit={row['exit_code']}")
    print(json.dumps(table["slopes"], indent=2))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
