#!/usr/bin/env python3
"""Render the three figure kinds from existing run/sweep artifacts.

Requires the plots package (pip install -e plots) and the outputs of
scripts/run_reference.py and scripts/run_sweep.py.
"""

import sys
from pathlib import Path

try:
    from sheardamp_plots.cli import main as plots_main
except ImportError:
    sys.exit("plots package not installed: pip install -e plots --no-build-isolation")


def main() -> int:
    ref = Path("runs/reference/diagnostics.ndjson")
    swp = Path("runs/sweep/sweep_cells.ndjson")
    out = Path("figures")
    out.mkdir(exist_ok=True)
    if ref.exists():
        plots_main(["decay", "--input", str(ref), "--out", str(out / "decay.png"),
                    "--set", "s=3", "--set", "window=10,100"])
        plots_main(["envelope", "--input", str(ref), "--out", str(out / "envelope.png"),
                    "--set", "s=3", "--set", "epsilon=0.05"])
        print(f"decay + envelope figures -> {out}/")
    else:
        print(f"missing {ref}; run scripts/run_reference.py first")
    if swp.exists():
        plots_main(["lifespan", "--input", str(swp), "--out", str(out / "lifespan.png"),
                    "--set", "s=3"])
        print(f"lifespan figure -> {out}/")
    else:
        print(f"missing {swp}; run scripts/run_sweep.py first")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
