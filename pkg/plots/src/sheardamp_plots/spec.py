"""Plot specifications and the dotted-key option syntax of the solver CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

KINDS = ("decay", "envelope", "lifespan")

DEFAULT_DECAY_FIELDS = ("uy_l2", "ux_neq0_l2")


class PlotSpecError(ValueError):
    """Invalid plot specification or input data."""


@dataclass
class PlotSpec:
    """What to render: inputs, output image, kind, selectors, window."""

    inputs: list[str]
    output: str
    kind: str
    fields: tuple[str, ...] = DEFAULT_DECAY_FIELDS
    window: tuple[float, float] | None = None
    s: float | None = None
    epsilon: float | None = None
    delta: float = 0.1
    c_s: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotSpecError(f"unknown plot kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise PlotSpecError("at least one input path is required")
        if self.window is not None and not self.window[0] < self.window[1]:
            raise PlotSpecError(f"window must satisfy lo < hi, got {self.window}")


def apply_option(spec: PlotSpec, key: str, value: str) -> None:
    """Set one `key=value` option (the solver's dotted-key flag style)."""
    key = key.strip()
    if key == "window":
        lo, hi = (float(x) for x in value.split(","))
        spec.window = (lo, hi)
    elif key == "fields":
        spec.fields = tuple(x.strip() for x in value.split(",") if x.strip())
    elif key in ("s", "epsilon", "delta", "c_s"):
        setattr(spec, key, float(value))
    else:
        raise PlotSpecError(f"unknown plot option {key!r}")
