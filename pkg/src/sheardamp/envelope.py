"""Growth exponents, certified lifespan, and the Gronwall envelope.

The a priori estimate d||W||/dt <= C * <t>^beta * ||W||^2 in the weighted
norm ||f|| = ||f||_{H^s} + ||Y f||_{L^2} integrates in closed form to

    ||W(t)|| <= 1 / (N0^{-1} - C * I(t)),    I(t) = int_0^t <tau>^beta dtau,

which blows up when C * I(t) reaches N0^{-1}.  The growth exponent beta and
the lifespan exponent come in three regularity regimes:

    1 < s < 2:  beta = 3 - s,      lifespan exponent 1/(4 - s)
    s = 2:      beta = 1 + delta,  lifespan exponent 1/(2 + delta)
    s > 2:      beta = 1,          lifespan exponent 1/2

and satisfy 1 + beta = 1/exponent away from s = 2.  I(t) is evaluated with
the hypergeometric identity I(t) = t * 2F1(1/2, -beta/2; 3/2; -t^2) rather
than the large-t shorthand t^{1+beta}, so the envelope is exact and monotone
down to t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.special import hyp2f1

if TYPE_CHECKING:
    from .diagnostics import DiagnosticsRecord

DELTA_DEFAULT = 0.1
C_S_DEFAULT = 1.0


def exponents(s: float, delta: float = DELTA_DEFAULT) -> tuple[float, float]:
    """(growth exponent beta_s, lifespan exponent delta_s) for regularity s."""
    if s <= 1:
        raise ValueError(f"exponent table requires s > 1, got s={s}")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if s < 2:
        return 3.0 - s, 1.0 / (4.0 - s)
    if s == 2:
        return 1.0 + delta, 1.0 / (2.0 + delta)
    return 1.0, 0.5


@dataclass
class EnvelopeParams:
    """Exponents and constants of the certified-growth envelope."""

    s: float
    epsilon: float
    delta: float = DELTA_DEFAULT
    c_s: float = C_S_DEFAULT
    C_s: float = 1.0
    beta_s: float = field(init=False)
    delta_s: float = field(init=False)

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.c_s <= 0:
            raise ValueError(f"c_s must be positive, got {self.c_s}")
        if self.C_s < 0:
            raise ValueError(f"C_s must be nonnegative, got {self.C_s}")
        self.beta_s, self.delta_s = exponents(self.s, self.delta)


def bracket_integral(t: float, beta: float) -> float:
    """I(t) = int_0^t (1 + tau^2)^(beta/2) dtau, in closed form."""
    if t < 0:
        raise ValueError(f"integral defined for t >= 0, got {t}")
    return float(t * hyp2f1(0.5, -beta / 2.0, 1.5, -t * t))


def predicted_lifespan(p: EnvelopeParams) -> float:
    """Certified horizon c_s * epsilon^(-delta_s)."""
    return p.c_s * p.epsilon ** (-p.delta_s)


def envelope_norm(t: float, p: EnvelopeParams, N0: float) -> float:
    """Envelope value 1 / (N0^{-1} - C_s * I(t)); +inf past its blow-up time."""
    if N0 <= 0:
        raise ValueError(f"initial norm must be positive, got {N0}")
    denom = 1.0 / N0 - p.C_s * bracket_integral(t, p.beta_s)
    if denom <= 0:
        return math.inf
    return 1.0 / denom


def envelope_blowup_time(p: EnvelopeParams, N0: float, t_max: float = 1e9) -> float:
    """First t at which the envelope denominator hits zero (inf if beyond t_max)."""
    from scipy.optimize import brentq

    if N0 <= 0:
        raise ValueError(f"initial norm must be positive, got {N0}")
    if p.C_s == 0:
        return math.inf
    target = 1.0 / N0

    def denom_gap(t: float) -> float:
        return target - p.C_s * bracket_integral(t, p.beta_s)

    if denom_gap(t_max) > 0:
        return math.inf
    return float(brentq(denom_gap, 0.0, t_max, xtol=1e-12, rtol=1e-14))


def fit_gronwall_constant(
    history: Sequence["DiagnosticsRecord"], p: EnvelopeParams
) -> float:
    """Smallest C >= 0 whose envelope dominates the measured weighted norm.

    Each consecutive sample pair implies a constant via the integrated
    inequality 1/v_i - 1/v_{i+1} <= C * (I(t_{i+1}) - I(t_i)); the maximum
    over pairs is the least C whose envelope, started from the first sample,
    dominates every sample.
    """
    if len(history) < 8:
        raise ValueError(f"need at least 8 samples, got {len(history)}")
    t = np.array([rec.t for rec in history], dtype=np.float64)
    v = np.array([rec.bar_hs for rec in history], dtype=np.float64)
    if np.any(np.diff(t) <= 0):
        raise ValueError("history must be strictly increasing in t")
    if np.any(v <= 0):
        raise ValueError("weighted norm history must be positive")
    integral = t * hyp2f1(0.5, -p.beta_s / 2.0, 1.5, -(t * t))
    implied = (1.0 / v[:-1] - 1.0 / v[1:]) / np.diff(integral)
    return float(max(0.0, np.max(implied)))
