import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from sheardamp.diagnostics import DiagnosticsRecord
from sheardamp.envelope import (
    EnvelopeParams,
    bracket_integral,
    envelope_blowup_time,
    envelope_norm,
    exponents,
    fit_gronwall_constant,
    predicted_lifespan,
)


def make_history(ts, values):
    return [
        DiagnosticsRecord(
            t=t, l2=v, hs=v, yw_l2=0.0, bar_hs=v, ux_neq0_l2=0.0, uy_l2=0.0,
            dt_used=0.1, boundary_frac=0.0, step_count=i,
        )
        for i, (t, v) in enumerate(zip(ts, values))
    ]


class TestExponents:
    def test_table_values(self):
        assert exponents(3.0) == (1.0, 0.5)
        assert exponents(1.5) == (1.5, pytest.approx(0.4))
        beta, delta_s = exponents(2.0, 0.1)
        assert beta == pytest.approx(1.1)
        assert delta_s == pytest.approx(1 / 2.1)

    def test_low_regularity_limit(self):
        # lifespan exponent tends to 1/3 as s -> 1+
        assert exponents(1.0 + 1e-9)[1] == pytest.approx(1.0 / 3.0, rel=1e-8)

    def test_below_threshold_rejected(self):
        for s in (1.0, 0.5, -2.0):
            with pytest.raises(ValueError, match="s > 1"):
                exponents(s)

    @given(s=st.floats(1.0001, 6.0).filter(lambda v: abs(v - 2.0) > 1e-6))
    @settings(max_examples=100, deadline=None)
    def test_consistency_identity(self, s):
        beta, delta_s = exponents(s)
        assert 1.0 + beta == pytest.approx(1.0 / delta_s, rel=1e-12)

    def test_consistency_at_s2(self):
        delta = 0.37
        beta, delta_s = exponents(2.0, delta)
        assert 1.0 + beta == pytest.approx(2.0 + delta) == pytest.approx(1.0 / delta_s)


class TestPredictedLifespan:
    def test_examples(self):
        assert predicted_lifespan(EnvelopeParams(s=3.0, epsilon=1e-2)) == pytest.approx(10.0)
        assert predicted_lifespan(EnvelopeParams(s=3.0, epsilon=1.0)) == pytest.approx(1.0)
        p = EnvelopeParams(s=3.0, epsilon=1e-2, c_s=2.5)
        assert predicted_lifespan(p) == pytest.approx(25.0)

    @given(
        s=st.floats(1.01, 5.0).filter(lambda v: abs(v - 2.0) > 1e-6),
        e1=st.floats(1e-4, 0.9),
        e2=st.floats(1e-4, 0.9),
    )
    @settings(max_examples=50, deadline=None)
    def test_strictly_decreasing_in_epsilon(self, s, e1, e2):
        if abs(e1 - e2) < 1e-12:
            return
        lo, hi = sorted((e1, e2))
        t_lo = predicted_lifespan(EnvelopeParams(s=s, epsilon=lo))
        t_hi = predicted_lifespan(EnvelopeParams(s=s, epsilon=hi))
        assert t_lo > t_hi


class TestBracketIntegral:
    @pytest.mark.parametrize("beta", [0.3, 1.0, 1.1, 1.5, 2.0])
    @pytest.mark.parametrize("t", [0.0, 0.7, 4.0, 100.0])
    def test_against_quadrature(self, beta, t):
        expected = quad(lambda u: (1 + u * u) ** (beta / 2), 0, t, limit=200)[0]
        assert bracket_integral(t, beta) == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_beta_one_elementary_form(self):
        # independent closed form: (t*sqrt(1+t^2) + asinh t)/2
        for t in (0.5, 2.0, 10.0):
            elem = 0.5 * (t * math.sqrt(1 + t * t) + math.asinh(t))
            assert bracket_integral(t, 1.0) == pytest.approx(elem, rel=1e-12)


class TestEnvelopeNorm:
    def test_initial_value(self):
        p = EnvelopeParams(s=3.0, epsilon=0.05, C_s=2.0)
        assert envelope_norm(0.0, p, 0.1) == pytest.approx(0.1)

    def test_zero_constant_is_flat(self):
        p = EnvelopeParams(s=3.0, epsilon=0.05, C_s=0.0)
        for t in (0.0, 5.0, 500.0):
            assert envelope_norm(t, p, 0.07) == pytest.approx(0.07)

    def test_blowup_time_root(self):
        # beta = 1, N0 = 0.1, C = 1: denominator zero when I(t) = 10; the
        # elementary form of I gives an independent target for the root.
        p = EnvelopeParams(s=3.0, epsilon=0.05, C_s=1.0)
        t_star = envelope_blowup_time(p, 0.1)
        elem = 0.5 * (t_star * math.sqrt(1 + t_star**2) + math.asinh(t_star))
        assert elem == pytest.approx(10.0, rel=1e-9)
        assert 0 < t_star < math.inf
        assert envelope_norm(t_star - 1e-3, p, 0.1) < math.inf
        assert envelope_norm(t_star + 1e-3, p, 0.1) == math.inf

    @given(
        t1=st.floats(0.0, 50.0),
        t2=st.floats(0.0, 50.0),
        c1=st.floats(0.0, 2.0),
        c2=st.floats(0.0, 2.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_monotone_in_t_and_c(self, t1, t2, c1, c2):
        n0 = 0.05
        lo_t, hi_t = sorted((t1, t2))
        p = EnvelopeParams(s=1.7, epsilon=0.05, C_s=c1)
        assert envelope_norm(lo_t, p, n0) <= envelope_norm(hi_t, p, n0)
        lo_c, hi_c = sorted((c1, c2))
        p_lo = EnvelopeParams(s=1.7, epsilon=0.05, C_s=lo_c)
        p_hi = EnvelopeParams(s=1.7, epsilon=0.05, C_s=hi_c)
        assert envelope_norm(5.0, p_lo, n0) <= envelope_norm(5.0, p_hi, n0)

    def test_invalid_n0(self):
        p = EnvelopeParams(s=3.0, epsilon=0.05)
        with pytest.raises(ValueError):
            envelope_norm(1.0, p, 0.0)


class TestFitGronwallConstant:
    def test_constant_history_gives_zero(self):
        p = EnvelopeParams(s=3.0, epsilon=0.05)
        hist = make_history(np.linspace(0, 5, 10), [0.1] * 10)
        assert fit_gronwall_constant(hist, p) == 0.0

    def test_synthetic_inversion(self):
        c_true = 0.7
        p = EnvelopeParams(s=3.0, epsilon=0.05, C_s=c_true)
        ts = np.linspace(0.0, 4.0, 12)
        values = [envelope_norm(t, p, 0.1) for t in ts]
        assert all(v < math.inf for v in values)
        recovered = fit_gronwall_constant(make_history(ts, values), p)
        assert recovered == pytest.approx(c_true, abs=1e-6)

    def test_envelope_dominates_history(self):
        # by construction the fitted envelope dominates every sample
        p = EnvelopeParams(s=2.5, epsilon=0.1)
        ts = np.linspace(0.0, 3.0, 15)
        rng = np.random.default_rng(0)
        values = 0.1 * (1.0 + 0.3 * np.abs(np.cumsum(rng.normal(size=15))) / 10)
        hist = make_history(ts, values)
        c = fit_gronwall_constant(hist, p)
        p_fit = EnvelopeParams(s=2.5, epsilon=0.1, C_s=c)
        for t, v in zip(ts, values):
            assert envelope_norm(t, p_fit, values[0]) >= v * (1 - 1e-9)

    def test_decreasing_time_rejected(self):
        p = EnvelopeParams(s=3.0, epsilon=0.05)
        hist = make_history([0, 1, 2, 3, 4, 5, 7, 6], [0.1] * 8)
        with pytest.raises(ValueError, match="increasing"):
            fit_gronwall_constant(hist, p)

    def test_too_few_samples_rejected(self):
        p = EnvelopeParams(s=3.0, epsilon=0.05)
        with pytest.raises(ValueError, match="at least 8"):
            fit_gronwall_constant(make_history([0, 1], [0.1, 0.1]), p)


class TestEnvelopeParams:
    def test_exponents_are_derived(self):
        p = EnvelopeParams(s=1.5, epsilon=0.1)
        assert p.beta_s == pytest.approx(1.5)
        assert p.delta_s == pytest.approx(0.4)

    def test_invalid_s(self):
        with pytest.raises(ValueError):
            EnvelopeParams(s=0.9, epsilon=0.1)
