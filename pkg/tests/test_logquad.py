import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotloc.errors import ConvergenceError
from rotloc.logquad import (
    LogValue, ScaledIntegrand, bessel_i0_prime_scaled, bessel_i0_scaled,
    integrate_scaled, integrate_scaled_info,
)

# |log_mag| <= ~35 here, so ulp-level log arithmetic stays below 1e-14 and
# the headline tolerances can be asserted as stated; a separate wide-range
# check covers extreme magnitudes at the correspondingly looser tolerance.
finite_floats = st.floats(
    min_value=1e-15, max_value=1e15, allow_nan=False, allow_infinity=False
)
signed_floats = st.one_of(finite_floats, finite_floats.map(lambda x: -x))
wide_floats = st.floats(
    min_value=1e-150, max_value=1e150, allow_nan=False, allow_infinity=False
)


class TestLogValue:
    def test_zero(self):
        z = LogValue.zero()
        assert z.sign == 0 and z.to_float() == 0.0
        assert (z + LogValue.from_float(2.0)).to_float() == 2.0
        assert (z * LogValue.from_float(2.0)).sign == 0

    @given(signed_floats)
    def test_float_round_trip(self, x):
        assert LogValue.from_float(x).to_float() == pytest.approx(x, rel=1e-14)

    @given(wide_floats)
    def test_float_round_trip_wide(self, x):
        # exp(log x) loses ~|log x| ulps; 1e-12 covers the 1e150 extremes
        assert LogValue.from_float(x).to_float() == pytest.approx(x, rel=1e-12)

    @given(signed_floats, signed_floats)
    @settings(max_examples=200)
    def test_mul_div_cancels(self, a, b):
        la, lb = LogValue.from_float(a), LogValue.from_float(b)
        back = (la * lb) / lb
        assert back.sign == la.sign
        assert back.log_mag == pytest.approx(la.log_mag, abs=1e-14)

    @given(signed_floats, signed_floats)
    @settings(max_examples=200)
    def test_addition_matches_max_plus_log1p(self, a, b):
        got = LogValue.from_float(a) + LogValue.from_float(b)
        s = a + b
        if s == 0.0:
            assert got.sign == 0
        else:
            big = max(abs(a), abs(b))
            expected = math.log(big) + math.log1p((abs(s) - big) / big)
            assert got.sign == (1 if s > 0 else -1)
            # cancellation amplifies log-domain rounding by big/|a+b|; that
            # conditioning is intrinsic to the representation
            cond = big / abs(s)
            assert got.log_mag == pytest.approx(expected, abs=1e-13 * cond + 1e-13)

    def test_huge_magnitudes(self):
        a = LogValue.from_log(1, 1e9)
        b = LogValue.from_log(1, 1e9 - 1.0)
        s = a + b
        assert s.log_mag == pytest.approx(1e9 + math.log1p(math.e**-1), abs=1e-6)
        assert (a / b).to_float() == pytest.approx(math.e, rel=1e-12)
        assert a.to_float() == math.inf

    def test_subtract_equal_is_zero(self):
        a = LogValue.from_float(3.5)
        assert (a - a).sign == 0

    def test_neg(self):
        a = LogValue.from_float(-2.0)
        assert (-a).to_float() == 2.0

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            LogValue.from_float(1.0) / LogValue.zero()

    def test_invalid_sign(self):
        with pytest.raises(ValueError):
            LogValue(2, 0.0)


class TestScaledBessel:
    def test_at_zero(self):
        value, corr = bessel_i0_scaled(0.0)
        assert value == 1.0 and corr == 0.0
        assert bessel_i0_prime_scaled(0.0) == 0.0

    def test_unit_argument(self):
        # series oracle: I0(1) = sum (1/2)^2k / (k!)^2, summed to machine
        i0_series = sum((0.25) ** k / math.factorial(k) ** 2 for k in range(25))
        assert i0_series == pytest.approx(1.2660658777520084, abs=1e-15)
        value, corr = bessel_i0_scaled(1.0)
        assert value == pytest.approx(i0_series * math.exp(-1.0), rel=1e-14)
        assert value == pytest.approx(0.4657596, abs=1e-7)
        assert corr == 1.0
        i1_series = sum(
            (0.5) ** (2 * k + 1) / (math.factorial(k) * math.factorial(k + 1))
            for k in range(25)
        )
        assert bessel_i0_prime_scaled(1.0) == pytest.approx(
            i1_series * math.exp(-1.0), rel=1e-14
        )
        assert bessel_i0_prime_scaled(1.0) == pytest.approx(0.2079104, abs=1e-7)

    def test_parity(self):
        u = np.linspace(0.1, 40, 37)
        ve, _ = bessel_i0_scaled(u)
        vo, _ = bessel_i0_scaled(-u)
        np.testing.assert_array_equal(ve, vo)
        np.testing.assert_array_equal(
            bessel_i0_prime_scaled(-u), -bessel_i0_prime_scaled(u)
        )
        assert np.all(np.sign(bessel_i0_prime_scaled(u)) == 1.0)

    def test_accuracy_against_series_small_and_asymptotic_large(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 30
        for u in (0.3, 2.0, 7.5, 14.9, 15.1, 50.0, 300.0):
            ref0 = float(mp.besseli(0, u) * mp.e**(-u))
            ref1 = float(mp.besseli(1, u) * mp.e**(-u))
            tol = 1e-14 if u <= 15 else 1e-13
            value, _ = bessel_i0_scaled(u)
            assert value == pytest.approx(ref0, rel=tol)
            assert bessel_i0_prime_scaled(u) == pytest.approx(ref1, rel=tol)


def flat_integrand(fn, offset=0.0):
    return ScaledIntegrand(
        eval=lambda th: (fn(th), np.zeros_like(th) + 0.0),
        exponent_offset=offset,
    )


class TestIntegrateScaled:
    def test_sin(self):
        lv = integrate_scaled(flat_integrand(np.sin), rel_tol=1e-13)
        assert lv.sign == 1
        assert lv.log_mag == pytest.approx(0.0, abs=1e-13)

    def test_sin_cos_squared(self):
        lv = integrate_scaled(
            flat_integrand(lambda th: np.sin(th) * np.cos(th) ** 2), rel_tol=1e-13
        )
        assert lv.log_mag == pytest.approx(math.log(1.0 / 3.0), abs=1e-13)

    def test_zero_integrand(self):
        lv = integrate_scaled(flat_integrand(lambda th: np.zeros_like(th)))
        assert lv.sign == 0

    def test_offset_shift_invariance(self):
        # same mathematical integrand, different (offset, reduced-exponent)
        # splits; shifts stay within the |prefactor * exp| <= 10 envelope
        def make(shift):
            return ScaledIntegrand(
                eval=lambda th: (np.cos(th), -3.0 * th - shift),
                exponent_offset=10.0 + shift,
            )

        base = integrate_scaled(make(0.0), rel_tol=1e-13)
        for shift in (-1.5, 2.0, 12.0):
            moved = integrate_scaled(make(shift), rel_tol=1e-13)
            assert moved.log_mag == pytest.approx(base.log_mag, abs=1e-13)
            assert moved.sign == base.sign

    def test_huge_kappa_endpoint_concentration(self):
        # integrand of the eta quadrature at kappa = 1e9: finite LogValue with
        # log magnitude kappa(sqrt(2) - 1/2) + subexponential corrections.
        # Oracle: endpoint Laplace expansion gives the constant
        # 1/(2 kappa sqrt(a0 (a0 - 2b))) with a0 = sqrt(2), b = 1/2.
        from scipy.special import i0e

        kappa, a0, b = 1e9, math.sqrt(2.0), 0.5

        def eval_(tau):
            s = np.cos(tau)
            pref = i0e(kappa * a0 * s) * s
            exp_rel = -kappa * (2.0 * np.sin(tau / 2.0) ** 2) * (a0 - b * (1.0 + s))
            return pref, exp_rel

        f = ScaledIntegrand(
            eval=eval_,
            exponent_offset=kappa * (a0 - b),
            endpoint_scale=1.0 / math.sqrt(kappa * (a0 - 2 * b)),
        )
        lv, info = integrate_scaled_info(f, rel_tol=1e-13)
        assert info.converged
        leading = kappa * (a0 - b)
        assert abs(lv.log_mag - leading) < 25.0
        laplace = leading - math.log(kappa) - math.log(2.0 * math.sqrt(a0 * (a0 - 2 * b)))
        assert lv.log_mag == pytest.approx(laplace, abs=1e-3)

    def test_halving_tolerance_is_stable(self):
        f = flat_integrand(lambda th: np.exp(np.sin(3 * th)))
        for tol in (1e-6, 1e-9, 1e-12):
            coarse = integrate_scaled(f, rel_tol=tol)
            fine = integrate_scaled(f, rel_tol=tol / 2)
            assert abs(coarse.log_mag - fine.log_mag) <= tol

    def test_nonconvergence_carries_estimates(self):
        # a step integrand defeats Gauss-Legendre panel doubling at 1e-13
        step = flat_integrand(lambda th: (th > 1.0).astype(float))
        with pytest.raises(ConvergenceError) as err:
            integrate_scaled(step, rel_tol=1e-13)
        assert err.value.last_estimates is not None
        a, b = err.value.last_estimates
        assert a != b

    def test_rejects_too_tight_tolerance(self):
        with pytest.raises(ValueError):
            integrate_scaled(flat_integrand(np.sin), rel_tol=1e-14)

    def test_offset_invariant_guard(self):
        bad = ScaledIntegrand(
            eval=lambda th: (np.ones_like(th), 20.0 * np.ones_like(th)),
            exponent_offset=0.0,
        )
        with pytest.raises(ValueError):
            integrate_scaled(bad)
