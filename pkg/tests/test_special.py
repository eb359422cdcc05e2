import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from cobose import (
    LogValue,
    PoleError,
    log_2f1_terminating,
    log_gamma,
    log_sum_exp,
    log_upper_incomplete_gamma_int,
)
from cobose.special import log_factorials


class TestLogValue:
    def test_zero_and_one(self):
        assert LogValue.zero().is_zero
        assert LogValue.zero().value == 0.0
        assert LogValue.one().value == 1.0

    def test_roundtrip(self):
        v = LogValue.from_value(3.5)
        assert v.value == pytest.approx(3.5, rel=1e-15)
        assert float(v) == v.value

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            LogValue.from_value(-1.0)

    def test_arithmetic(self):
        a = LogValue.from_value(2.0)
        b = LogValue.from_value(3.0)
        assert (a * b).value == pytest.approx(6.0, rel=1e-15)
        assert (b / a).value == pytest.approx(1.5, rel=1e-15)
        assert (a + b).value == pytest.approx(5.0, rel=1e-15)
        assert a < b and b >= a

    def test_zero_absorbs(self):
        z = LogValue.zero()
        a = LogValue.from_value(7.0)
        assert (z * a).is_zero
        assert (z + a).value == pytest.approx(7.0)
        with pytest.raises(ZeroDivisionError):
            a / z

    def test_huge_magnitudes_survive(self):
        big = LogValue(1e6)
        assert (big * big).log == 2e6
        assert (big + big).log == pytest.approx(1e6 + math.log(2), rel=1e-15)

    def test_overflowing_value_saturates(self):
        assert LogValue(800.0).value == math.inf


class TestLogSumExp:
    def test_pair_of_ones(self):
        assert log_sum_exp([LogValue(0.0), LogValue(0.0)]).log == pytest.approx(math.log(2))

    def test_singleton(self):
        assert log_sum_exp([LogValue(math.log(3))]).log == pytest.approx(math.log(3))

    def test_empty_is_zero_element(self):
        assert log_sum_exp([]).is_zero

    def test_large_scale(self):
        # both terms at the 1e300 scale
        r = log_sum_exp([LogValue(690.77), LogValue(690.77)])
        assert r.log == pytest.approx(690.77 + math.log(2), rel=1e-15)

    @given(st.floats(-1e5, 1e5), st.lists(st.floats(-30, 30), min_size=1, max_size=8))
    def test_shift_invariance(self, shift, logs):
        base = log_sum_exp([LogValue(x) for x in logs]).log
        shifted = log_sum_exp([LogValue(x + shift) for x in logs]).log
        # shifted inputs are quantized at ulp(shift) before the sum ever runs
        input_quant = 4 * np.finfo(float).eps * (abs(shift) + 30.0)
        assert shifted - shift == pytest.approx(base, abs=1e-13 + input_quant)


class TestLogGamma:
    def test_unit_values(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(5.0) == pytest.approx(math.log(24), rel=1e-15)

    def test_half(self):
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-13)

    def test_against_mpmath(self, rng):
        for _ in range(50):
            x = float(rng.uniform(0.1, 1e6))
            ref = float(mpmath.loggamma(x))
            assert log_gamma(x) == pytest.approx(ref, rel=1e-13)

    def test_domain(self):
        with pytest.raises(ValueError):
            log_gamma(0.0)
        with pytest.raises(ValueError):
            log_gamma(-2.0)


class TestUpperIncompleteGamma:
    def test_order_one(self):
        assert log_upper_incomplete_gamma_int(1, 2.0).log == pytest.approx(-2.0, rel=1e-15)

    def test_at_zero_matches_gamma(self):
        assert log_upper_incomplete_gamma_int(3, 0.0).log == pytest.approx(math.log(2))
        for n in (1, 2, 7, 40):
            assert log_upper_incomplete_gamma_int(n, 0.0).log == log_gamma(n)

    def test_small_case_exact(self):
        # Gamma(3, 1) = 2 e^-1 (1 + 1 + 1/2) = 5/e
        got = log_upper_incomplete_gamma_int(3, 1.0)
        assert got.log == pytest.approx(math.log(5) - 1.0, rel=1e-14)

    def test_against_quadrature(self):
        val, err = quad(lambda t: t**2 * math.exp(-t), 1.0, 50.0)
        got = math.exp(log_upper_incomplete_gamma_int(3, 1.0).log)
        assert got == pytest.approx(val, rel=1e-10)

    def test_against_mpmath(self, rng):
        for _ in range(60):
            n = int(rng.integers(1, 100_000))
            x = float(rng.uniform(0.0, 1000.0))
            ref = mpmath.log(mpmath.gammainc(n, x, mpmath.inf))
            assert log_upper_incomplete_gamma_int(n, x).log == pytest.approx(
                float(ref), rel=1e-12, abs=1e-12
            )

    def test_recurrence_identity(self, rng):
        # Gamma(n+1, x) = n Gamma(n, x) + x^n e^-x
        for _ in range(200):
            n = int(rng.integers(1, 1000))
            x = float(rng.uniform(0.0, 1000.0))
            lhs = log_upper_incomplete_gamma_int(n + 1, x).log
            a = math.log(n) + log_upper_incomplete_gamma_int(n, x).log
            b = n * math.log(x) - x if x > 0 else -math.inf
            rhs = np.logaddexp(a, b)
            assert lhs == pytest.approx(rhs, rel=1e-11, abs=1e-11)

    def test_domain(self):
        with pytest.raises(ValueError):
            log_upper_incomplete_gamma_int(0, 1.0)
        with pytest.raises(ValueError):
            log_upper_incomplete_gamma_int(3, -0.5)


def _hyp2f1_exact(n: int, c: Fraction, z: Fraction) -> Fraction:
    total = Fraction(0)
    term = Fraction(1)
    for k in range(n + 1):
        total += term
        if k < n:
            term *= Fraction(k - n) * z / (c + k)
    return total


class TestTerminating2F1:
    def test_empty_series(self):
        assert log_2f1_terminating(0, -5.0, 0.7).value == 1.0

    def test_single_term(self):
        got = log_2f1_terminating(1, -4.0, 0.5)
        assert got.value == pytest.approx(1.0 - 0.5 / -4.0, rel=1e-14)

    def test_small_exact_case(self):
        ref = _hyp2f1_exact(3, Fraction(-5), Fraction(1, 2))
        got = log_2f1_terminating(3, -5.0, 0.5)
        assert got.value == pytest.approx(float(ref), rel=1e-13)

    def test_random_against_rational(self, rng):
        for _ in range(100):
            n = int(rng.integers(0, 51))
            # c safely below the pole band (c + k != 0 for k < n)
            c = -float(n + int(rng.integers(1, 30)))
            num = int(rng.integers(1, 20))
            den = int(rng.integers(num, 40))
            z = Fraction(num, den)
            ref = _hyp2f1_exact(n, Fraction(c), z)
            got = log_2f1_terminating(n, c, float(z))
            assert got.value == pytest.approx(float(ref), rel=1e-12, abs=1e-280)

    def test_pole_detected(self):
        with pytest.raises(PoleError):
            log_2f1_terminating(5, -3.0, 0.4)

    def test_sign_tracked(self):
        # c > 0 makes the terms alternate
        got = log_2f1_terminating(2, 4.0, 3.0)
        ref = _hyp2f1_exact(2, Fraction(4), Fraction(3))
        assert got.value == pytest.approx(float(ref), rel=1e-13)

    def test_negative_sum_refuses_positively(self):
        neg = log_2f1_terminating(1, 1.0, 5.0)  # 1 - 5 = -4
        assert neg.value == pytest.approx(-4.0, rel=1e-14)
        with pytest.raises(ValueError):
            neg.as_positive()


def test_log_factorials_table():
    t = log_factorials(10)
    assert t[0] == 0.0 and t[1] == 0.0
    assert t[5] == pytest.approx(math.log(120), rel=1e-15)
    # growth keeps earlier entries identical
    t2 = log_factorials(2000)
    assert t2[10] == t[10]
