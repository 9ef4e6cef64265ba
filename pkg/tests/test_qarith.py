"""Tests for q-number arithmetic and the log-domain primitives."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qks.qarith import (
    UNDEFORMED,
    DeformationParam,
    _log_sinh,
    binomial_exact,
    log_binomial,
    log_q_number,
    q_factorial_log,
    q_number,
)


def _mp_q_number(n, eta):
    """High-precision oracle sinh(n*eta/2)/sinh(eta/2)."""
    with mpmath.workdps(60):
        e = mpmath.mpf(eta)
        return float(mpmath.sinh(n * e / 2) / mpmath.sinh(e / 2))


class TestDeformationParam:
    def test_default_is_undeformed(self):
        assert DeformationParam().eta == 0.0
        assert UNDEFORMED.is_undeformed

    def test_from_q_round_trip(self):
        for q in (0.5, 1.0, 2.0, 10.0):
            d = DeformationParam.from_q(q)
            assert d.q == pytest.approx(q, rel=1e-15)
            assert d.eta == pytest.approx(math.log(q), abs=1e-15)

    def test_from_q_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            DeformationParam.from_q(0.0)
        with pytest.raises(ValueError):
            DeformationParam.from_q(-2.0)

    def test_rejects_nonfinite_eta(self):
        with pytest.raises(ValueError):
            DeformationParam(float("nan"))
        with pytest.raises(ValueError):
            DeformationParam(float("inf"))

    def test_frozen(self):
        d = DeformationParam(1.0)
        with pytest.raises(AttributeError):
            d.eta = 2.0


class TestQNumber:
    def test_undeformed_is_identity(self):
        for n in (0, 1, 2, 7, 0.5, 1.5):
            assert q_number(n, UNDEFORMED) == float(n)

    def test_array_input(self):
        n = np.array([0.0, 1.0, 2.0, 3.0])
        out = q_number(n, DeformationParam(0.8))
        assert out.shape == n.shape
        assert out[0] == 0.0
        assert out[1] == pytest.approx(1.0, abs=1e-15)

    def test_two_is_twice_cosh_half_eta(self):
        # [2]_q = sinh(eta)/sinh(eta/2) = 2 cosh(eta/2)
        for eta in (0.3, 1.0, 2.5, -1.7):
            d = DeformationParam(eta)
            assert q_number(2, d) == pytest.approx(2.0 * math.cosh(eta / 2.0), rel=1e-14)

    @given(
        n=st.integers(min_value=0, max_value=50),
        eta=st.floats(min_value=-25.0, max_value=25.0).filter(lambda e: abs(e) > 1e-8),
    )
    def test_matches_high_precision_oracle(self, n, eta):
        ref = _mp_q_number(n, eta)
        assert q_number(n, DeformationParam(eta)) == pytest.approx(ref, rel=1e-12, abs=1e-300)

    @given(
        n=st.integers(min_value=0, max_value=40),
        eta=st.floats(min_value=1e-6, max_value=20.0),
    )
    def test_even_in_eta(self, n, eta):
        plus = q_number(n, DeformationParam(eta))
        minus = q_number(n, DeformationParam(-eta))
        assert plus == pytest.approx(minus, rel=1e-13)

    @given(
        n=st.integers(min_value=1, max_value=30),
        eta=st.floats(min_value=-8.0, max_value=8.0).filter(lambda e: abs(e) > 1e-8),
    )
    def test_chebyshev_recurrence(self, n, eta):
        # [n+1] = [2][n] - [n-1]
        d = DeformationParam(eta)
        lhs = q_number(n + 1, d)
        rhs = q_number(2, d) * q_number(n, d) - q_number(n - 1, d)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


class TestLogQNumber:
    def test_matches_linear_domain(self):
        for eta in (0.0, 0.4, 3.0):
            d = DeformationParam(eta)
            for n in (1, 2, 5, 10.5):
                assert math.exp(log_q_number(n, d)) == pytest.approx(
                    q_number(n, d), rel=1e-13)

    def test_one_is_zero(self):
        assert log_q_number(1, DeformationParam(2.0)) == 0.0

    def test_rejects_nonpositive_n(self):
        with pytest.raises(ValueError):
            log_q_number(0.0, DeformationParam(1.0))
        with pytest.raises(ValueError):
            log_q_number(-2.0, DeformationParam(1.0))

    def test_no_overflow_at_large_eta(self):
        # log[n]_q ~ (n-1)*eta/2 for large eta; linear domain would overflow
        d = DeformationParam(600.0)
        out = log_q_number(100, d)
        assert math.isfinite(out)
        assert out == pytest.approx(99 * 300.0, rel=1e-12)


class TestLogSinh:
    def test_matches_high_precision(self):
        with mpmath.workdps(50):
            for x in (1e-300, 1e-8, 0.5, 5.0, 30.0, 100.0, 700.0):
                ref = float(mpmath.log(mpmath.sinh(mpmath.mpf(x))))
                assert _log_sinh(x) == pytest.approx(ref, rel=1e-14)

    def test_large_argument_asymptote(self):
        # ln sinh x -> x - ln 2 with no intermediate overflow
        x = 1e8
        assert _log_sinh(x) == x - math.log(2.0)

    def test_vectorized(self):
        x = np.array([0.1, 1.0, 50.0])
        out = _log_sinh(x)
        assert out.shape == x.shape


class TestQFactorialLog:
    def test_zero_and_one(self):
        d = DeformationParam(1.3)
        assert q_factorial_log(0, d) == 0.0
        assert q_factorial_log(1, d) == 0.0

    def test_equals_sum_of_log_q_numbers(self):
        for eta in (0.0, 0.9, 4.0):
            d = DeformationParam(eta)
            for n in (2, 3, 7):
                want = sum(log_q_number(k, d) for k in range(2, n + 1))
                assert q_factorial_log(n, d) == pytest.approx(want, rel=1e-13, abs=1e-13)

    def test_rejects_negative_or_fractional(self):
        with pytest.raises(ValueError):
            q_factorial_log(-1, UNDEFORMED)
        with pytest.raises(ValueError):
            q_factorial_log(1.5, UNDEFORMED)


class TestBinomials:
    @given(
        n=st.integers(min_value=0, max_value=200),
        k=st.integers(min_value=0, max_value=200),
    )
    def test_exact_matches_math_comb(self, n, k):
        if k > n:
            with pytest.raises(ValueError):
                binomial_exact(n, k)
        else:
            assert binomial_exact(n, k) == math.comb(n, k)

    @given(
        n=st.integers(min_value=1, max_value=300),
        frac=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_log_matches_exact(self, n, frac):
        k = int(round(frac * n))
        want = math.log(math.comb(n, k))
        assert log_binomial(n, k) == pytest.approx(want, rel=1e-12, abs=1e-12)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            binomial_exact(-1, 0)
        with pytest.raises(ValueError):
            log_binomial(3, 5)
