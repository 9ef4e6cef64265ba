"""Tests for the Zeeman/block reduction kernels and backend selection."""

import math
import os
import subprocess
import sys

import mpmath
import numpy as np
import pytest

from qks import _kernels_py
from qks.kernels import backend_name, block_reduce, zeeman_block_terms

compiled = pytest.importorskip("qks._kernels", reason="compiled extension not built")


def _mp_zeeman(J, x):
    """High-precision oracle for one (J, x) pair.

    z = sinh(a x)/sinh(x/2) with a = J + 1/2; m1 = (d/dx) log z;
    m2 = (d/dx)^2 log z + m1^2 (the second moment of m over the line).
    """
    with mpmath.workdps(60):
        a = mpmath.mpf(J) + mpmath.mpf(1) / 2
        xm = mpmath.mpf(x)
        if xm == 0:
            return math.log(2 * float(J) + 1), 0.0, float(J * (J + 1) / 3.0)
        logz = mpmath.log(mpmath.sinh(a * xm) / mpmath.sinh(xm / 2))
        m1 = a * mpmath.coth(a * xm) - mpmath.coth(xm / 2) / 2
        lpp = -a ** 2 / mpmath.sinh(a * xm) ** 2 + 1 / (4 * mpmath.sinh(xm / 2) ** 2)
        return float(logz), float(m1), float(lpp + m1 ** 2)


def _direct_block_reduce(logd, E, J, beta, x):
    """Dense oracle: explicit Zeeman sums in ordinary arithmetic."""
    logz_tot = []
    Es, ms = [], []
    weights = []
    for ld, e, j in zip(logd, E, J):
        mvals = np.arange(-j, j + 1.0)
        w = math.exp(ld) * np.exp(-beta * e + x * mvals)
        weights.append(w)
        Es.append(np.full_like(mvals, e))
        ms.append(mvals)
    w = np.concatenate(weights)
    E_all = np.concatenate(Es)
    m_all = np.concatenate(ms)
    Z = w.sum()
    p = w / Z
    return (math.log(Z),
            float(p @ E_all), float(p @ E_all ** 2),
            float(p @ m_all), float(p @ m_all ** 2),
            float(p @ (E_all * m_all)))


BACKENDS = [("python", _kernels_py), ("compiled", compiled)]


@pytest.mark.parametrize("name,mod", BACKENDS)
class TestZeemanTerms:
    def test_matches_high_precision(self, name, mod):
        Js = np.array([0.5, 3.0, 17.5, 400.0])
        for x in (0.0, 1e-6, 3e-3, 0.02, 0.7, 5.0, -0.02, -0.7):
            logz, m1, m2 = mod.zeeman_block_terms(Js, float(x))
            for k, J in enumerate(Js):
                rl, r1, r2 = _mp_zeeman(J, x)
                assert logz[k] == pytest.approx(rl, rel=1e-12, abs=1e-12)
                assert m1[k] == pytest.approx(r1, rel=1e-10, abs=1e-12)
                assert m2[k] == pytest.approx(r2, rel=1e-10, abs=1e-10)

    def test_zero_field_exact(self, name, mod):
        Js = np.array([0.5, 2.0, 100.0])
        logz, m1, m2 = mod.zeeman_block_terms(Js, 0.0)
        np.testing.assert_allclose(logz, np.log(2 * Js + 1), rtol=1e-14)
        np.testing.assert_array_equal(m1, np.zeros_like(Js))
        np.testing.assert_allclose(m2, Js * (Js + 1) / 3.0, rtol=1e-14)

    def test_sign_symmetry(self, name, mod):
        Js = np.arange(0.5, 40.0, 1.0)
        for x in (2e-3, 0.3):
            lp, m1p, m2p = mod.zeeman_block_terms(Js, x)
            lm, m1m, m2m = mod.zeeman_block_terms(Js, -x)
            np.testing.assert_allclose(lp, lm, rtol=1e-13)
            np.testing.assert_allclose(m1p, -m1m, rtol=1e-13)
            np.testing.assert_allclose(m2p, m2m, rtol=1e-13)

    def test_series_crossover_continuity(self, name, mod):
        # values straddling the a|x| series cut must agree to well below
        # any tolerance the thermodynamics relies on (documented worst
        # case near the cut is ~3e-12)
        cut = _kernels_py._SERIES_CUT
        Js = np.array([0.5, 1.0, 7.5])
        for J in Js:
            a = J + 0.5
            for side in (1.0 - 1e-6, 1.0 + 1e-6):
                x = cut / a * side
                got = mod.zeeman_block_terms(np.array([J]), x)
                ref = _mp_zeeman(J, x)
                for g, r in zip(got, ref):
                    assert g[0] == pytest.approx(r, rel=1e-9, abs=1e-11)

    def test_no_overflow_at_large_argument(self, name, mod):
        # a*x up to ~5e4: linear-domain sinh would overflow;
        # logzee = (a - 1/2)x - log(-expm1(-2ax)) + log(-expm1(-x)) -> here
        # 50000 - log(1 - e^-1)
        logz, m1, m2 = mod.zeeman_block_terms(np.array([50000.0]), 1.0)
        assert np.all(np.isfinite(logz))
        assert logz[0] == pytest.approx(50000.0 - math.log(-math.expm1(-1.0)),
                                        rel=1e-12)


@pytest.mark.parametrize("name,mod", BACKENDS)
class TestBlockReduce:
    def test_matches_direct_sum(self, name, mod):
        rng = np.random.default_rng(7)
        J = np.arange(0.5, 25.0, 1.0)
        logd = rng.uniform(0.0, 4.0, J.size)
        E = rng.uniform(-2.0, 2.0, J.size)
        for beta, x in ((0.7, 0.0), (1.3, 0.4), (2.0, -0.15)):
            got = mod.block_reduce(logd, E, J, beta, x)
            want = _direct_block_reduce(logd, E, J, beta, x)
            np.testing.assert_allclose(got, want, rtol=1e-11, atol=1e-11)

    def test_shift_protects_against_overflow(self, name, mod):
        # logd ~ 1e5: direct exponentiation is impossible, the max-shift
        # reduction must stay finite
        J = np.arange(0.0, 500.0, 1.0)
        logd = np.linspace(0.0, 1e5, J.size)
        E = np.linspace(-1.0, 1.0, J.size)
        out = mod.block_reduce(logd, E, J, 2.0, 0.0)
        assert all(np.isfinite(v) for v in out)


class TestBackendParity:
    def test_same_results(self):
        rng = np.random.default_rng(3)
        J = np.arange(0.5, 200.0, 1.0)
        logd = rng.uniform(0.0, 50.0, J.size)
        E = rng.uniform(-3.0, 3.0, J.size)
        for beta, x in ((0.9, 0.0), (1.7, 0.23), (0.2, -1.1)):
            a = compiled.block_reduce(logd, E, J, beta, x)
            b = _kernels_py.block_reduce(logd, E, J, beta, x)
            np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)
        for x in (0.0, 5e-3, 0.4, -0.4):
            za = compiled.zeeman_block_terms(J, x)
            zb = _kernels_py.zeeman_block_terms(J, x)
            for ga, gb in zip(za, zb):
                np.testing.assert_allclose(ga, gb, rtol=1e-12, atol=1e-12)

    def test_active_backend_reported(self):
        assert backend_name() in ("compiled", "python")
        out = zeeman_block_terms(np.array([1.0]), 0.1)
        assert len(out) == 3

    def test_env_var_forces_python(self):
        code = ("import qks.kernels as k; print(k.backend_name())")
        env = dict(os.environ, QKS_PURE_PYTHON="1")
        got = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert got.stdout.strip() == "python"

    def test_block_reduce_dispatch(self):
        J = np.arange(0.5, 10.0, 1.0)
        logd = np.zeros(J.size)
        E = np.zeros(J.size)
        out = block_reduce(logd, E, J, 1.0, 0.0)
        # uniform zero energies: <E> = 0 and Z = sum of line counts
        assert out[0] == pytest.approx(math.log(np.sum(2 * J + 1)), rel=1e-13)
        assert out[1] == pytest.approx(0.0, abs=1e-13)
