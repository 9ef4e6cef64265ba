"""Tests for N-site embeddings and the (deformed) coproduct operators."""

import numpy as np
import pytest

from qks.coalgebra import (
    DEFAULT_SIZE_CAP,
    SiteLayout,
    SizeCapError,
    coproduct_pm_deformed,
    coproduct_pm_undeformed,
    coproduct_z,
    embed,
    q_bracket_of_diagonal,
    site_z_diagonal,
    size_cap,
)
from qks.qarith import UNDEFORMED, DeformationParam, q_number
from qks.representations import su2_generators, suq2_generators


def _comm(a, b):
    return a @ b - b @ a


def _coproduct_plus_recursive(layout, d):
    """Independent oracle: iterate the two-site coproduct site by site.

    Carries Delta^{(k)}(L_+) for the first k sites and the accumulated
    diagonal z; appending site k+1 applies
    Delta(L_+) = q^{-L_z/2} (x) L_+  +  L_+ (x) q^{+L_z/2}.
    """
    rep0 = suq2_generators(layout.spins[0], d)
    plus = rep0.plus_op.copy()
    zdiag = np.real(np.diag(rep0.z_op)).copy()
    for j in layout.spins[1:]:
        rep = suq2_generators(j, d)
        site_plus = rep.plus_op
        site_z = np.real(np.diag(rep.z_op))
        dim = rep.dim
        left_w = np.exp(-d.eta / 2.0 * zdiag)
        right_w = np.exp(+d.eta / 2.0 * site_z)
        plus = (np.kron(np.diag(left_w), site_plus)
                + np.kron(plus, np.diag(right_w)))
        zdiag = (zdiag[:, None] + site_z[None, :]).ravel()
    return plus


class TestSiteLayout:
    def test_uniform(self):
        lay = SiteLayout.uniform(3, 0.5)
        assert lay.N == 3
        assert lay.spins == (0.5, 0.5, 0.5)
        assert lay.dims == (2, 2, 2)
        assert lay.total_dim == 8

    def test_mixed(self):
        lay = SiteLayout(spins=(0.5, 1.0, 1.5))
        assert lay.dims == (2, 3, 4)
        assert lay.total_dim == 24

    def test_rejects_empty_and_bad_spins(self):
        with pytest.raises(ValueError):
            SiteLayout(spins=())
        with pytest.raises(ValueError):
            SiteLayout(spins=(0.3,))
        with pytest.raises(ValueError):
            SiteLayout.uniform(0, 0.5)

    def test_size_cap(self, monkeypatch):
        monkeypatch.delenv("QKS_SIZE_CAP", raising=False)
        assert size_cap() == DEFAULT_SIZE_CAP
        with pytest.raises(SizeCapError, match="QKS_SIZE_CAP"):
            SiteLayout.uniform(14, 0.5).check_cap()
        monkeypatch.setenv("QKS_SIZE_CAP", "20000")
        assert size_cap() == 20000
        SiteLayout.uniform(14, 0.5).check_cap()


class TestEmbed:
    def test_matches_kron_oracle(self):
        lay = SiteLayout(spins=(0.5, 1.0, 0.5))
        op = suq2_generators(1.0, DeformationParam(0.7)).plus_op
        eye2 = np.eye(2)
        want = np.kron(np.kron(eye2, op), eye2)
        np.testing.assert_allclose(embed(op, 1, lay), want, atol=0)

    def test_site_range_checked(self):
        lay = SiteLayout.uniform(2, 0.5)
        op = np.eye(2)
        with pytest.raises(ValueError):
            embed(op, 2, lay)
        with pytest.raises(ValueError):
            embed(np.eye(3), 0, lay)

    def test_site_z_diagonal(self):
        lay = SiteLayout(spins=(0.5, 1.0))
        rep = su2_generators(1.0)
        want = np.real(np.diag(embed(rep.z_op, 1, lay)))
        np.testing.assert_allclose(site_z_diagonal(1, lay), want, atol=0)


class TestCoproducts:
    def test_z_is_sum_of_embeddings(self):
        lay = SiteLayout(spins=(0.5, 1.0, 0.5))
        want = sum(
            embed(su2_generators(j).z_op, i, lay) for i, j in enumerate(lay.spins))
        np.testing.assert_allclose(coproduct_z(lay), want, atol=0)

    def test_undeformed_is_sum_of_embeddings(self):
        lay = SiteLayout.uniform(3, 1.0)
        plus, minus = coproduct_pm_undeformed(lay)
        want = sum(
            embed(su2_generators(j).plus_op, i, lay) for i, j in enumerate(lay.spins))
        np.testing.assert_allclose(plus, want, atol=0)
        np.testing.assert_allclose(minus, want.conj().T, atol=0)

    def test_deformed_reduces_at_eta_zero(self):
        lay = SiteLayout(spins=(0.5, 1.5, 1.0))
        plus_d, _ = coproduct_pm_deformed(lay, UNDEFORMED)
        plus_u, _ = coproduct_pm_undeformed(lay)
        np.testing.assert_allclose(plus_d, plus_u, atol=1e-15)

    @pytest.mark.parametrize("spins", [(0.5,) * 4, (0.5, 1.0, 1.5), (1.0,) * 3])
    @pytest.mark.parametrize("eta", (0.4, 1.3))
    def test_deformed_matches_recursive_oracle(self, spins, eta):
        # coassociativity: the direct product-weight formula must equal
        # the site-by-site iteration of the two-site coproduct
        lay = SiteLayout(spins=spins)
        d = DeformationParam(eta)
        plus, minus = coproduct_pm_deformed(lay, d)
        want = _coproduct_plus_recursive(lay, d)
        np.testing.assert_allclose(plus, want, atol=1e-13)
        np.testing.assert_allclose(minus, want.conj().T, atol=1e-13)

    @pytest.mark.parametrize("spins", [(0.5,) * 3, (0.5, 1.0), (1.0, 1.5)])
    @pytest.mark.parametrize("eta", (0.0, 0.8, 2.0))
    def test_collective_algebra_relations(self, spins, eta):
        # the coproduct is an algebra homomorphism: images satisfy
        # [z, L_+/-] = +/-L_+/- and [L_+, L_-] = [2z]_q
        lay = SiteLayout(spins=spins)
        d = DeformationParam(eta)
        z = coproduct_z(lay)
        plus, minus = coproduct_pm_deformed(lay, d)
        np.testing.assert_allclose(_comm(z, plus), plus, atol=1e-12)
        np.testing.assert_allclose(_comm(z, minus), -minus, atol=1e-12)
        want = q_bracket_of_diagonal(2.0 * z, d)
        scale = max(1.0, np.abs(want).max())
        np.testing.assert_allclose(_comm(plus, minus), want, atol=1e-12 * scale)

    def test_adjoint_pairing(self):
        lay = SiteLayout.uniform(4, 0.5)
        plus, minus = coproduct_pm_deformed(lay, DeformationParam(1.7))
        np.testing.assert_array_equal(minus, plus.conj().T)


class TestQBracketOfDiagonal:
    def test_applies_entrywise(self):
        d = DeformationParam(0.9)
        op = np.diag([1.0, -0.5, 2.0])
        out = q_bracket_of_diagonal(op, d)
        np.testing.assert_allclose(
            np.diag(out).real, q_number(np.array([1.0, -0.5, 2.0]), d), atol=1e-14)

    def test_rejects_nondiagonal(self):
        with pytest.raises(ValueError):
            q_bracket_of_diagonal(np.ones((2, 2)), UNDEFORMED)
