import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import ellipj

from isingff.elliptic import (EllipticModulus, complete_elliptic_K,
                              inverse_sn_real, jacobi_sn_cn_dn, theta)
from isingff.exceptions import DomainError


def elliptic_K_quadrature(k: float) -> float:
    """Independent oracle: adaptive quadrature of the defining integral.

    Integrated in the substituted variable t = sin(phi), which removes the
    endpoint singularity without changing the value.
    """
    val, err = quad(lambda phi: 1.0 / math.sqrt(1.0 - (k * math.sin(phi)) ** 2),
                    0.0, math.pi / 2.0, epsabs=1e-13, epsrel=1e-13)
    assert err < 1e-12
    return val


class TestCompleteEllipticK:
    def test_small_modulus_limit(self):
        assert abs(complete_elliptic_K(1e-8) - math.pi / 2.0) < 1e-12

    def test_self_complementary_point(self):
        k = 1.0 / math.sqrt(2.0)
        kprime = math.sqrt(1.0 - k * k)
        assert complete_elliptic_K(k) == pytest.approx(complete_elliptic_K(kprime),
                                                       rel=1e-15)

    @pytest.mark.parametrize("k", [0.1, 0.5, 0.8, 0.99])
    def test_against_quadrature(self, k):
        assert abs(complete_elliptic_K(k) - elliptic_K_quadrature(k)) < 1e-12

    @pytest.mark.parametrize("k", [0.0, 1.0, -0.3, 1.5])
    def test_domain(self, k):
        with pytest.raises(DomainError):
            complete_elliptic_K(k)


class TestTheta:
    @pytest.mark.parametrize("q", [0.01, 0.2, 0.6])
    def test_theta1_odd_at_zero(self, q):
        assert theta(1, 0.0, q) == 0.0

    def test_theta1_half_pi_is_theta2_zero(self):
        q = 0.3
        assert theta(1, math.pi / 2.0, q) == pytest.approx(theta(2, 0.0, q), rel=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(x=st.floats(-3.0, 3.0), y=st.floats(-0.5, 0.5),
           q=st.floats(0.02, 0.85))
    def test_quasiperiodicity(self, x, y, q):
        z = complex(x, y)
        tau = 1j * (-math.log(q)) / math.pi
        lhs = theta(1, z + math.pi * tau, q)
        rhs = -cmath.exp(-1j * math.pi * tau - 2j * z) * theta(1, z, q)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))

    def test_theta1_at_half_tau(self):
        q = 0.17
        tau = 1j * (-math.log(q)) / math.pi
        lhs = theta(1, math.pi * tau / 2.0, q)
        rhs = 1j * cmath.exp(-1j * math.pi * tau / 4.0) * theta(4, 0.0, q)
        assert abs(lhs - rhs) < 1e-12 * abs(rhs)

    def test_bad_index_and_nome(self):
        with pytest.raises(DomainError):
            theta(5, 0.1, 0.3)
        with pytest.raises(DomainError):
            theta(1, 0.1, 0.9999)
        with pytest.raises(DomainError):
            theta(1, 0.1, -0.2)


class TestJacobiFunctions:
    mod = EllipticModulus.from_k(0.8)

    def test_origin(self):
        sn, cn, dn = jacobi_sn_cn_dn(0.0, self.mod)
        assert sn == 0.0
        assert abs(cn - 1.0) < 1e-15
        assert abs(dn - 1.0) < 1e-15

    def test_quarter_period(self):
        sn, cn, dn = jacobi_sn_cn_dn(self.mod.bigK, self.mod)
        assert abs(sn - 1.0) < 1e-14
        assert abs(cn) < 1e-14
        assert abs(dn - self.mod.kprime) < 1e-14

    def test_algebraic_identities_complex(self):
        rng = np.random.default_rng(5)
        k2 = self.mod.k ** 2
        for _ in range(50):
            u = complex(rng.uniform(-2, 2), rng.uniform(-0.8, 0.8))
            sn, cn, dn = jacobi_sn_cn_dn(u, self.mod)
            assert abs(sn**2 + cn**2 - 1.0) < 1e-12
            assert abs(dn**2 + k2 * sn**2 - 1.0) < 1e-12

    def test_real_axis_against_scipy(self):
        rng = np.random.default_rng(6)
        for u in rng.uniform(-3.0, 3.0, 200):
            sn, cn, dn = jacobi_sn_cn_dn(u, self.mod)
            s, c, d, _ = ellipj(u, self.mod.k ** 2)
            assert abs(sn - s) < 1e-13
            assert abs(cn - c) < 1e-13
            assert abs(dn - d) < 1e-13

    def test_half_period_shifts(self):
        rng = np.random.default_rng(7)
        two_k = 2.0 * self.mod.bigK
        for u in rng.uniform(-self.mod.bigK, self.mod.bigK, 200):
            sn0, cn0, dn0 = jacobi_sn_cn_dn(u, self.mod)
            sn1, cn1, dn1 = jacobi_sn_cn_dn(u + two_k, self.mod)
            assert abs(sn1 + sn0) < 1e-11
            assert abs(cn1 + cn0) < 1e-11
            assert abs(dn1 - dn0) < 1e-11

    def test_dn_addition_formula(self):
        rng = np.random.default_rng(8)
        k2 = self.mod.k ** 2
        for _ in range(100):
            u, v = rng.uniform(-self.mod.bigK, self.mod.bigK, 2)
            snu, cnu, dnu = (x.real for x in jacobi_sn_cn_dn(u, self.mod))
            snv, cnv, dnv = (x.real for x in jacobi_sn_cn_dn(v, self.mod))
            lhs = jacobi_sn_cn_dn(u - v, self.mod)[2].real
            rhs = (dnu * dnv + k2 * snu * cnu * snv * cnv) \
                / (1.0 - k2 * snu**2 * snv**2)
            assert abs(lhs - rhs) < 1e-11

    def test_sn_doubling_formula(self):
        rng = np.random.default_rng(9)
        k2 = self.mod.k ** 2
        for u in rng.uniform(-0.5 * self.mod.bigK, 0.5 * self.mod.bigK, 100):
            snu, cnu, dnu = (x.real for x in jacobi_sn_cn_dn(u, self.mod))
            lhs = jacobi_sn_cn_dn(2.0 * u, self.mod)[0].real
            rhs = 2.0 * snu * cnu * dnu / (1.0 - k2 * snu**4)
            assert abs(lhs - rhs) < 1e-11

    def test_pole_proximity_reported(self):
        with pytest.raises(DomainError):
            jacobi_sn_cn_dn(1j * self.mod.bigKprime, self.mod)
        with pytest.raises(DomainError):
            jacobi_sn_cn_dn(2 * self.mod.bigK + 1j * self.mod.bigKprime + 1e-13,
                            self.mod)


class TestInverseSn:
    mod = EllipticModulus.from_k(0.6)

    def test_endpoints(self):
        assert inverse_sn_real(0.0, self.mod) == 0.0
        assert abs(inverse_sn_real(1.0, self.mod) - self.mod.bigK) < 1e-12

    def test_roundtrip_against_forward_sn(self):
        u = inverse_sn_real(0.37, self.mod)
        assert abs(jacobi_sn_cn_dn(u, self.mod)[0] - 0.37) < 1e-12
        assert jacobi_sn_cn_dn(u, self.mod)[1].real >= 0.0

    def test_branch_and_range(self):
        rng = np.random.default_rng(10)
        for s in rng.uniform(-1, 1, 50):
            u = inverse_sn_real(s, self.mod)
            assert -self.mod.bigK <= u <= self.mod.bigK
            sn, cn, _ = jacobi_sn_cn_dn(u, self.mod)
            assert abs(sn - s) < 1e-12
            assert cn.real >= -1e-15

    def test_domain(self):
        with pytest.raises(DomainError):
            inverse_sn_real(1.5, self.mod)


class TestEllipticModulus:
    @pytest.mark.parametrize("k", [0.2, 0.59, 0.8, 0.97])
    def test_invariants(self, k):
        mod = EllipticModulus.from_k(k)
        res = mod.self_check()
        assert res["k2_plus_kprime2"] < 1e-15
        assert res["nome"] < 1e-15
        assert res["k_from_thetas"] < 1e-13
        assert res["twoK_from_thetas"] < 1e-13
        assert 0.0 < mod.q < 1.0

    def test_complementary_swaps_periods(self):
        mod = EllipticModulus.from_k(0.3)
        comp = mod.complementary()
        assert comp.bigK == pytest.approx(mod.bigKprime, rel=1e-15)
        assert comp.bigKprime == pytest.approx(mod.bigK, rel=1e-15)

    def test_domain(self):
        for k in (0.0, 1.0, -0.1, 2.0):
            with pytest.raises(DomainError):
                EllipticModulus.from_k(k)
