import math

import numpy as np
import pytest

from isingff.elliptic import jacobi_sn_cn_dn
from isingff.exceptions import DomainError
from isingff.spectral import (Couplings, b_elliptic, b_of_theta, eta_of_couplings,
                              gamma_of_theta, log_sinh, nu_of_gamma,
                              quasimomenta, sqrt_b_of_theta, u_of_theta)
from isingff.verification import elliptic_suite

C = Couplings.from_kx_ky(0.4, 0.7, 5)


class TestQuasimomenta:
    def test_examples(self):
        np.testing.assert_allclose(quasimomenta("p", 1), [0.0])
        np.testing.assert_allclose(quasimomenta("a", 2),
                                   [math.pi / 2, 3 * math.pi / 2])
        np.testing.assert_allclose(quasimomenta("p", 4),
                                   [0.0, math.pi / 2, math.pi, 3 * math.pi / 2])

    def test_ordering_and_ranges(self):
        for sector in ("a", "p"):
            th = quasimomenta(sector, 7)
            assert np.all(np.diff(th) > 0)
            assert th[0] >= 0.0 and th[-1] < 2.0 * math.pi

    def test_errors(self):
        with pytest.raises(DomainError):
            quasimomenta("x", 3)
        with pytest.raises(DomainError):
            quasimomenta("a", 0)


class TestCouplings:
    def test_ferromagnetic_region_enforced(self):
        with pytest.raises(DomainError):
            Couplings.from_kx_ky(0.1, 0.2, 4)

    def test_ordering_of_derived_scalars(self):
        assert 0.0 < C.beta < C.alpha < 1.0
        assert C.kx_star < C.ky
        assert 0.0 < C.modulus.k < 1.0

    def test_dual_coupling_identity(self):
        # sinh(2 kx*) sinh(2 kx) = 1, hence k = 1/s
        assert C.sinh2kx_star * C.sinh2kx == pytest.approx(1.0, rel=1e-14)
        assert C.modulus.k == pytest.approx(1.0 / C.s, rel=1e-14)

    def test_eta_position_and_residual(self):
        assert -C.modulus.bigKprime / 2.0 < C.eta < 0.0
        sn2ieta = jacobi_sn_cn_dn(2j * C.eta, C.modulus)[0]
        assert abs(math.sinh(2 * C.kx) - (1j * sn2ieta)) < 1e-11

    def test_eta_vanishes_with_weak_horizontal_coupling(self):
        eta = eta_of_couplings(0.05, 1.5)
        assert -0.06 < eta < 0.0

    def test_uniformization_satisfies_curve(self):
        rng = np.random.default_rng(1)
        mod = C.modulus
        rhs = math.cosh(2 * C.kx) * math.cosh(2 * C.ky)
        for u in rng.uniform(-mod.bigK, mod.bigK, 20):
            snp = jacobi_sn_cn_dn(u + 1j * C.eta, mod)[0]
            snm = jacobi_sn_cn_dn(u - 1j * C.eta, mod)[0]
            z = snp / snm
            lam = 1.0 / (mod.k * snp * snm)
            lhs = C.sinh2kx * (lam + 1 / lam) / 2 + C.sinh2ky * (z + 1 / z) / 2
            assert abs(lhs - rhs) < 1e-12


class TestGamma:
    def test_endpoints(self):
        assert gamma_of_theta(0.0, C) == pytest.approx(2 * (C.ky - C.kx_star),
                                                       rel=1e-13)
        assert gamma_of_theta(math.pi, C) == pytest.approx(2 * (C.ky + C.kx_star),
                                                           rel=1e-13)

    def test_half_pi_against_elliptic_route(self):
        # independent check through lambda(u) = [k sn(u+i eta) sn(u-i eta)]^{-1}
        c = Couplings.from_kx_ky(0.3, 0.7, 3)
        g = float(gamma_of_theta(math.pi / 2, c))
        expected = math.acosh(math.cosh(2 * c.kx_star) * math.cosh(2 * c.ky))
        assert g == pytest.approx(expected, rel=1e-14)
        u = u_of_theta(math.pi / 2, c)
        snp = jacobi_sn_cn_dn(u + 1j * c.eta, c.modulus)[0]
        snm = jacobi_sn_cn_dn(u - 1j * c.eta, c.modulus)[0]
        lam = 1.0 / (c.modulus.k * snp * snm)
        assert abs(lam - math.exp(g)) < 1e-11

    def test_reflection_symmetry(self):
        th = 1.1
        assert gamma_of_theta(th, C) == pytest.approx(
            float(gamma_of_theta(2 * math.pi - th, C)), rel=1e-14)


class TestB:
    def test_endpoint_values(self):
        assert b_of_theta(0.0, C) == pytest.approx(1.0)
        assert abs(b_of_theta(math.pi, C) - 1.0) < 1e-14

    def test_unimodular_and_reciprocal(self):
        rng = np.random.default_rng(2)
        for th in rng.uniform(0, 2 * math.pi, 50):
            b = b_of_theta(th, C)
            assert abs(abs(b) - 1.0) < 1e-14
            assert abs(b * b_of_theta(2 * math.pi - th, C) - 1.0) < 1e-13

    def test_sqrt_branch_positive_real_part(self):
        rng = np.random.default_rng(3)
        for th in rng.uniform(0, 2 * math.pi, 50):
            assert complex(sqrt_b_of_theta(th, C)).real > 0.0

    def test_elliptic_square_root(self):
        rng = np.random.default_rng(4)
        for th in rng.uniform(0, 2 * math.pi, 50):
            root = b_elliptic(u_of_theta(th, C), C)
            assert abs(root**2 - b_of_theta(th, C)) < 1e-13
        assert b_elliptic(0.0, C) == pytest.approx(1.0)
        assert b_elliptic(-C.modulus.bigK, C) == pytest.approx(1.0)


class TestUOfTheta:
    def test_endpoints(self):
        assert abs(u_of_theta(0.0, C) + C.modulus.bigK) < 1e-13
        assert abs(u_of_theta(math.pi, C)) < 1e-13

    def test_reflection(self):
        rng = np.random.default_rng(5)
        for th in rng.uniform(1e-6, math.pi, 50):
            assert abs(u_of_theta(2 * math.pi - th, C) + u_of_theta(th, C)) < 1e-12

    def test_defining_relation_and_branch(self):
        rng = np.random.default_rng(6)
        gamma_pi = 2 * (C.ky + C.kx_star)
        for th in rng.uniform(0, 2 * math.pi, 100):
            u = u_of_theta(th, C)
            assert -C.modulus.bigK <= u < C.modulus.bigK
            sn, cn, _ = jacobi_sn_cn_dn(u, C.modulus)
            g = float(gamma_of_theta(th, C))
            target = -C.sinh2ky * math.cos(th / 2) / math.sinh((gamma_pi + g) / 2)
            assert abs(sn.real - target) < 1e-13
            assert cn.real > -1e-13


class TestNu:
    def test_single_width_formula(self):
        c = Couplings.from_kx_ky(0.4, 0.7, 1)
        th = 1.3
        g = float(gamma_of_theta(th, c))
        ga = float(gamma_of_theta(math.pi, c))
        gp = float(gamma_of_theta(0.0, c))
        expected = math.log(math.sinh((g + ga) / 2) / math.sinh((g + gp) / 2))
        assert nu_of_gamma(g, c) == pytest.approx(expected, rel=1e-13)

    def test_log_sinh_large_argument(self):
        assert log_sinh(500.0) == pytest.approx(500.0 - math.log(2.0), rel=1e-15)
        assert log_sinh(0.3) == pytest.approx(math.log(math.sinh(0.3)), rel=1e-14)

    def test_decays_with_lattice_width(self):
        worst = []
        for n in (4, 8, 16, 32):
            c = Couplings.from_kx_ky(0.4, 0.7, n)
            worst.append(max(np.max(np.abs(c.nu_a)), np.max(np.abs(c.nu_p))))
        assert worst[1] < worst[0] and worst[2] < worst[1] and worst[3] < worst[2]
        assert worst[-1] < 1e-4


def test_elliptic_identity_suite_everywhere_small():
    """All curve identities (quasiperiodic, kernels, auxiliary) below 1e-10."""
    for kx, ky, n in [(0.3, 0.9, 6), (0.7, 0.8, 4)]:
        res = elliptic_suite(Couplings.from_kx_ky(kx, ky, n))
        assert max(res.values()) < 1e-10, res
