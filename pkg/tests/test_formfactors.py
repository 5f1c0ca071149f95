import itertools
import math

import numpy as np
import pytest

from isingff.exceptions import DomainError
from isingff.formfactors import (FockState, FormFactorSpec, assemble_r_elliptic,
                                 assemble_r_matrix, ff_closed, ff_pfaffian,
                                 induced_rotation, nu_of_theta,
                                 two_particle_matrices, two_point_correlation,
                                 vacuum_overlap, xi_t)
from isingff.linalg import det_and_inverse, pfaffian
from isingff.spectral import Couplings, gamma_of_theta
from isingff.verification import formfactor_suite, rotation_suite

C4 = Couplings.from_kx_ky(0.4, 0.7, 4)


class TestFockTypes:
    def test_repeated_momenta_rejected(self):
        with pytest.raises(DomainError):
            FockState("a", (1, 1))
        with pytest.raises(DomainError):
            FockState("a", (2, 1))

    def test_bad_sector_rejected(self):
        with pytest.raises(DomainError):
            FockState("q", (0,))

    def test_odd_selection_rule_rejected(self):
        with pytest.raises(DomainError):
            FormFactorSpec(0, FockState("a", (0,)), FockState("p", ()))

    def test_sector_roles_enforced(self):
        with pytest.raises(DomainError):
            FormFactorSpec(0, FockState("p", ()), FockState("p", ()))

    def test_out_of_range_index(self):
        spec = FormFactorSpec(0, FockState("a", (7,)), FockState("p", (0,)))
        with pytest.raises(DomainError):
            ff_closed(spec, C4)


class TestInducedRotation:
    def test_width_one_modulus(self):
        c = Couplings.from_kx_ky(0.4, 0.7, 1)
        rot = induced_rotation(c, 0)
        assert abs(abs(rot.d[0, 0]) - 1.0) < 1e-14

    def test_relations(self):
        for n in (2, 4, 6):
            rot = induced_rotation(Couplings.from_kx_ky(0.3, 0.9, n), 1 % n)
            res = rot.relation_residuals()
            assert max(res.values()) < 1e-11, res

    def test_site_validation(self):
        with pytest.raises(DomainError):
            induced_rotation(C4, 4)


class TestNu:
    def test_width_one(self):
        c = Couplings.from_kx_ky(0.4, 0.7, 1)
        th = 0.9
        g = float(gamma_of_theta(th, c))
        expected = math.log(math.sinh((g + c.gamma_a[0]) / 2)
                            / math.sinh((g + c.gamma_p[0]) / 2))
        assert nu_of_theta(th, c) == pytest.approx(expected, rel=1e-13)

    def test_width_four_against_direct_product(self):
        th = 2.2
        g = float(gamma_of_theta(th, C4))
        num = np.prod(np.sinh((g + C4.gamma_a) / 2))
        den = np.prod(np.sinh((g + C4.gamma_p) / 2))
        assert nu_of_theta(th, C4) == pytest.approx(math.log(num / den), rel=1e-13)


class TestTwoParticleMatrices:
    @pytest.mark.parametrize("n", [1, 3, 6, 8])
    def test_inverse_residual(self, n):
        c = Couplings.from_kx_ky(0.5, 0.5, n)
        rot = induced_rotation(c, n // 2)
        dinv, _, _ = two_particle_matrices(c, n // 2)
        assert np.max(np.abs(dinv @ rot.d - np.eye(n))) < 1e-10

    def test_antisymmetry_and_zero_diagonal(self):
        _, bdinv, dinvc = two_particle_matrices(C4, 2)
        assert np.max(np.abs(bdinv + bdinv.T)) < 1e-14
        assert np.max(np.abs(dinvc + dinvc.T)) < 1e-14
        assert np.all(np.diag(bdinv) == 0.0)
        assert np.all(np.diag(dinvc) == 0.0)

    def test_full_rotation_suite(self):
        for kx, ky, n in [(0.3, 0.9, 5), (0.7, 0.8, 6)]:
            res = rotation_suite(Couplings.from_kx_ky(kx, ky, n), site=1)
            assert max(res.values()) < 1e-10, res


class TestVacuumOverlap:
    def test_width_one_is_unity(self):
        assert vacuum_overlap(Couplings.from_kx_ky(0.4, 0.7, 1)) \
            == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_against_lu_determinant(self, n):
        c = Couplings.from_kx_ky(0.35, 0.8, n)
        det, _ = det_and_inverse(induced_rotation(c, 0).d)
        assert abs(vacuum_overlap(c) - abs(det) ** 0.5) < 1e-10

    def test_equals_xi_xi_t(self):
        assert vacuum_overlap(C4) == pytest.approx(math.sqrt(C4.xi * xi_t(C4)),
                                                   rel=1e-13)

    def test_yang_limit(self):
        c = Couplings.from_kx_ky(0.5, 0.5, 64)
        yang = (1.0 - c.s ** (-2)) ** 0.125
        assert abs(vacuum_overlap(c) - yang) < 1e-6


class TestFormFactors:
    def test_vacuum_matrix_element(self):
        spec = FormFactorSpec(0, FockState("a", ()), FockState("p", ()))
        assert ff_pfaffian(spec, C4) == pytest.approx(vacuum_overlap(C4))
        assert ff_closed(spec, C4) == pytest.approx(vacuum_overlap(C4))

    def test_two_zero_is_single_pairing(self):
        spec = FormFactorSpec(1, FockState("a", (0, 2)), FockState("p", ()))
        _, _, dinvc = two_particle_matrices(C4, 1)
        expected = vacuum_overlap(C4) * dinvc[0, 2]
        assert ff_pfaffian(spec, C4) == pytest.approx(expected)

    def test_one_one_is_dinv_entry(self):
        spec = FormFactorSpec(2, FockState("a", (1,)), FockState("p", (3,)))
        dinv, _, _ = two_particle_matrices(C4, 2)
        expected = vacuum_overlap(C4) * dinv[1, 3]
        assert ff_closed(spec, C4) == pytest.approx(expected)
        assert ff_pfaffian(spec, C4) == pytest.approx(expected)

    def test_routes_agree_with_phase(self):
        for n in (2, 5):
            c = Couplings.from_kx_ky(0.3, 0.9, n)
            for m in range(0, min(n, 4) + 1):
                for nn in range(0, min(n, 4) + 1):
                    if (m + nn) % 2 or m + nn > 4:
                        continue
                    for bra in itertools.combinations(range(n), m):
                        for ket in itertools.combinations(range(n), nn):
                            spec = FormFactorSpec(n - 1, FockState("a", bra),
                                                  FockState("p", ket))
                            f1, f2 = ff_closed(spec, c), ff_pfaffian(spec, c)
                            assert abs(f1 - f2) <= 1e-10 * max(abs(f1), 1e-15)

    def test_translation_phase(self):
        c = Couplings.from_kx_ky(0.4, 0.7, 5)
        spec0 = FormFactorSpec(0, FockState("a", (0, 3)), FockState("p", ()))
        f0 = ff_closed(spec0, c)
        shift = -c.thetas_a[[0, 3]].sum()
        for l in range(5):
            fl = ff_closed(FormFactorSpec(l, spec0.bra, spec0.ket), c)
            assert abs(fl - np.exp(1j * l * shift) * f0) < 1e-12

    def test_pairing_matrix_elliptic_assembly(self):
        spec = FormFactorSpec(1, FockState("a", (0, 1, 2)), FockState("p", (2,)))
        r1 = assemble_r_matrix(spec, C4)
        r2 = assemble_r_elliptic(spec, C4)
        assert np.max(np.abs(r1 - r2)) < 1e-12

    def test_bra_reversal_sign(self):
        # conjugation bookkeeping: reversing the four bra momenta is an odd
        # permutation pattern with sign (-1)^{m(m-1)/2}
        c = Couplings.from_kx_ky(0.3, 0.9, 6)
        spec = FormFactorSpec(2, FockState("a", (0, 2, 3, 5)), FockState("p", ()))
        r = assemble_r_matrix(spec, c)
        perm = np.eye(4)[::-1]
        assert abs(pfaffian(perm @ r @ perm.T)
                   - (-1.0) ** (4 * 3 // 2) * pfaffian(r)) < 1e-14

    def test_full_suite(self):
        res = formfactor_suite(Couplings.from_kx_ky(0.5, 0.5, 4))
        assert max(res.values()) < 1e-10, res


class TestTwoPointCorrelation:
    def test_coincident_points(self):
        assert two_point_correlation(C4, 4, 0, 0) == 1.0

    def test_reflection_symmetry_in_dy(self):
        for dy in (1, 2, 3):
            a = two_point_correlation(C4, 5, 1, dy)
            b = two_point_correlation(C4, 5, 1, C4.n - dy)
            assert a == pytest.approx(b, rel=1e-12)

    def test_row_periodicity(self):
        assert two_point_correlation(C4, 5, 1, 1) \
            == pytest.approx(two_point_correlation(C4, 5, 1, 1 + C4.n), rel=1e-12)

    def test_dx_bounds(self):
        with pytest.raises(DomainError):
            two_point_correlation(C4, 3, 4, 0)

    def test_bad_eps(self):
        with pytest.raises(DomainError):
            two_point_correlation(C4, 3, 1, 0, eps_x=2)

    def test_cutoff_warning(self):
        c = Couplings.from_kx_ky(0.4, 0.7, 12)
        with pytest.warns(UserWarning, match="cutoff"):
            two_point_correlation(c, 2, 1, 0, max_particles=0)

    @pytest.mark.filterwarnings("ignore:particle-number cutoff")
    def test_cutoff_converges_to_full_sum(self):
        c = Couplings.from_kx_ky(0.4, 0.7, 6)
        full = two_point_correlation(c, 6, 2, 1)
        trunc = two_point_correlation(c, 6, 2, 1, max_particles=4)
        assert abs(full - trunc) < 1e-6
