import math

import numpy as np
import pytest

from isingff.exceptions import DomainError, ResourceError
from isingff.formfactors import FockState, FormFactorSpec, two_point_correlation
from isingff.oracle import (build_operators, labeled_spectrum,
                            oracle_correlation, oracle_ff_modulus,
                            predicted_fock_labels)
from isingff.spectral import Couplings

C4 = Couplings.from_kx_ky(0.4, 0.7, 4)
OPS4 = build_operators(C4, eps_y=1)
SPECT4 = labeled_spectrum(OPS4, C4)


class TestOperators:
    def test_commutators_and_symmetry(self):
        res = OPS4.commutator_residuals()
        assert max(res.values()) < 1e-12, res

    def test_positive_spectrum(self):
        w = np.linalg.eigvalsh(OPS4.v)
        assert np.all(w > 0.0)

    def test_width_one_reduces_to_dressed_flip(self):
        c = Couplings.from_kx_ky(0.4, 0.7, 1)
        ops = build_operators(c, eps_y=1)
        assert ops.v.shape == (2, 2)
        scale = (2 * math.sinh(2 * c.kx)) ** 0.5 * math.exp(c.ky)
        expected = scale * np.array(
            [[math.cosh(c.kx_star), math.sinh(c.kx_star)],
             [math.sinh(c.kx_star), math.cosh(c.kx_star)]])
        np.testing.assert_allclose(ops.v, expected, rtol=1e-14)

    def test_size_limit(self):
        with pytest.raises(ResourceError):
            build_operators(Couplings.from_kx_ky(0.4, 0.7, 13))

    def test_spin_flip_anticommutes_with_spin(self):
        s0 = np.diag(OPS4.sl[0])
        assert np.max(np.abs(s0 @ OPS4.u + OPS4.u @ s0)) == 0.0


class TestLabeledSpectrum:
    def test_state_count_per_sector(self):
        for eps_y in (1, -1):
            ops = build_operators(C4, eps_y=eps_y)
            spect = labeled_spectrum(ops, C4)
            a_states = [st for st in spect if st.sector == "a"]
            p_states = [st for st in spect if st.sector == "p"]
            assert len(a_states) == len(p_states) == 2 ** (C4.n - 1)
            parity = 0 if eps_y == 1 else 1
            assert all(len(st.indices) % 2 == parity for st in spect)

    def test_vacuum_is_top_of_antiperiodic_sector(self):
        vac = next(st for st in SPECT4 if st.sector == "a" and st.indices == ())
        assert vac.eigenvalue == pytest.approx(max(st.eigenvalue for st in SPECT4))
        assert abs(vac.t_eigenvalue - 1.0) < 1e-10
        assert vac.charge == 1

    def test_spectrum_multiset_matches_prediction(self):
        for n in (2, 5, 6, 8):
            c = Couplings.from_kx_ky(0.4, 0.7, n)
            ops = build_operators(c, eps_y=1)
            w = np.sort(np.linalg.eigvalsh(ops.v))
            pred = np.sort([lab[2] for lab in predicted_fock_labels(c, 1)])
            assert np.max(np.abs(w - pred) / pred) < 1e-9

    def test_translation_eigenvalues(self):
        for st in SPECT4:
            thetas = C4.thetas(st.sector)[list(st.indices)]
            assert abs(st.t_eigenvalue - np.exp(-1j * thetas.sum())) < 1e-9

    def test_momentum_reversal_doublets_share_block(self):
        blocks = {}
        for st in SPECT4:
            blocks.setdefault(st.block, []).append(st.indices)
        multi = [sorted(v) for v in blocks.values() if len(v) > 1]
        assert multi == [[(0, 1), (2, 3)]]

    def test_eps_minus_one_spectrum(self):
        ops = build_operators(C4, eps_y=-1)
        spect = labeled_spectrum(ops, C4)
        w = np.sort(np.linalg.eigvalsh(ops.v))
        pred = np.sort([lab[2] for lab in predicted_fock_labels(C4, -1)])
        assert np.max(np.abs(w - pred) / pred) < 1e-9
        for st in spect:
            thetas = C4.thetas(st.sector)[list(st.indices)]
            assert abs(st.t_eigenvalue - np.exp(-1j * thetas.sum())) < 1e-9

    def test_trace_power_spectral_vs_dense(self):
        m = 6
        w = np.linalg.eigvalsh(OPS4.v / np.linalg.eigvalsh(OPS4.v)[-1])
        dense = np.trace(np.linalg.matrix_power(
            OPS4.v / np.linalg.eigvalsh(OPS4.v)[-1], m))
        assert abs(np.sum(w ** m) / dense - 1.0) < 1e-10


class TestOracleMatrixElements:
    def test_width_one_vacuum_element(self):
        c = Couplings.from_kx_ky(0.4, 0.7, 1)
        ops = build_operators(c, eps_y=1)
        spect = labeled_spectrum(ops, c)
        spec = FormFactorSpec(0, FockState("a", ()), FockState("p", ()))
        assert oracle_ff_modulus(ops, spect, spec) == pytest.approx(1.0)

    def test_same_sector_elements_vanish(self):
        a_states = [st for st in SPECT4 if st.sector == "a"]
        s1 = np.diag(OPS4.sl[1])
        val = abs(np.vdot(a_states[0].vector, s1 @ a_states[1].vector))
        assert val < 1e-12

    def test_odd_total_particle_number_vanishes(self):
        # an even antiperiodic state against an odd periodic one (taken from
        # the eps_y = -1 tower) carries the same flip charge, so the spin
        # matrix element between them is zero
        ops_m = build_operators(C4, eps_y=-1)
        spect_m = labeled_spectrum(ops_m, C4)
        even_a = next(st for st in SPECT4 if st.sector == "a" and st.indices == ())
        odd_p = next(st for st in spect_m if st.sector == "p" and len(st.indices) == 1)
        s0 = np.diag(OPS4.sl[0])
        assert abs(np.vdot(even_a.vector, s0 @ odd_p.vector)) < 1e-12

    def test_missing_state_reported(self):
        spec = FormFactorSpec(0, FockState("a", (0,)), FockState("p", (1,)))
        with pytest.raises(DomainError):
            oracle_ff_modulus(OPS4, SPECT4, spec)  # odd states, eps_y=+1 tower


class TestOracleCorrelation:
    def test_coincident_points(self):
        assert oracle_correlation(OPS4, 4, 0, 0) == pytest.approx(1.0)

    def test_reflection_in_dy(self):
        a = oracle_correlation(OPS4, 4, 1, 1)
        b = oracle_correlation(OPS4, 4, 1, C4.n - 1)
        assert a == pytest.approx(b, rel=1e-12)

    def test_monotone_approach_to_cylinder(self):
        vals = [oracle_correlation(OPS4, m, 1, 0) for m in (4, 8, 12, 16)]
        diffs = np.abs(np.diff(vals))
        assert np.all(np.diff(diffs) < 0)

    def test_matches_spectral_route(self):
        for eps_x in (1, -1):
            v1 = two_point_correlation(C4, 4, 1, 2, eps_x=eps_x, eps_y=1)
            v2 = oracle_correlation(OPS4, 4, 1, 2, eps_x=eps_x)
            assert v1 == pytest.approx(v2, abs=1e-12)

    def test_limits(self):
        with pytest.raises(ResourceError):
            oracle_correlation(OPS4, 65, 1, 0)
        with pytest.raises(DomainError):
            oracle_correlation(OPS4, 4, 5, 0)
