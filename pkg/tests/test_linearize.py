import math
from dataclasses import replace

import numpy as np
import pytest

from eitnoise import (FluctuationSystem, NonStationaryState, SingularLyapunov,
                      SteadyState, build_diffusion, build_drift,
                      cnumber_rhs, conjugation_permutation,
                      lyapunov_covariance, solve_steady_state,
                      stability_check, VARIABLES)
from eitnoise.model import (A1, A1C, A2, A2C, S01, S02, S10, S12, S20, S21,
                            W1, W2, SqueezeSpec, SystemParams)

from conftest import make_symmetric


def synthetic_system(drift, diffusion):
    return FluctuationSystem(ordering=VARIABLES,
                             drift=np.asarray(drift, dtype=complex),
                             diffusion=np.asarray(diffusion, dtype=complex))


class TestDrift:
    def test_coherence_row_couples_to_inversion_with_i_g_alpha(
            self, fig2_params):
        s = solve_steady_state(fig2_params)
        B = build_drift(fig2_params, s)
        expected = 1j * fig2_params.g_1 * complex(fig2_params.alpha_1)
        assert B[S10, W1] == pytest.approx(expected)

    def test_cavity_row_couples_to_coherence_with_minus_i_g(
            self, fig2_params):
        s = solve_steady_state(fig2_params)
        B = build_drift(fig2_params, s)
        assert B[A1, S10] == pytest.approx(-1j * fig2_params.g_1)

    def test_undriven_atoms_lose_all_rabi_couplings(self):
        p = SystemParams(gamma_rad_1=1.0, gamma_rad_2=1.0, kappa_1=0.15,
                         kappa_2=0.15, g_1=0.5, g_2=0.5, n_atoms=4,
                         alpha_1=0.0, alpha_2=0.0)
        # with no drive the |2>-pumped ground configuration is stationary
        s = SteadyState(alpha1=0.0, alpha2=0.0, sigma01=0.0, sigma02=0.0,
                        sigma12=0.0, w1=0.0, w2=-4.0, sigma00=0.0,
                        sigma11=0.0, sigma22=4.0)
        B = build_drift(p, s)
        # every Rabi-weighted coupling vanishes: the atomic block is purely
        # dissipative (the bare +-i g atom-field couplings remain)
        atoms = [S02, S01, S12, W1, W2, S21, S10, S20]
        atomic_block = B[np.ix_(atoms, atoms)]
        off_diag = atomic_block - np.diag(np.diag(atomic_block))
        # W1/W2 decay mixing is the only surviving off-diagonal structure
        off_diag[atoms.index(W1), atoms.index(W2)] = 0.0
        off_diag[atoms.index(W2), atoms.index(W1)] = 0.0
        assert np.abs(off_diag).max() == 0.0
        assert B[A1, S10] == pytest.approx(-1j * 0.5)
        assert B[S02, A2C] == pytest.approx(-1j * 0.5 * s.w2)

    def test_rows_are_first_order_exact_by_finite_differences(
            self, fig2_params):
        s = solve_steady_state(fig2_params)
        B = build_drift(fig2_params, s)
        v0 = s.vector()
        h = 1e-6
        worst = 0.0
        for j in range(12):
            e = np.zeros(12, dtype=complex)
            e[j] = h
            col = (cnumber_rhs(fig2_params, v0 + e)
                   - cnumber_rhs(fig2_params, v0 - e)) / (2.0 * h)
            worst = max(worst, np.abs(col - B[:, j]).max())
        assert worst < 1e-6

    def test_conjugation_covariance(self, fig2_system):
        P = conjugation_permutation()
        B = fig2_system.drift
        assert np.abs(P @ B.conjugate() @ P - B).max() < 1e-12

    def test_non_stationary_input_rejected(self, fig2_params):
        s = solve_steady_state(fig2_params)
        bad = replace(s, sigma11=s.sigma11 + 0.5, w1=s.w1 - 0.5)
        with pytest.raises(NonStationaryState):
            build_drift(fig2_params, bad)


class TestDiffusion:
    def test_symmetry(self, fig2_system):
        D = fig2_system.diffusion
        assert np.abs(D - D.T).max() == 0.0

    def test_probe_squeezing_entry(self, fig2_params):
        s = solve_steady_state(fig2_params)
        D = build_diffusion(fig2_params, s)
        expected = -fig2_params.kappa_2 * math.cosh(3.0) * math.sinh(3.0)
        assert D[A2, A2] == pytest.approx(expected)
        assert D[A2C, A2C] == pytest.approx(expected)
        assert D[A2, A2C] == pytest.approx(
            fig2_params.kappa_2 * math.sinh(3.0) ** 2)

    def test_coherent_pump_has_no_field_noise(self, fig2_params):
        # normally ordered vacuum carries no correlators; the vacuum unit
        # enters the reported spectra analytically
        s = solve_steady_state(fig2_params)
        D = build_diffusion(fig2_params, s)
        pump = np.ix_([A1, A1C], [A1, A1C])
        assert np.abs(D[pump]).max() == 0.0

    def test_vacuum_inputs_empty_whole_field_block(self, fig2_params):
        p = replace(fig2_params, squeeze_2=SqueezeSpec())
        s = solve_steady_state(p)
        D = build_diffusion(p, s)
        fields = [A2C, A1C, A1, A2]
        assert np.abs(D[np.ix_(fields, fields)]).max() == 0.0

    def test_ground_coherence_cross_decay_entry(self, fig2_params):
        p = replace(fig2_params, gamma_cross=1.0)
        s = solve_steady_state(p)
        D = build_diffusion(p, s)
        # dark state: no excited population, real ground coherence
        assert D[S12, S21] == pytest.approx(2.0 * 1.0 * s.sigma11)
        assert D[S21, S12] == pytest.approx(2.0 * 1.0 * s.sigma11)

    def test_atomic_field_cross_block_zero(self, fig2_system):
        D = fig2_system.diffusion
        fields = [A2C, A1C, A1, A2]
        atoms = [i for i in range(12) if i not in fields]
        assert np.abs(D[np.ix_(fields, atoms)]).max() == 0.0


class TestStability:
    def test_identity_decay_is_stable(self):
        fs = synthetic_system(-np.eye(12), np.eye(12))
        report = stability_check(fs)
        assert report.stable
        assert report.max_real_part == pytest.approx(-1.0)

    def test_positive_diagonal_entry_is_unstable(self):
        drift = -np.eye(12)
        drift[3, 3] = +1.0
        report = stability_check(synthetic_system(drift, np.eye(12)))
        assert not report.stable

    def test_fig2_is_stable(self, fig2_system):
        report = stability_check(fig2_system)
        assert report.stable
        assert report.max_real_part < 0.0
        assert report.soft_modes <= 1


class TestLyapunov:
    def test_scalar_case(self):
        fs = synthetic_system(-np.eye(12), np.eye(12))
        X = lyapunov_covariance(fs)
        assert np.allclose(X, 0.5 * np.eye(12), atol=1e-12)

    def test_soft_mode_rejected(self):
        drift = -np.eye(12, dtype=complex)
        drift[0, 0] = 0.0
        with pytest.raises(SingularLyapunov):
            lyapunov_covariance(synthetic_system(drift, np.eye(12)))

    def test_solution_satisfies_equation(self, fig2_system):
        X = lyapunov_covariance(fig2_system)
        B, D = fig2_system.drift, fig2_system.diffusion
        res = B @ X + X @ B.conjugate().T + D
        assert np.abs(res).max() < 1e-9 * max(1.0, np.abs(D).max())
