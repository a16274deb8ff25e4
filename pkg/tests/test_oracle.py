import math

import numpy as np
import pytest

from casimir_duomode import gaussian, slowamp
from casimir_duomode.cavity import NU_CUBICAL, ModelParams
from casimir_duomode.oracle import (
    CovarianceState,
    OracleOptions,
    oracle_fundamental_matrices,
    oracle_fundamental_matrix,
    propagate_covariance,
    rhs,
    stroboscopic_times,
    thermal_covariance,
)

EPS = 1e-3


class TestOptions:
    def test_default_step(self):
        p = ModelParams(epsilon=EPS)
        assert OracleOptions().resolve_dt(p) == pytest.approx(2 * math.pi / 600)

    def test_step_invariant(self):
        p = ModelParams(epsilon=EPS)
        limit = 2 * math.pi / 300
        OracleOptions(dt=limit * 0.999).resolve_dt(p)
        with pytest.raises(ValueError):
            OracleOptions(dt=limit * 2.0).resolve_dt(p)

    def test_method_fixed(self):
        with pytest.raises(ValueError):
            OracleOptions(method="RK45")

    def test_epsilon_tilde_default(self):
        p = ModelParams(epsilon=EPS)
        assert OracleOptions().resolve_epsilon_tilde(p) == EPS
        assert OracleOptions(epsilon_tilde=0.0).resolve_epsilon_tilde(p) == 0.0


class TestRhs:
    def test_drive_off_is_harmonic(self):
        p = ModelParams(epsilon=1e-300, big_delta=0.05, nu=NU_CUBICAL)
        d = rhs(0.7, np.array([1.0, 0.2, -0.3, 0.4]), p)
        np.testing.assert_allclose(
            d, [0.2, -1.0, 0.4, (9 + 6 * 0.05) * 0.3], rtol=1e-12
        )

    def test_initial_kick(self):
        p = ModelParams(epsilon=EPS, nu=NU_CUBICAL)
        d = rhs(0.0, np.array([1.0, 0.0, 0.0, 0.0]), p)
        assert d[1] == pytest.approx(-(1 + 4 * EPS), rel=1e-14)
        assert d[3] == pytest.approx(-24 * p.mu * EPS, rel=1e-14)

    def test_decoupled_mode3(self):
        p = ModelParams(epsilon=EPS, nu=0.0)
        d = rhs(0.3, np.array([0.0, 0.0, 1.0, 0.0]), p, OracleOptions(epsilon_tilde=0.0))
        assert d[3] == pytest.approx(-9.0, rel=1e-14)
        assert d[1] == 0.0


class TestIntegrator:
    def test_identity_at_zero(self):
        M = oracle_fundamental_matrix(0.0, ModelParams(epsilon=EPS, nu=NU_CUBICAL))
        np.testing.assert_array_equal(M.entries, np.eye(4))

    def test_grid_must_be_sorted(self):
        p = ModelParams(epsilon=EPS)
        with pytest.raises(ValueError):
            oracle_fundamental_matrices([2.0, 1.0], p)
        with pytest.raises(ValueError):
            oracle_fundamental_matrices([-1.0], p)

    def test_fourth_order_convergence(self):
        p = ModelParams(epsilon=0.05, nu=NU_CUBICAL)
        t_end = 20.0
        ref = oracle_fundamental_matrix(t_end, p, OracleOptions(dt=2 * math.pi / 4800)).entries
        errs = []
        for div in (600, 1200):
            M = oracle_fundamental_matrix(t_end, p, OracleOptions(dt=2 * math.pi / div)).entries
            errs.append(float(np.abs(M - ref).max()))
        ratio = errs[0] / errs[1]
        assert 12.0 <= ratio <= 20.0

    def test_energy_conservation_drive_off(self):
        # epsilon = 1e-300 is numerically a switched-off drive; both modes
        # must keep E = (v^2 + w^2 x^2)/2 to 1e-10 over t in [0, 1e4],
        # which needs a finer step than the default (RK4 amplitude decay
        # scales like t * (3 dt)^6 / 72)
        p = ModelParams(epsilon=1e-300, nu=NU_CUBICAL)
        M = oracle_fundamental_matrix(
            1e4, p, OracleOptions(dt=5e-4, epsilon_tilde=0.0)
        ).entries
        for cols, w2 in (((0, 1), 1.0), ((2, 3), 9.0)):
            for init, e0 in ((np.array([1.0, 0.0]), w2 / 2), (np.array([0.0, 1.0]), 0.5)):
                x, v = M[np.ix_(cols, cols)] @ init
                e = 0.5 * (v * v + w2 * x * x)
                assert abs(e / e0 - 1.0) <= 1e-10

    def test_matches_closed_form_at_stroboscopic_times(self):
        p = ModelParams(epsilon=EPS, nu=NU_CUBICAL)
        ts = stroboscopic_times(p, tau_max=0.5, n_samples=8)
        sig0 = thermal_covariance(1.0, 1.0)
        for M in oracle_fundamental_matrices(ts, p):
            tau = p.tau(M.t)
            sig = propagate_covariance(M, sig0)
            e1 = gaussian.observables_from_covariance(sig, 1).e_tilde
            assert e1 == pytest.approx(
                gaussian.energy_exact_resonance(tau, p, 1), rel=5 * EPS
            )

    def test_unit_determinant(self):
        # exact flow is volume preserving (traceless coefficient matrix);
        # frozen regression bound covers the RK4 residue at the default step
        p = ModelParams(epsilon=EPS, nu=NU_CUBICAL)
        for t_end in (500.0, 4000.0):
            M = oracle_fundamental_matrix(t_end, p).entries
            assert abs(np.linalg.det(M) - 1.0) <= 4e-9 * max(t_end, 1.0)

    def test_stroboscopic_grid_structure(self):
        p = ModelParams(epsilon=EPS, delta=2e-3, nu=NU_CUBICAL)
        ts = stroboscopic_times(p, tau_max=1.0, n_samples=10)
        period = math.pi / p.omega_bar
        assert all(abs(t / period - round(t / period)) < 1e-9 for t in ts)
        assert ts[-1] <= p.time_from_tau(1.0) + period


class TestCovariance:
    def test_vacuum_moments(self):
        sig = thermal_covariance(1.0, 1.0)
        np.testing.assert_allclose(
            np.diag(sig.sigma), [0.5, 0.5, 1.0 / 6.0, 1.5], rtol=1e-15
        )
        assert sig.mode_iup(1) == pytest.approx(0.25, rel=1e-15)
        assert sig.mode_iup(3) == pytest.approx(0.25, rel=1e-15)

    def test_thermal_energies(self):
        sig = thermal_covariance(2.0, 1.5)
        o1 = gaussian.observables_from_covariance(sig, 1)
        o3 = gaussian.observables_from_covariance(sig, 3)
        assert o1.e_tilde == pytest.approx(1.0)  # E1 = theta1/2
        assert 3 * o3.e_tilde == pytest.approx(2.25)  # E3 = 3 theta3/2

    def test_mean_photon_number(self):
        sig = thermal_covariance(5.0, 1.0)
        assert gaussian.observables_from_covariance(sig, 1).mean_photons == pytest.approx(2.0)

    def test_rejects_subvacuum_theta(self):
        with pytest.raises(ValueError):
            thermal_covariance(0.9, 1.0)

    def test_propagate_identity(self):
        sig = thermal_covariance(1.3, 2.0)
        out = propagate_covariance(
            slowamp.FundamentalMatrix(entries=np.eye(4), t=0.0), sig
        )
        np.testing.assert_array_equal(out.sigma, sig.sigma)

    def test_propagation_preserves_positivity_and_heisenberg(self):
        p = ModelParams(epsilon=EPS, nu=NU_CUBICAL)
        sig = thermal_covariance(1.0, 1.0)
        for tau in np.linspace(0.1, 2.0, 8):
            M = slowamp.fundamental_matrix_generic(p.time_from_tau(float(tau)), p)
            sig_t = propagate_covariance(M, sig)
            assert float(np.linalg.eigvalsh(sig_t.sigma).min()) >= -1e-12
            assert sig_t.mode_iup(1) >= 0.25 - 1e-10
            assert sig_t.mode_iup(3) >= 0.25 - 1e-10

    def test_covariance_validation(self):
        with pytest.raises(ValueError):
            CovarianceState(sigma=np.array([[1.0, 2.0], [2.0, 1.0]]))
        bad = np.eye(4)
        bad[0, 1] = 0.5  # asymmetric
        with pytest.raises(ValueError):
            CovarianceState(sigma=bad)
