import math

import numpy as np
import pytest

from skdv import (
    GroundStateError,
    ModelParams,
    SolitaryWaveParams,
    analytic_tendency,
    explicit_profile,
    ground_state_solve,
    make_grid,
    sech,
    solitary_initial_data,
    solitary_speed,
    spectral_derivative,
    track_peak,
    validated_model_params,
)
from skdv.waves import WaveError

ALPHA = -1.0 / 12.0


class TestSech:
    def test_matches_cosh_in_safe_range(self):
        x = np.linspace(-20, 20, 1001)
        assert np.allclose(sech(x), 1.0 / np.cosh(x), atol=1e-15)

    def test_no_overflow_for_huge_arguments(self):
        with np.errstate(over="raise"):
            vals = sech(np.array([-1e4, 1e4, 710.0]))
        assert (vals >= 0).all()
        assert vals.max() < 1e-300


class TestParams:
    def test_speed_relation(self):
        assert solitary_speed(1.0, ALPHA) == pytest.approx(4.0 + 1.0 / 288.0)

    def test_omega_default(self):
        p = SolitaryWaveParams(c_star=1.0, alpha=ALPHA)
        assert p.omega == pytest.approx(p.c**2 / 4.0 + 1.0)

    def test_rejects_bad_cstar(self):
        with pytest.raises(WaveError):
            SolitaryWaveParams(c_star=0.0, alpha=ALPHA)

    @pytest.mark.parametrize("alpha", [0.0, -1.0 / 6.0, 0.1, -1.0])
    def test_rejects_alpha_outside_window(self, alpha):
        with pytest.raises(WaveError):
            SolitaryWaveParams(c_star=1.0, alpha=alpha)

    def test_validated_model_params(self):
        p = validated_model_params(ALPHA)
        assert (p.alpha, p.beta, p.gamma) == (ALPHA, -1.0, ALPHA / 2.0)
        with pytest.raises(WaveError):
            validated_model_params(ALPHA, beta=1.0)


class TestExplicitProfile:
    def test_stationary_residual(self):
        # the profiles satisfy the carrier-removed stationary system
        #   phi'' - sigma phi = alpha psi phi + beta phi^3
        #   psi'' - c psi = gamma phi^2 - psi^2 / 2
        # exactly; this pins down (beta, gamma, omega) = (-1, alpha/2, c^2/4+c*)
        g = make_grid(2048, 200.0, 0.0)
        for c_star in (0.5, 1.0, 2.0):
            wp = SolitaryWaveParams(c_star=c_star, alpha=ALPHA)
            mp = validated_model_params(ALPHA)
            phi, psi = explicit_profile(wp, g.nodes)
            sigma = wp.omega - wp.c**2 / 4.0
            r1 = (spectral_derivative(g, phi, 2) - sigma * phi
                  - mp.alpha * psi * phi - mp.beta * phi**3)
            r2 = (spectral_derivative(g, psi, 2) - wp.c * psi
                  - mp.gamma * phi**2 + 0.5 * psi**2)
            assert np.max(np.abs(r1)) < 1e-9
            assert np.max(np.abs(r2)) < 1e-8

    def test_amplitudes(self):
        wp = SolitaryWaveParams(c_star=1.0, alpha=ALPHA)
        phi, psi = explicit_profile(wp, 0.0)
        assert phi == pytest.approx(math.sqrt(2.0 * (1.0 + 6.0 * ALPHA)))
        assert psi == pytest.approx(12.0)


class TestInitialData:
    def test_carrier_and_offset(self):
        g = make_grid(1024, 200.0, 0.0)
        wp = SolitaryWaveParams(c_star=1.0, alpha=ALPHA, x0=5.0)
        state = solitary_initial_data(wp, g)
        j = np.argmax(state.v)
        assert g.nodes[j] == pytest.approx(5.0, abs=g.dx)
        # |u| is the real profile, phase advances at wavenumber c/2
        phi, _ = explicit_profile(wp, g.nodes - 5.0)
        assert np.allclose(np.abs(state.u), phi, atol=1e-13)

    def test_warns_on_tight_box(self):
        g = make_grid(256, 20.0, 0.0)
        wp = SolitaryWaveParams(c_star=1.0, alpha=ALPHA)
        with pytest.warns(UserWarning, match="boundary"):
            solitary_initial_data(wp, g)

    def test_tendency_oracle_against_rhs(self):
        from skdv import rhs

        g = make_grid(2048, 200.0, 0.0)
        wp = SolitaryWaveParams(c_star=1.0, alpha=ALPHA)
        mp = validated_model_params(ALPHA)
        state = solitary_initial_data(wp, g)
        du, dv = rhs(state, mp, dealias=True)
        du_e, dv_e = analytic_tendency(wp, g)
        # the 2/3 dealias cutoff truncates the carrier-shifted spectrum,
        # so the filtered tendency differs from the closed form at the
        # truncation level rather than roundoff
        assert np.max(np.abs(du - du_e)) < 1e-6
        assert np.max(np.abs(dv - dv_e)) < 1e-6


class TestTrackPeak:
    def test_subgrid_accuracy(self):
        g = make_grid(1024, 100.0, 0.0)
        # shift deliberately off the node lattice
        x0 = 3.0 + 0.37 * g.dx
        v = sech(g.nodes - x0) ** 2
        assert track_peak(g, v) == pytest.approx(x0, abs=1e-3)

    def test_wraps_at_boundary(self):
        g = make_grid(1024, 100.0, 0.0)
        # a genuinely periodic profile peaked at the first node: its left
        # neighbour lives at the other end of the array
        d = (g.nodes - g.nodes[0] + g.length / 2) % g.length - g.length / 2
        v = sech(d) ** 2
        assert track_peak(g, v) == pytest.approx(g.nodes[0], abs=1e-6)


class TestGroundStateSolve:
    def setup_method(self):
        self.g = make_grid(2048, 200.0, 0.0)
        self.wp = SolitaryWaveParams(c_star=1.0, alpha=ALPHA)
        self.mp = validated_model_params(ALPHA)
        self.phi_e, self.psi_e = explicit_profile(self.wp, self.g.nodes)

    def test_exact_profile_is_fixed_point(self):
        phi, psi, res = ground_state_solve(
            self.mp, c=self.wp.c, omega=self.wp.omega, grid=self.g,
            tol=1e-10, max_iter=5, seed=(self.phi_e, self.psi_e),
        )
        assert res <= 1e-10
        assert np.max(np.abs(phi - self.phi_e)) < 1e-10

    def test_converges_from_perturbed_seed(self):
        phi, psi, res = ground_state_solve(
            self.mp, c=self.wp.c, omega=self.wp.omega, grid=self.g,
            tol=1e-10, max_iter=300,
            seed=(1.2 * self.phi_e, 0.8 * self.psi_e),
        )
        assert res <= 1e-10
        assert np.max(np.abs(phi - self.phi_e)) < 1e-8
        assert np.max(np.abs(psi - self.psi_e)) < 1e-8

    def test_converges_from_default_seed(self):
        phi, psi, res = ground_state_solve(
            self.mp, c=self.wp.c, omega=self.wp.omega, grid=self.g,
            tol=1e-10, max_iter=400,
        )
        assert res <= 1e-10
        assert np.max(np.abs(phi - self.phi_e)) < 1e-8

    def test_rejects_degenerate_seed(self):
        z = np.zeros(self.g.n)
        with pytest.raises(GroundStateError):
            ground_state_solve(self.mp, c=self.wp.c, omega=self.wp.omega,
                               grid=self.g, seed=(z, z))

    def test_rejects_bad_tol(self):
        with pytest.raises(ValueError):
            ground_state_solve(self.mp, c=self.wp.c, omega=self.wp.omega,
                               grid=self.g, tol=0.0)

    def test_rejects_non_localized_regime(self):
        with pytest.raises(WaveError):
            ground_state_solve(self.mp, c=4.0, omega=1.0, grid=self.g)

    def test_nonconvergence_reports_residual(self):
        with pytest.raises(GroundStateError) as info:
            ground_state_solve(self.mp, c=self.wp.c, omega=self.wp.omega,
                               grid=self.g, tol=1e-14, max_iter=1,
                               seed=(1.5 * self.phi_e, 0.5 * self.psi_e))
        assert info.value.residual is not None
