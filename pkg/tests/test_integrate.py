import numpy as np
import pytest

from skdv import (
    IntegrationError,
    IntegratorOptions,
    ModelParams,
    Trajectory,
    conserved_triple,
    convergence_probe,
    evolve,
    make_grid,
    step,
)
from skdv.integrate import SplitStepper, sponge_profile
from skdv.model import FieldState


class TestIntegratorOptions:
    def test_rejects_bad_dt(self):
        with pytest.raises(ValueError):
            IntegratorOptions(dt=0.0)
        with pytest.raises(ValueError):
            IntegratorOptions(dt=-1e-3)

    def test_rejects_unknown_scheme(self):
        with pytest.raises(ValueError):
            IntegratorOptions(dt=1e-3, scheme="euler")

    def test_rejects_bad_sponge(self):
        with pytest.raises(ValueError):
            IntegratorOptions(dt=1e-3, sponge_width=0.3)
        with pytest.raises(ValueError):
            IntegratorOptions(dt=1e-3, sponge_strength=-1.0)


class TestTrajectory:
    def test_times_must_increase(self):
        traj = Trajectory()
        traj.append({"t": 0.0})
        traj.append({"t": 0.1})
        with pytest.raises(ValueError):
            traj.append({"t": 0.1})
        assert traj.times == [0.0, 0.1]


class TestSpongeProfile:
    def test_zero_when_disabled(self, grid):
        assert not sponge_profile(grid, 0.0, 5.0).any()
        assert not sponge_profile(grid, 0.1, 0.0).any()

    def test_shape(self, grid):
        sigma = sponge_profile(grid, 0.1, 2.0)
        assert sigma.max() <= 2.0 + 1e-12
        # zero on the interior, positive at the edges
        interior = np.abs(grid.nodes - grid.center) < 0.3 * grid.length
        assert not sigma[interior].any()
        assert sigma[0] > 0 and sigma[-1] > 0
        assert (sigma >= 0).all()


class TestStepping:
    def test_linear_flow_is_exact(self, grid, localized_state):
        # with all couplings zero and v = 0 (killing the self-advection)
        # the split flow is the exact spectral propagator, so halving dt
        # changes nothing beyond roundoff
        zero = ModelParams(0.0, 0.0, 0.0)
        linear_state = FieldState(grid, localized_state.u,
                                  np.zeros(grid.n), 0.0)
        result = convergence_probe(linear_state, zero, base_dt=1e-2,
                                   t_span=0.1)
        assert result.exact
        assert result.observed_order == float("inf")

    def test_strang_is_second_order(self, localized_state, params):
        result = convergence_probe(localized_state, params, base_dt=2e-3,
                                   t_span=0.4)
        assert not result.exact
        assert 1.7 < result.observed_order < 2.3

    def test_lie_is_first_order(self, localized_state, params):
        result = convergence_probe(localized_state, params, base_dt=2e-3,
                                   t_span=0.4, scheme="lie")
        assert 0.8 < result.observed_order < 1.4

    def test_step_preserves_mass_exactly(self, localized_state, params):
        # the nonlinear substep is a pure phase rotation of u and the linear
        # substeps are unit-modulus multipliers, so I1 is conserved
        # structurally, not just to truncation order
        opts = IntegratorOptions(dt=5e-3)
        s = localized_state.copy()
        i1_0 = conserved_triple(s, params).i1
        stepper = SplitStepper(s.grid, params, opts)
        for _ in range(200):
            s = stepper.step(s)
        i1_1 = conserved_triple(s, params).i1
        assert abs(i1_1 - i1_0) / i1_0 < 1e-13

    def test_step_wrapper_matches_stepper(self, localized_state, params):
        opts = IntegratorOptions(dt=1e-3)
        a = step(localized_state, params, opts)
        b = SplitStepper(localized_state.grid, params, opts).step(localized_state)
        assert np.array_equal(a.u, b.u)
        assert np.array_equal(a.v, b.v)
        assert a.t == b.t

    def test_sponge_damps_fields(self, params):
        g = make_grid(512, 100.0, 0.0)
        # mass near the boundary decays under the sponge
        x = g.nodes
        u = np.exp(-((x - 45.0) ** 2)).astype(complex)
        s = FieldState(g, u, np.zeros(g.n), 0.0)
        opts = IntegratorOptions(dt=1e-2, sponge_width=0.2, sponge_strength=5.0)
        stepper = SplitStepper(g, params, opts)
        m0 = conserved_triple(s, params).i1
        for _ in range(100):
            s = stepper.step(s)
        assert conserved_triple(s, params).i1 < 0.9 * m0


class TestEvolve:
    def test_sampling_schedule(self, localized_state, params):
        opts = IntegratorOptions(dt=1e-2)
        seen = []
        traj = evolve(localized_state, params, opts, t_final=0.5,
                      sample_dt=0.1, sample_fn=lambda s: {},
                      sink=lambda r: seen.append(r["t"]))
        assert traj.times == pytest.approx([0.0, 0.1, 0.2, 0.3, 0.4, 0.5])
        assert seen == traj.times

    def test_final_time_always_sampled(self, localized_state, params):
        opts = IntegratorOptions(dt=1e-2)
        traj = evolve(localized_state, params, opts, t_final=0.25,
                      sample_dt=0.1)
        assert traj.times[-1] == pytest.approx(0.25)

    def test_snapshots_are_deep_copies(self, localized_state, params):
        opts = IntegratorOptions(dt=1e-2)
        traj = evolve(localized_state, params, opts, t_final=0.2,
                      snapshot_times=[0.1, 0.2])
        assert [s.t for s in traj.snapshots] == pytest.approx([0.1, 0.2])
        assert not np.array_equal(traj.snapshots[0].v, traj.snapshots[1].v)

    def test_rejects_off_grid_times(self, localized_state, params):
        opts = IntegratorOptions(dt=1e-2)
        with pytest.raises(ValueError):
            evolve(localized_state, params, opts, t_final=0.105)
        with pytest.raises(ValueError):
            evolve(localized_state, params, opts, t_final=0.2,
                   snapshot_times=[0.055])
        with pytest.raises(ValueError):
            evolve(localized_state, params, opts, t_final=0.2, sample_dt=0.015)

    def test_rejects_backwards(self, localized_state, params):
        localized_state.t = 1.0
        with pytest.raises(ValueError):
            evolve(localized_state, params, IntegratorOptions(dt=1e-2), 0.5)

    def test_t_origin_makes_times_bit_exact(self, localized_state, params):
        # splitting 0 -> 2 at t=1 reproduces the one-shot times and fields
        opts = IntegratorOptions(dt=1e-3)
        full = evolve(localized_state.copy(), params, opts, t_final=2.0,
                      snapshot_times=[2.0])
        first = evolve(localized_state.copy(), params, opts, t_final=1.0,
                       snapshot_times=[1.0])
        mid = first.snapshots[0]
        second = evolve(mid, params, opts, t_final=2.0, snapshot_times=[2.0],
                        t_origin=0.0)
        a, b = full.snapshots[0], second.snapshots[0]
        assert a.t == b.t
        assert np.array_equal(a.u, b.u)
        assert np.array_equal(a.v, b.v)

    def test_abort_carries_partial_trajectory(self, params):
        # gigantic advection speed with a huge step overflows quickly
        g = make_grid(256, 10.0, 0.0)
        v = 1e8 * np.sin(2 * np.pi * g.nodes / 10.0)
        s = FieldState(g, np.zeros(g.n, complex), v, 0.0)
        opts = IntegratorOptions(dt=1.0, dealias=False)
        with pytest.raises(IntegrationError) as info:
            evolve(s, params, opts, t_final=50.0, sample_dt=1.0,
                   sample_fn=lambda st: {})
        assert info.value.trajectory is not None
        assert len(info.value.trajectory.records) >= 1
