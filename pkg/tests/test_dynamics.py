"""Kick-map tests: conservation laws, revivals, oracle equivalences."""

import numpy as np
import pytest

from ptrotor import dynamics, errors, floquet, model

TWO_PI_BETA_07 = 0.7 / (2.0 * np.pi)


class TestKickStep:
    def test_hermitian_norm_conserved_per_step(self):
        p = model.RotorParams(3.0, 0.0, beta=TWO_PI_BETA_07, n_sites=120)
        state = dynamics.initial_state(p)
        for _ in range(20):
            state = dynamics.kick_step(state, p)
            assert state.norm() == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("lam", [0.0, 0.3, 0.9])
    def test_antiresonance_two_kick_revival(self, lam):
        p = model.RotorParams.from_rational(1, 2, 3.0, lam, n_sites=80)
        state = dynamics.initial_state(p)
        after = dynamics.kick_step(dynamics.kick_step(state, p), p)
        assert np.abs(after.amplitudes - state.amplitudes).max() < 1e-10

    def test_antiresonance_revival_generic_state(self):
        p = model.RotorParams.from_rational(1, 2, 3.0, 0.4, n_sites=90)
        amplitudes = np.zeros(181, complex)
        filler = np.exp(1j * np.linspace(0.0, 5.0, 21)) * np.linspace(1.0, 0.2, 21)
        amplitudes[80:101] = filler / np.linalg.norm(filler)
        state = dynamics.MomentumState(amplitudes, 0)
        after = dynamics.kick_step(dynamics.kick_step(state, p), p)
        assert np.abs(after.amplitudes - state.amplitudes).max() < 1e-10

    def test_main_resonance_is_pure_convolution(self):
        p = model.RotorParams.from_rational(1, 1, 3.0, 0.25, n_sites=48)
        coeffs = model.kick_coefficients(p)
        stepped = dynamics.kick_step(dynamics.initial_state(p), p).amplitudes
        expected = np.zeros_like(stepped)
        inside = np.abs(coeffs.orders) <= p.n_sites
        expected[coeffs.orders[inside] + p.n_sites] = coeffs.values[inside]
        assert np.abs(stepped - expected).max() < 1e-12

    def test_spill_raises(self):
        # ballistic resonance run into a lattice that is far too small
        p = model.RotorParams.from_rational(1, 1, 3.0, 0.0, n_sites=24)
        state = dynamics.initial_state(p)
        with pytest.raises(errors.SpillExceeded):
            for _ in range(40):
                state = dynamics.kick_step(state, p)


class TestMatrixEquivalence:
    def test_nfold_step_matches_matrix_power(self):
        p = model.RotorParams(3.0, 0.2, beta=TWO_PI_BETA_07, n_sites=64)
        u = floquet.build_floquet_matrix(p).entries
        reference = dynamics.initial_state(p).amplitudes.copy()
        state = dynamics.initial_state(p)
        for _ in range(8):
            reference = u @ reference
            state = dynamics.kick_step(state, p)
        scale = np.abs(reference).max()
        assert np.abs(state.amplitudes - reference).max() / scale < 1e-9

    def test_gauge_mapping_of_trajectories(self):
        lam = 0.1
        p = model.RotorParams(3.0, lam, beta=TWO_PI_BETA_07, n_sites=80)
        g = model.gauge_form(p)
        assert np.exp(2 * g.y * p.n_sites) < 1e8
        herm = model.RotorParams(g.k0_scaled, 0.0, beta=p.beta, n_sites=80)
        s_lam = dynamics.evolve(p, 10, snapshot_kicks=(), keep_states=True)
        s_herm = dynamics.evolve(herm, 10, snapshot_kicks=(), keep_states=True)
        mapped = s_herm.states[10] * np.exp(g.y * np.arange(-80, 81))
        assert np.abs(s_lam.states[10] - mapped).max() / np.abs(mapped).max() < 1e-6


class TestEvolve:
    def test_zero_kicks(self):
        p = model.RotorParams(3.0, 0.1, beta=0.3, n_sites=20)
        series = dynamics.evolve(p, 0)
        assert series.norm[0] == 1.0
        assert series.mean_l[0] == 0.0
        assert series.spread[0] == 0.0

    def test_initial_observables_and_monotone_growth(self):
        p = model.RotorParams.from_rational(1, 12, 3.0, 1.0 / 30.0, n_sites=400)
        series = dynamics.evolve(p, 60, snapshot_kicks=(0, 10, 60))
        assert series.norm[0] == 1.0
        assert set(series.snapshots) == {0, 10, 60}
        assert series.norm[60] > series.norm[0]
        assert series.mean_l[60] > 0.0  # ratchet pushes to positive momenta

    def test_hermitian_norm_over_many_kicks(self):
        p = model.RotorParams(3.0, 0.0, beta=TWO_PI_BETA_07, n_sites=300)
        series = dynamics.evolve(p, 400, snapshot_kicks=())
        assert np.abs(series.norm - 1.0).max() < 1e-10

    def test_default_snapshots_clipped_to_range(self):
        p = model.RotorParams(3.0, 0.0, beta=TWO_PI_BETA_07, n_sites=200)
        series = dynamics.evolve(p, 30)
        assert set(series.snapshots) == {0, 5, 10, 20}

    def test_raw_spread_vs_centered_spread(self):
        p = model.RotorParams.from_rational(1, 12, 3.0, 1.0 / 30.0, n_sites=400)
        series = dynamics.evolve(p, 50, snapshot_kicks=())
        # once <l> != 0 the uncentered second moment exceeds the variance
        assert series.raw_spread[50] > series.spread[50]
        assert series.raw_spread[50] == pytest.approx(
            np.sqrt(series.spread[50] ** 2 + series.mean_l[50] ** 2), rel=1e-12
        )

    def test_rejects_mismatched_initial(self):
        p = model.RotorParams(3.0, 0.0, beta=0.3, n_sites=20)
        bad = dynamics.MomentumState(np.zeros(11, complex), 0)
        with pytest.raises(ValueError):
            dynamics.evolve(p, 2, initial=bad)


class TestSpreadingExponent:
    def test_degenerate_window(self):
        p = model.RotorParams.from_rational(1, 2, 3.0, 0.2, n_sites=40)
        series = dynamics.evolve(p, 8, snapshot_kicks=())
        # antiresonance: spread returns to zero every second kick
        with pytest.raises(errors.DegenerateFit):
            dynamics.spreading_exponent(series, (2, 6))

    def test_window_needs_points(self):
        p = model.RotorParams(3.0, 0.0, beta=0.3, n_sites=40)
        series = dynamics.evolve(p, 5, snapshot_kicks=())
        with pytest.raises(errors.DegenerateFit):
            dynamics.spreading_exponent(series, (100, 200))

    def test_short_ballistic_exponent(self):
        p = model.RotorParams.from_rational(1, 1, 2.0, 0.0, n_sites=600)
        series = dynamics.evolve(p, 200, snapshot_kicks=())
        slope = dynamics.spreading_exponent(series, (20, 200))
        assert slope == pytest.approx(1.0, abs=0.05)
