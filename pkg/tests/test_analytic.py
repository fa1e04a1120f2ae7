"""
Tests for the closed-form visibility, SNR and optimization-condition layer
"""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from salhi.core import analytic
from salhi.core.analytic import DetectionScheme
from salhi.core.gain import gain_from_G
from salhi.core.model import Flag, InterferometerConfig, LossParams, ProbeSettings, SeedKind
from salhi.utils.numerics import relative_stationarity


class TestVisibility:
    def test_golden_value(self, baseline):
        assert analytic.visibility_su(baseline).value == pytest.approx(0.51852, abs=1e-4)

    def test_moderate_loss_value(self, baseline):
        assert analytic.visibility_su(baseline.with_losses(l=0.6)).value == pytest.approx(0.9924, abs=1e-4)

    def test_mz_value(self):
        assert analytic.visibility_mz(LossParams(0.96, 0.4)).value == pytest.approx(0.48412, abs=1e-5)

    @given(st.floats(min_value=0.0, max_value=0.99))
    def test_mz_unity_for_balanced_losses(self, loss):
        assert analytic.visibility_mz(LossParams(loss, loss)).value == pytest.approx(1.0, abs=1e-12)

    def test_undefined_fringe(self):
        cfg = InterferometerConfig.from_gains(3.0, 5.0, 1.0, 1.0)
        result = analytic.visibility_su(cfg)
        assert result.value == 0.0
        assert result.has(Flag.UNDEFINED_FRINGE)

    @settings(max_examples=200)
    @given(
        st.floats(min_value=1.0, max_value=10.0),
        st.floats(min_value=1.0, max_value=10.0),
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
        st.sampled_from(list(SeedKind)),
    )
    def test_bounded(self, G1, G2, l, eta, kind):
        value = analytic.visibility_su(InterferometerConfig.from_gains(G1, G2, l, eta, seed_kind=kind)).value
        assert 0.0 <= value <= 1.0 + 1e-15

    @settings(max_examples=200)
    @given(
        st.floats(min_value=1.05, max_value=6.0),
        st.floats(min_value=1.05, max_value=6.0),
        st.floats(min_value=0.01, max_value=0.999),
        st.floats(min_value=0.0, max_value=0.99),
    )
    def test_direct_and_crossed_amplitudes_trade_places(self, G1, G2, u, eta):
        cfg = InterferometerConfig.from_gains(G1, G2, 0.0, eta)
        direct = cfg.stage1.G * cfg.stage2.G
        crossed = cfg.stage1.g * cfg.stage2.g
        # optical transmission kept below crossed / direct so the swapped atomic one stays physical
        s, q = u * crossed / direct, math.sqrt(1.0 - eta)
        swapped_s, swapped_q = crossed * q / direct, direct * s / crossed
        original = analytic.visibility_su(cfg.with_losses(l=1.0 - s * s)).value
        swapped = analytic.visibility_su(cfg.with_losses(l=1.0 - swapped_s ** 2, eta=1.0 - swapped_q ** 2)).value
        assert swapped == pytest.approx(original, rel=1e-9)

    def test_su_above_mz_beyond_condition_loss(self, baseline):
        for l in np.linspace(0.6, 0.96, 37):
            cfg = baseline.with_losses(l=float(l))
            assert analytic.visibility_su(cfg).value >= analytic.visibility_mz(cfg.losses).value


class TestSolveG2:
    def test_exact_spot_value(self):
        solution = analytic.solve_g2(gain_from_G(3.0), LossParams(0.6, 0.4))
        assert solution.exact
        assert solution.gain.G == pytest.approx(2.0, abs=1e-10)

    def test_high_loss_spot_value(self):
        solution = analytic.solve_g2(gain_from_G(3.0), LossParams(0.96, 0.4))
        assert solution.exact
        assert solution.gain.G == pytest.approx(1.0397, abs=1e-3)

    def test_unsatisfiable_returns_bound(self):
        solution = analytic.solve_g2(gain_from_G(1.0), LossParams(0.5, 0.4))
        assert not solution.exact
        assert solution.gain.G == pytest.approx(10.0)

    def test_low_loss_needs_larger_gain_than_bounds(self):
        solution = analytic.solve_g2(gain_from_G(3.0), LossParams(0.1, 0.4))
        assert not solution.exact
        assert solution.gain.G == pytest.approx(10.0)

    @settings(max_examples=100, suppress_health_check=[HealthCheck.filter_too_much])
    @given(
        st.floats(min_value=1.1, max_value=5.0),
        st.floats(min_value=0.0, max_value=0.99),
        st.floats(min_value=0.0, max_value=0.9),
        st.sampled_from(list(SeedKind)),
    )
    def test_solution_restores_visibility(self, G1, l, eta, kind):
        losses = LossParams(l, eta)
        solution = analytic.solve_g2(gain_from_G(G1), losses, seed_kind=kind)
        assume(solution.exact and 1.0 < solution.gain.G < 10.0)
        cfg = InterferometerConfig(gain_from_G(G1), solution.gain, losses).with_seed(kind=kind)
        assert abs(analytic.condition_residual(cfg, DetectionScheme.ID)) < 1e-10
        assert analytic.visibility_su(cfg).value == pytest.approx(1.0, abs=1e-10)

    def test_bhd_root(self):
        G1 = gain_from_G(3.0)
        l = analytic.loss_at_condition(G1, gain_from_G(2.0), 0.4, DetectionScheme.BHD)
        assert l is not None and 0.0 < l < 1.0
        solution = analytic.solve_g2(G1, LossParams(l, 0.4), DetectionScheme.BHD)
        assert solution.exact
        cfg = InterferometerConfig(G1, solution.gain, LossParams(l, 0.4))
        assert abs(analytic.condition_residual(cfg, DetectionScheme.BHD)) < 1e-8


class TestConditionLoss:
    def test_baseline_residual(self, baseline):
        assert analytic.condition_residual(baseline, DetectionScheme.ID) == pytest.approx(-7.733, abs=1e-3)

    def test_condition_loss_value(self, baseline):
        l_b = analytic.loss_at_condition(baseline.stage1, baseline.stage2, 0.4)
        assert l_b == pytest.approx(0.488, abs=1e-3)
        assert analytic.condition_residual(baseline.with_losses(l=l_b), DetectionScheme.ID) == pytest.approx(0.0, abs=1e-10)

    def test_unreachable_condition(self):
        # without conversion gain no loss satisfies the homodyne condition
        assert analytic.loss_at_condition(gain_from_G(1.0), gain_from_G(1.0), 0.0, DetectionScheme.BHD) is None

    def test_snr_peaks_at_condition_loss(self, baseline):
        l_b = analytic.loss_at_condition(baseline.stage1, baseline.stage2, 0.4)
        grid = np.linspace(0.0, 0.99, 199)
        snr = [analytic.snr_su_id(baseline.with_losses(l=float(l))).value for l in grid]
        assert abs(grid[int(np.argmax(snr))] - l_b) <= grid[1] - grid[0]


class TestSNR:
    def test_infinite_when_noise_vanishes(self):
        cfg = InterferometerConfig.from_gains(1.0, 1.0, 1.0, 0.0, phi=math.pi)
        result = analytic.snr_su_id(cfg)
        assert result.has(Flag.INFINITE)
        assert result.value == 1e300

    def test_zero_at_dark_fringe(self, moderate):
        result = analytic.snr_su_id(moderate.with_phi(math.pi))
        assert result.value == 0.0
        assert not result.has(Flag.INFINITE)

    def test_scales_with_photon_number(self, moderate):
        brighter = moderate.with_seed(mean_photon_number=4e6)
        ratio = analytic.snr_su_id(brighter).value / analytic.snr_su_id(moderate).value
        assert ratio == pytest.approx(4.0, rel=1e-12)

    def test_bhd_formula(self, moderate):
        s, q = math.sqrt(0.5), math.sqrt(0.6)
        G1, g1, G2, g2 = 3.0, math.sqrt(8.0), 5.0, math.sqrt(24.0)
        noise = (G1 * G2 * s - g1 * g2 * q) ** 2 + (G2 * g1 * s - G1 * g2 * q) ** 2 + G2 ** 2 * 0.5 + g2 ** 2 * 0.4
        expected = 4 * 0.5 * G1 ** 2 * G2 ** 2 * 1e6 * 1e-6 / noise
        assert analytic.snr_su_bhd(moderate).value == pytest.approx(expected, rel=1e-10)

    def test_mz_snr_formula(self):
        losses = LossParams(0.3, 0.2)
        phi = math.pi + 1e-3
        probe = InterferometerConfig.from_gains(2.0, 2.0, 0.3, 0.2).probe
        s2, q2 = 0.7, 0.8
        n0 = (2 * 4.0 - 1) * 1e6
        expected = s2 * q2 * n0 * math.sin(phi) ** 2 * 1e-6 / ((2 - 0.5) - 2 * math.sqrt(s2 * q2) * math.cos(phi))
        assert analytic.snr_mz(losses, gain_from_G(2.0), probe, 1e6).value == pytest.approx(expected, rel=1e-9)


class TestStationarity:
    @pytest.mark.parametrize("l", [0.9, 0.96])
    def test_intensity_detection(self, l):
        losses = LossParams(l, 0.4)
        stage2 = analytic.solve_g2(gain_from_G(3.0), losses).gain
        cfg = InterferometerConfig(gain_from_G(3.0), stage2, losses, probe=ProbeSettings.dark_point(1e-5))

        def snr(s):
            return analytic.snr_su_id(cfg.with_losses(l=1.0 - s * s)).value

        assert relative_stationarity(snr, losses.optical_transmission) < 1e-7

    def test_homodyne_detection(self):
        G1, G2 = gain_from_G(3.0), gain_from_G(2.0)
        l = analytic.loss_at_condition(G1, G2, 0.4, DetectionScheme.BHD)
        cfg = InterferometerConfig(G1, G2, LossParams(l, 0.4))

        def snr(s):
            return analytic.snr_su_bhd(cfg.with_losses(l=1.0 - s * s)).value

        assert relative_stationarity(snr, math.sqrt(1.0 - l)) < 1e-6

    def test_homodyne_not_stationary_elsewhere(self):
        cfg = InterferometerConfig.from_gains(3.0, 2.0, 0.2, 0.4)

        def snr(s):
            return analytic.snr_su_bhd(cfg.with_losses(l=1.0 - s * s)).value

        assert relative_stationarity(snr, math.sqrt(0.8)) > 1e-3
