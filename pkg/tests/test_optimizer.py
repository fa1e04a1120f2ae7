"""
Tests for gain optimization, the coincidence report and sweeps
"""

import numpy as np
import pytest

from salhi.core import analytic
from salhi.core.analytic import DetectionScheme
from salhi.core.errors import ConfigValidationError, DomainError
from salhi.core.model import Flag, InterferometerConfig
from salhi.services import optimizer
from salhi.services.optimizer import (
    Grid,
    Objective,
    SweepRow,
    SweepSpec,
    SweptVariable,
    coincidence_report,
    optimize_g2,
    run_sweep,
)


def config_at(l, G1=3.0, G2=5.0, eta=0.4, **kwargs):
    return InterferometerConfig.from_gains(G1, G2, l, eta, **kwargs)


class TestOptimizeG2:
    def test_visibility_closed_form(self):
        best = optimize_g2(config_at(0.6), Objective.VISIBILITY)
        assert best.exact
        assert best.gain.G == pytest.approx(2.0, abs=1e-10)
        assert best.value == pytest.approx(1.0, abs=1e-12)

    def test_visibility_high_loss(self):
        best = optimize_g2(config_at(0.96), Objective.VISIBILITY)
        assert best.gain.G == pytest.approx(1.0397, abs=1e-3)
        assert best.value == pytest.approx(1.0, abs=1e-12)

    def test_flat_objective_without_conversion_gain(self):
        best = optimize_g2(config_at(0.5, G1=1.0), Objective.VISIBILITY)
        assert not best.exact
        assert best.gain.G == pytest.approx(1.0)
        assert Flag.FLAT_OBJECTIVE in best.flags

    def test_visibility_at_bound_below_condition_loss(self):
        best = optimize_g2(config_at(0.3), Objective.VISIBILITY)
        assert not best.exact
        assert best.gain.G == pytest.approx(10.0)

    def test_snr_interior_optimum(self):
        best = optimize_g2(config_at(0.6), Objective.SNR)
        assert best.exact
        assert best.gain.G == pytest.approx(2.0, abs=1e-3)

    def test_snr_never_below_base(self):
        cfg = config_at(0.8)
        best = optimize_g2(cfg, Objective.SNR, DetectionScheme.BHD)
        assert best.value >= analytic.snr_su_bhd(cfg).value * (1 - 1e-12)

    def test_combined_objective_rejected(self):
        with pytest.raises(ValueError):
            optimize_g2(config_at(0.6), Objective.BOTH)


class TestCoincidence:
    def test_intensity_detection_optima_coincide(self):
        rows = coincidence_report(config_at(0.5), np.linspace(0.1, 0.9, 9))
        assert len(rows) == 9
        assert [row.l for row in rows] == pytest.approx(list(np.linspace(0.1, 0.9, 9)))
        assert max(row.difference for row in rows) <= 1e-3

    def test_homodyne_optima_diverge(self):
        rows = coincidence_report(config_at(0.5), np.linspace(0.1, 0.9, 9), scheme=DetectionScheme.BHD)
        assert max(row.difference for row in rows) > 1e-2

    def test_single_interior_point(self):
        base = config_at(0.6, dark_offset=1e-5)
        rows = coincidence_report(base, [0.6], tol=1e-8)
        assert rows[0].g2_for_visibility == pytest.approx(2.0, abs=1e-10)
        assert rows[0].difference <= 1e-6


class TestSweep:
    def spec(self, objective=Objective.BOTH, points=13, **kwargs):
        return SweepSpec(
            swept=SweptVariable.LOSS_L,
            grid=Grid(0.6, 0.96, points),
            base=config_at(0.96),
            objective=objective,
            **kwargs,
        )

    def test_visibility_curve(self):
        result = run_sweep(self.spec(Objective.NONE))
        v = result.column("visibility_su")
        assert v[0] == pytest.approx(0.9924, abs=1e-4)
        assert v[-1] == pytest.approx(0.51852, abs=1e-4)
        assert np.all(np.diff(v) < 0)
        assert np.all(np.isnan(result.column("optimal_g2_for_v")))

    def test_optimized_visibility_is_unity_where_exact(self):
        result = run_sweep(self.spec(Objective.VISIBILITY))
        assert all(row.exact for row in result.rows)
        np.testing.assert_allclose(result.column("optimized_visibility"), 1.0, atol=1e-10)

    def test_optimized_dominates(self):
        result = run_sweep(self.spec())
        assert np.all(result.column("optimized_visibility") >= result.column("visibility_su") - 1e-12)
        assert np.all(result.column("optimized_snr") >= result.column("snr_su") * (1 - 1e-9))

    def test_two_point_grid(self):
        result = run_sweep(self.spec(points=2))
        assert [row.swept_value for row in result.rows] == pytest.approx([0.6, 0.96])

    def test_deterministic(self):
        first = run_sweep(self.spec(points=5))
        second = run_sweep(self.spec(points=5))
        assert [row.values() for row in first.rows] == [row.values() for row in second.rows]

    def test_mz_columns_present(self):
        result = run_sweep(self.spec(Objective.NONE, points=3))
        expected = [analytic.visibility_mz(config_at(l).losses).value for l in (0.6, 0.78, 0.96)]
        np.testing.assert_allclose(result.column("visibility_mz"), expected, rtol=1e-12)

    def test_phase_sweep_traces_fringe(self):
        spec = SweepSpec(SweptVariable.PHI, Grid(0.0, 2 * np.pi, 9), config_at(0.5), objective=Objective.NONE)
        intensity = run_sweep(spec).column("intensity_su")
        assert np.argmin(intensity) == 4
        assert intensity[0] == pytest.approx(intensity[-1], rel=1e-12)

    def test_invalid_grid(self):
        spec = SweepSpec(SweptVariable.LOSS_ETA, Grid(0.5, 1.5, 1), config_at(0.5))
        with pytest.raises(ConfigValidationError) as info:
            run_sweep(spec)
        assert len(info.value.errors) == 2

    def test_row_errors_do_not_abort(self, monkeypatch):
        original = optimizer.evaluate_point

        def failing(spec, value):
            if value > 0.9:
                raise DomainError("synthetic failure")
            return original(spec, value)

        monkeypatch.setattr(optimizer, "evaluate_point", failing)
        result = run_sweep(self.spec(Objective.NONE, points=4))
        assert len(result.rows) == 4
        assert result.rows[-1].error == "synthetic failure"
        assert all(row.error == "" for row in result.rows[:-1])

    def test_columns_match_row_fields(self):
        assert SweepRow.columns()[:5] == ["swept_value", "visibility_su", "visibility_mz", "snr_su", "snr_mz"]
        assert SweepRow.columns()[-1] == "error"
