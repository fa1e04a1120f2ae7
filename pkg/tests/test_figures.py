"""
Tests for the figure presets
"""

import os
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from salhi.parsers.run_config import FigurePanel, FigureSettings, RunConfig
from salhi.services.figures import FigureName, build_figure, write_figure
from salhi.services.optimizer import SweepRow
from salhi.utils.output import read_csv


@pytest.fixture
def run():
    return RunConfig(figure=FigureSettings(points=5))


def column(figure, name):
    return np.array([record[name] for record in figure.records()], dtype=float)


class TestVisibilityVsLoss:
    def test_endpoints(self, run):
        figure = build_figure(FigureName.FIG2B, run)
        assert figure.columns == SweepRow.columns()
        v = column(figure, "visibility_su")
        assert v[0] == pytest.approx(0.9924, abs=1e-4)
        assert v[-1] == pytest.approx(0.51852, abs=1e-4)
        assert np.all(column(figure, "visibility_su") >= column(figure, "visibility_mz"))

    def test_accepts_string_name(self, run):
        assert build_figure("fig2b", run).name is FigureName.FIG2B


class TestOptimizedVisibility:
    def test_unity_where_exact(self, run):
        figure = build_figure(FigureName.FIG4A, run)
        exact = column(figure, "exact").astype(bool)
        assert exact.all()
        np.testing.assert_allclose(column(figure, "optimized_visibility")[exact], 1.0, atol=1e-10)


class TestBeforeAfter:
    def test_one_block_of_rows_per_panel(self, run):
        figure = build_figure(FigureName.FIG3, run)
        assert len(figure.rows) == len(run.figure.panels) * run.figure.points
        assert figure.columns[:3] == ["panel", "G1", "eta"]
        assert len(figure.panels) == 3 * len(run.figure.panels)
        assert figure.panel_columns == len(run.figure.panels)

    def test_panel_parameters_applied(self):
        run = RunConfig(figure=FigureSettings(points=3, panels=(FigurePanel(G1=3.0, eta=0.4),)))
        figure = build_figure(FigureName.FIG3, run)
        assert {record["G1"] for record in figure.records()} == {3.0}
        v = column(figure, "visibility_su")
        assert v[-1] == pytest.approx(0.51852, abs=1e-4)
        assert np.all(column(figure, "optimized_visibility") >= v - 1e-12)


class TestWriteFigure:
    def test_all_formats(self, run, tmp_path):
        figure = build_figure(FigureName.FIG2B, run)
        written = write_figure(figure, str(tmp_path / "out"), ("csv", "json", "svg"))
        assert [os.path.basename(p) for p in written] == ["fig2b.csv", "fig2b.json", "fig2b.svg"]
        rows = read_csv(written[0])
        assert len(rows) == run.figure.points
        assert rows[0]["exact"] in ("0", "1")
        ET.parse(written[2])

    def test_subset_of_formats(self, run, tmp_path):
        figure = build_figure(FigureName.FIG2B, run)
        written = write_figure(figure, str(tmp_path), ["svg"])
        assert written == [str(tmp_path / "fig2b.svg")]
