"""
Tests for the CSV, JSON and SVG writers
"""

import json
import math
import os
import xml.etree.ElementTree as ET

import pytest

from salhi.utils.output import atomic_write, format_cell, read_csv, render_csv, render_json, write_csv, write_json
from salhi.utils.svg import PlotPanel, render_svg


class TestFormatCell:
    def test_flags_are_zero_or_one(self):
        assert format_cell(True) == "1"
        assert format_cell(False) == "0"

    def test_float_precision(self):
        assert format_cell(0.5185088734196121) == "0.51850887342"
        assert format_cell(1.0) == "1"
        assert format_cell(1e-300) == "1e-300"

    def test_non_finite(self):
        assert format_cell(math.nan) == "nan"
        assert format_cell(math.inf) == "inf"
        assert format_cell(-math.inf) == "-inf"

    def test_other_values(self):
        assert format_cell(7) == "7"
        assert format_cell(None) == ""
        assert format_cell("synthetic failure") == "synthetic failure"


class TestCsv:
    def test_render(self):
        text = render_csv(["l", "V", "exact"], [[0.6, 0.99, True], [0.96, 0.5, False]])
        assert text == "l,V,exact\n0.6,0.99,1\n0.96,0.5,0\n"

    def test_write_and_read(self, tmp_path):
        path = write_csv(str(tmp_path / "nested" / "sweep.csv"), ["a", "b"], [[1.5, "x"]])
        assert os.path.exists(path)
        assert read_csv(path) == [{"a": "1.5", "b": "x"}]


class TestJson:
    def test_sorted_and_null_for_non_finite(self):
        payload = json.loads(render_json({"b": math.inf, "a": [1.0, math.nan]}))
        assert payload == {"a": [1.0, None], "b": None}
        assert render_json({"b": 1, "a": 2}).index('"a"') < render_json({"b": 1, "a": 2}).index('"b"')

    def test_write(self, tmp_path):
        path = write_json(str(tmp_path / "snr.json"), {"snr": 2.0})
        with open(path, encoding="utf-8") as f:
            assert json.load(f) == {"snr": 2.0}


class TestAtomicWrite:
    def test_replaces_existing_file(self, tmp_path):
        target = tmp_path / "out.txt"
        target.write_text("old")
        atomic_write(str(target), "new")
        assert target.read_text() == "new"
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]

    def test_failed_write_leaves_no_temporary(self, tmp_path, monkeypatch):
        def boom(src, dst):
            raise OSError("disk full")

        monkeypatch.setattr(os, "replace", boom)
        with pytest.raises(OSError):
            atomic_write(str(tmp_path / "out.txt"), "content")
        assert list(tmp_path.iterdir()) == []


class TestSvg:
    def test_well_formed(self):
        panel = PlotPanel("Visibility", "l", "V", y_range=(0.0, 1.05))
        panel.add("V_SU", [0.6, 0.78, 0.96], [0.99, 0.8, 0.52])
        panel.add("V_MZ", [0.6, 0.78, 0.96], [0.97, 0.75, 0.48], dashed=True)
        text = render_svg([panel])
        root = ET.fromstring(text)
        assert root.tag.endswith("svg")
        assert text.endswith("</svg>\n")
        assert "V_SU" in text and "V_MZ" in text

    def test_non_finite_points_skipped(self):
        panel = PlotPanel("SNR", "l", "SNR").add("SNR_SU", [0.0, 0.5, 1.0], [1.0, math.inf, math.nan])
        ET.fromstring(render_svg([panel]))

    def test_grid_of_panels(self):
        panels = [PlotPanel(f"panel {k}", "l", "V").add("V", [0.0, 1.0], [k, k + 1.0]) for k in range(6)]
        root = ET.fromstring(render_svg(panels, columns=3))
        assert root.tag.endswith("svg")
