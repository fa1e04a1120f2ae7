"""
Tests for the command-line interface
"""

import json

import pytest
from click.testing import CliRunner

from salhi.cli import EXIT_USAGE, EXIT_VERIFY_FAILED, cli


@pytest.fixture
def runner():
    return CliRunner()


def write_config(tmp_path, payload):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload, indent=2))
    return str(path)


class TestQueries:
    def test_visibility_baseline(self, runner):
        result = runner.invoke(cli, ["visibility"], obj={})
        assert result.exit_code == 0, result.output
        assert "0.518509" in result.output
        assert "0.48412" in result.output

    def test_snr_lists_both_engines(self, runner):
        result = runner.invoke(cli, ["snr"], obj={})
        assert result.exit_code == 0, result.output
        for key in ("snr_su_id_analytic", "snr_su_id_moments", "snr_su_bhd_analytic", "snr_su_bhd_moments", "snr_mz"):
            assert key in result.output

    def test_optimize(self, runner):
        result = runner.invoke(cli, ["optimize"], obj={})
        assert result.exit_code == 0, result.output
        assert "1.0397" in result.output
        assert "coincide" in result.output or "differ" in result.output

    def test_json_output(self, runner, tmp_path):
        result = runner.invoke(cli, ["--out", str(tmp_path), "--format", "json", "visibility"], obj={})
        assert result.exit_code == 0, result.output
        payload = json.loads((tmp_path / "visibility.json").read_text())
        assert payload["visibility_su_optical_seed"] == pytest.approx(0.51852, abs=1e-4)


class TestConfigErrors:
    def test_out_of_range_loss(self, runner, tmp_path):
        path = write_config(tmp_path, {"interferometer": {"l": 1.2}})
        result = runner.invoke(cli, ["--config", path, "visibility"], obj={})
        assert result.exit_code == EXIT_USAGE
        assert "invalid config" in result.output
        assert "l out of [0,1]" in result.output

    def test_unknown_key(self, runner, tmp_path):
        path = write_config(tmp_path, {"interferometer": {"G3": 2.0}})
        result = runner.invoke(cli, ["--config", path, "snr"], obj={})
        assert result.exit_code == EXIT_USAGE
        assert "interferometer.G3" in result.output

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["--config", str(tmp_path / "absent.json"), "visibility"], obj={})
        assert result.exit_code == EXIT_USAGE

    def test_unknown_figure(self, runner):
        result = runner.invoke(cli, ["figure", "fig9"], obj={})
        assert result.exit_code == EXIT_USAGE

    def test_unknown_format(self, runner):
        result = runner.invoke(cli, ["--format", "png", "visibility"], obj={})
        assert result.exit_code == EXIT_USAGE


class TestArtifacts:
    def test_figure(self, runner, tmp_path):
        result = runner.invoke(cli, ["--out", str(tmp_path), "--grid-size", "3", "figure", "fig2b"], obj={})
        assert result.exit_code == 0, result.output
        for suffix in ("csv", "json", "svg"):
            assert (tmp_path / f"fig2b.{suffix}").exists()

    def test_sweep(self, runner, tmp_path):
        path = write_config(tmp_path, {
            "sweep": {"swept": "l", "min": 0.6, "max": 0.96, "points": 4, "objective": "none"},
            "output": {"dir": str(tmp_path / "sweeps"), "formats": ["csv"]},
        })
        result = runner.invoke(cli, ["--config", path, "sweep"], obj={})
        assert result.exit_code == 0, result.output
        lines = (tmp_path / "sweeps" / "sweep.csv").read_text().splitlines()
        assert len(lines) == 5
        assert lines[0].startswith("swept_value,visibility_su")


@pytest.mark.slow
class TestVerify:
    def test_passes(self, runner):
        result = runner.invoke(cli, ["--grid-size", "10", "verify"], obj={})
        assert result.exit_code == 0, result.output
        assert "checks passed" in result.output

    def test_injected_fault(self, runner):
        result = runner.invoke(cli, ["--grid-size", "10", "verify", "--inject-fault", "cross-term-sign"], obj={})
        assert result.exit_code == EXIT_VERIFY_FAILED
        assert "FAIL  analytic vs moments: ID SNR" in result.output
