"""
Tests for configuration validation
"""

import pytest

from salhi.core.errors import ConfigValidationError
from salhi.core.model import InterferometerConfig, ProbeSettings, SeedSpec
from salhi.core.validation import build_config, check_config, validate_config


class TestValidation:
    def test_valid_config_passes(self, baseline):
        assert check_config(baseline) == []
        assert validate_config(baseline) is baseline

    def test_loss_out_of_range(self):
        cfg = InterferometerConfig.from_gains(3.0, 5.0, 1.2, 0.4)
        with pytest.raises(ConfigValidationError, match=r"l out of \[0,1\]"):
            validate_config(cfg)

    def test_every_violation_reported(self):
        with pytest.raises(ConfigValidationError) as info:
            build_config(
                G1=3.0,
                G2=0.5,
                l=-0.1,
                eta=1.5,
                seed=SeedSpec(mean_photon_number=-1.0),
                probe=ProbeSettings(delta=0.0),
            )
        errors = info.value.errors
        assert any(e.startswith("stage2:") and "G < 1" in e for e in errors)
        assert any(e.startswith("l out of") for e in errors)
        assert any(e.startswith("eta out of") for e in errors)
        assert any("mean_photon_number" in e for e in errors)
        assert any("delta" in e for e in errors)

    def test_build_config_defaults(self):
        cfg = build_config(3.0, 5.0, 0.5, 0.4)
        assert cfg.stage1.G == pytest.approx(3.0)
        assert cfg.losses.l == 0.5
