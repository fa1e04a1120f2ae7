"""
Tests for gain stages
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from salhi.core.errors import DomainError
from salhi.core.gain import IDENTITY_GAIN, gain_from_G, gain_from_pump, make_gain


class TestGainFactor:
    @given(st.floats(min_value=0.0, max_value=20.0))
    def test_bogoliubov_identity(self, r):
        gain = make_gain(r)
        assert gain.G ** 2 - gain.g ** 2 == pytest.approx(1.0, abs=1e-12 * max(1.0, gain.G ** 2))

    def test_identity_gain(self):
        assert IDENTITY_GAIN.G == 1.0
        assert IDENTITY_GAIN.g == 0.0

    def test_round_trip_through_amplitude_gain(self):
        for r in np.linspace(0.0, 5.0, 51):
            assert gain_from_G(make_gain(r).G).r == pytest.approx(r, abs=1e-7)

    def test_known_values(self):
        gain = gain_from_G(3.0)
        assert gain.g == pytest.approx(math.sqrt(8.0), rel=1e-12)

    def test_pump_amplitude(self):
        gain = gain_from_pump(0.5, 2.0)
        assert gain.r == pytest.approx(1.0)
        assert gain.G == pytest.approx((math.e + 1.0 / math.e) / 2.0)


class TestGainErrors:
    @pytest.mark.parametrize("r", [-0.1, math.inf, math.nan])
    def test_make_gain_rejects(self, r):
        with pytest.raises(DomainError):
            make_gain(r)

    def test_gain_below_one(self):
        with pytest.raises(DomainError, match="G < 1"):
            gain_from_G(0.5)

    def test_domain_error_is_value_error(self):
        with pytest.raises(ValueError):
            gain_from_G(0.0)
