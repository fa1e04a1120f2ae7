"""
Raman gain factors
A stage is stored by its squeeze argument r; G = cosh r and g = sinh r are derived,
so G^2 - g^2 = 1 holds by construction.
"""

import math
from dataclasses import dataclass

from salhi.core.errors import DomainError


@dataclass(frozen=True)
class GainFactor:
    """One stimulated Raman scattering stage acting as a two-mode squeezer"""

    r: float

    @property
    def G(self) -> float:
        """Amplitude gain"""
        return math.cosh(self.r)

    @property
    def g(self) -> float:
        """Conversion gain"""
        return math.sinh(self.r)

    def __repr__(self) -> str:
        return f"GainFactor(G={self.G:.6g}, g={self.g:.6g}, r={self.r:.6g})"


IDENTITY_GAIN = GainFactor(0.0)


def make_gain(r: float) -> GainFactor:
    """
    Build a gain stage from its squeeze argument

    Args:
        r: Squeeze argument, finite and non-negative

    Returns:
        GainFactor with G = cosh r, g = sinh r

    Raises:
        DomainError: If r is negative or not finite
    """
    r = float(r)
    if not math.isfinite(r):
        raise DomainError(f"squeeze argument must be finite, got {r}")
    if r < 0:
        raise DomainError(f"squeeze argument must be >= 0, got {r}")
    return GainFactor(r)


def gain_from_G(G: float) -> GainFactor:
    """
    Build a gain stage from its amplitude gain

    Args:
        G: Amplitude gain, at least 1

    Returns:
        GainFactor with g = sqrt(G^2 - 1)

    Raises:
        DomainError: If G < 1 or G is not finite
    """
    G = float(G)
    if not math.isfinite(G):
        raise DomainError(f"G must be finite, got {G}")
    if G < 1:
        raise DomainError(f"G < 1 (got {G})")
    return GainFactor(math.acosh(G))


def gain_from_pump(zeta: float, amplitude: float) -> GainFactor:
    """
    Gain stage for an effective Raman coupling zeta and pump amplitude A_W

    G = (e^{zeta A} + e^{-zeta A}) / 2, i.e. r = zeta * A.
    """
    return make_gain(zeta * amplitude)
