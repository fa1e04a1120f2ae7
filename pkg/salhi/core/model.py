"""
Domain types shared by the analytic formulas, the moments engine and the optimizer
All types are immutable values.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import FrozenSet, Optional

from salhi import config
from salhi.core.gain import GainFactor, gain_from_G

# Finite stand-in for an unbounded SNR, keeps CSV output parseable
INFINITY_SENTINEL = 1.0e300


class Flag(str, Enum):
    """Degenerate-evaluation markers attached to a Measurement"""

    UNDEFINED_FRINGE = "undefined_fringe"
    INFINITE = "infinite"
    FLAT_OBJECTIVE = "flat_objective"


@dataclass(frozen=True)
class Measurement:
    """A scalar result plus the flags describing how it was obtained"""

    value: float
    flags: FrozenSet[Flag] = frozenset()

    def __float__(self) -> float:
        return float(self.value)

    def has(self, flag: Flag) -> bool:
        return flag in self.flags

    @classmethod
    def undefined_fringe(cls) -> "Measurement":
        return cls(0.0, frozenset({Flag.UNDEFINED_FRINGE}))

    @classmethod
    def infinite(cls) -> "Measurement":
        return cls(INFINITY_SENTINEL, frozenset({Flag.INFINITE}))


class SeedKind(str, Enum):
    OPTICAL = "optical"
    ATOMIC = "atomic"


@dataclass(frozen=True)
class LossParams:
    """Optical internal loss l and atomic dephasing eta, both fractions in [0, 1]"""

    l: float
    eta: float

    @property
    def optical_transmission(self) -> float:
        """sqrt(1 - l), zero for a fully lost arm"""
        return math.sqrt(max(0.0, 1.0 - self.l))

    @property
    def atomic_transmission(self) -> float:
        """sqrt(1 - eta)"""
        return math.sqrt(max(0.0, 1.0 - self.eta))


@dataclass(frozen=True)
class SeedSpec:
    """Coherent seed injected into the optical or the atomic input port"""

    kind: SeedKind = SeedKind.OPTICAL
    mean_photon_number: float = config.SEED_PHOTONS
    alpha_phase: float = 0.0

    @property
    def alpha(self) -> complex:
        """Coherent amplitude with |alpha|^2 = N"""
        magnitude = math.sqrt(max(0.0, self.mean_photon_number))
        return complex(magnitude * math.cos(self.alpha_phase), magnitude * math.sin(self.alpha_phase))


@dataclass(frozen=True)
class ProbeSettings:
    """Operating phase, modulation amplitude and dark-point offset, all in radians"""

    phi: float = math.pi + config.DARK_OFFSET
    delta: float = config.DELTA
    dark_offset: float = config.DARK_OFFSET

    @classmethod
    def dark_point(cls, offset: float = config.DARK_OFFSET, delta: float = config.DELTA) -> "ProbeSettings":
        """Probe biased at phi = pi + offset"""
        return cls(phi=math.pi + offset, delta=delta, dark_offset=offset)


@dataclass(frozen=True)
class InterferometerConfig:
    """Complete SALHI description: two gain stages, internal losses, seed and probe"""

    stage1: GainFactor
    stage2: GainFactor
    losses: LossParams
    seed: SeedSpec = field(default_factory=SeedSpec)
    probe: ProbeSettings = field(default_factory=ProbeSettings)

    @classmethod
    def from_gains(
        cls,
        G1: float,
        G2: float,
        l: float,
        eta: float,
        seed_kind: SeedKind = SeedKind.OPTICAL,
        photons: float = config.SEED_PHOTONS,
        phi: Optional[float] = None,
        delta: float = config.DELTA,
        dark_offset: float = config.DARK_OFFSET,
    ) -> "InterferometerConfig":
        """
        Convenience constructor quoting stages by their amplitude gains

        Args:
            G1: Amplitude gain of the splitting stage
            G2: Amplitude gain of the recombination stage
            l: Optical internal loss
            eta: Atomic dephasing
            seed_kind: Which input port carries the coherent seed
            photons: Seed mean photon number N
            phi: Interferometer phase, defaults to the dark point pi + dark_offset
            delta: Modulation amplitude
            dark_offset: Dark-point offset

        Returns:
            InterferometerConfig (not validated)
        """
        if phi is None:
            phi = math.pi + dark_offset
        return cls(
            stage1=gain_from_G(G1),
            stage2=gain_from_G(G2),
            losses=LossParams(l=l, eta=eta),
            seed=SeedSpec(kind=seed_kind, mean_photon_number=photons),
            probe=ProbeSettings(phi=phi, delta=delta, dark_offset=dark_offset),
        )

    def with_stage2(self, stage2: GainFactor) -> "InterferometerConfig":
        return replace(self, stage2=stage2)

    def with_losses(self, l: Optional[float] = None, eta: Optional[float] = None) -> "InterferometerConfig":
        losses = LossParams(
            l=self.losses.l if l is None else l,
            eta=self.losses.eta if eta is None else eta,
        )
        return replace(self, losses=losses)

    def with_phi(self, phi: float) -> "InterferometerConfig":
        return replace(self, probe=replace(self.probe, phi=phi))

    def with_seed(self, **changes) -> "InterferometerConfig":
        return replace(self, seed=replace(self.seed, **changes))
