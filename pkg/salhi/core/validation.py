"""
Configuration validation
Every violated invariant is reported; nothing is clamped.
"""

import math
from typing import List

from salhi.core.errors import ConfigValidationError, DomainError
from salhi.core.gain import GainFactor, gain_from_G
from salhi.core.model import (
    InterferometerConfig,
    LossParams,
    ProbeSettings,
    SeedKind,
    SeedSpec,
)


def _check_fraction(name: str, value: float, errors: List[str]) -> None:
    if not math.isfinite(value) or value < 0.0 or value > 1.0:
        errors.append(f"{name} out of [0,1] (got {value})")


def _check_gain(name: str, gain: GainFactor, errors: List[str]) -> None:
    if not isinstance(gain, GainFactor):
        errors.append(f"{name}: not a gain factor")
    elif not math.isfinite(gain.r):
        errors.append(f"{name}: squeeze argument not finite")
    elif gain.r < 0:
        errors.append(f"{name}: g < 0 (squeeze argument {gain.r})")


def check_losses(losses: LossParams) -> List[str]:
    errors: List[str] = []
    _check_fraction("l", losses.l, errors)
    _check_fraction("eta", losses.eta, errors)
    return errors


def check_seed(seed: SeedSpec) -> List[str]:
    errors: List[str] = []
    if not isinstance(seed.kind, SeedKind):
        errors.append(f"seed kind must be one of {[k.value for k in SeedKind]}")
    if not math.isfinite(seed.mean_photon_number) or seed.mean_photon_number < 0:
        errors.append(f"mean_photon_number < 0 (got {seed.mean_photon_number})")
    if not math.isfinite(seed.alpha_phase):
        errors.append("alpha_phase not finite")
    return errors


def check_probe(probe: ProbeSettings) -> List[str]:
    errors: List[str] = []
    if not math.isfinite(probe.phi):
        errors.append("phi not finite")
    if not math.isfinite(probe.delta) or probe.delta <= 0:
        errors.append(f"delta must be > 0 (got {probe.delta})")
    if not math.isfinite(probe.dark_offset) or probe.dark_offset < 0:
        errors.append(f"dark_offset must be >= 0 (got {probe.dark_offset})")
    return errors


def check_config(cfg: InterferometerConfig) -> List[str]:
    """
    List every violated invariant of a configuration

    Args:
        cfg: Configuration to inspect

    Returns:
        Error messages, empty when the configuration is valid
    """
    errors: List[str] = []
    _check_gain("stage1", cfg.stage1, errors)
    _check_gain("stage2", cfg.stage2, errors)
    errors.extend(check_losses(cfg.losses))
    errors.extend(check_seed(cfg.seed))
    errors.extend(check_probe(cfg.probe))
    return errors


def validate_config(cfg: InterferometerConfig) -> InterferometerConfig:
    """
    Return the configuration unchanged if it is valid

    Raises:
        ConfigValidationError: Listing each violated invariant
    """
    errors = check_config(cfg)
    if errors:
        raise ConfigValidationError(errors)
    return cfg


def build_config(
    G1: float,
    G2: float,
    l: float,
    eta: float,
    seed: SeedSpec = SeedSpec(),
    probe: ProbeSettings = ProbeSettings(),
) -> InterferometerConfig:
    """
    Assemble and validate a configuration from amplitude gains

    Gain errors (G < 1) are collected together with all other violations.

    Raises:
        ConfigValidationError: Listing each violated invariant
    """
    errors: List[str] = []
    stages = []
    for name, G in (("stage1", G1), ("stage2", G2)):
        try:
            stages.append(gain_from_G(G))
        except DomainError as e:
            errors.append(f"{name}: {e}")
            stages.append(None)
    losses = LossParams(l=float(l), eta=float(eta))
    errors.extend(check_losses(losses))
    errors.extend(check_seed(seed))
    errors.extend(check_probe(probe))
    if errors:
        raise ConfigValidationError(errors)
    return InterferometerConfig(stage1=stages[0], stage2=stages[1], losses=losses, seed=seed, probe=probe)
