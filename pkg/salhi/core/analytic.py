"""
Closed-form visibility, SNR and optimization-condition expressions
Optical-output port, large-seed approximation. The exact counterparts live in
salhi.core.moments.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from salhi import config
from salhi.core.gain import GainFactor, gain_from_G, make_gain
from salhi.core.model import (
    InterferometerConfig,
    LossParams,
    Measurement,
    ProbeSettings,
    SeedKind,
)

logger = logging.getLogger(__name__)

# sin^2(phi) below this is taken as an exact zero of the fringe slope
SIN2_FLOOR = 1e-30


class DetectionScheme(str, Enum):
    ID = "id"  # intensity detection
    BHD = "bhd"  # balanced homodyne detection


@dataclass(frozen=True)
class NoiseTerms:
    """
    Noise quadrances of the optical output

    A2, B2 are the phase-dependent seed and partner amplitudes, C2 the loss
    vacuum contribution (intensity detection). zeta*_2 are the homodyne
    counterparts at the dark fringe.
    """

    A2: float
    B2: float
    C2: float
    zeta1_2: float
    zeta2_2: float
    zeta3_2: float

    @property
    def total(self) -> float:
        """A2 + B2 + C2"""
        return self.A2 + self.B2 + self.C2

    @property
    def zeta_total(self) -> float:
        return self.zeta1_2 + self.zeta2_2 + self.zeta3_2


class _Arms(NamedTuple):
    """Arm amplitudes reaching the optical output through each path"""

    seed_direct: float  # G1 G2 sqrt(1-l)
    seed_crossed: float  # g1 g2 sqrt(1-eta)
    partner_direct: float  # G2 g1 sqrt(1-l)
    partner_crossed: float  # G1 g2 sqrt(1-eta)


def _arms(stage1: GainFactor, stage2: GainFactor, losses: LossParams) -> _Arms:
    s = losses.optical_transmission
    q = losses.atomic_transmission
    return _Arms(
        seed_direct=stage1.G * stage2.G * s,
        seed_crossed=stage1.g * stage2.g * q,
        partner_direct=stage2.G * stage1.g * s,
        partner_crossed=stage1.G * stage2.g * q,
    )


def _interference(direct: float, crossed: float, phi: float) -> float:
    # |direct e^{i phi} + crossed|^2, equal to direct^2 + crossed^2 + 2 direct crossed cos(phi)
    # but without cancellation near the dark fringe
    return (direct * math.cos(phi) + crossed) ** 2 + (direct * math.sin(phi)) ** 2


def noise_terms(cfg: InterferometerConfig, phi: Optional[float] = None) -> NoiseTerms:
    """
    Evaluate the noise quadrances

    Args:
        cfg: Interferometer configuration
        phi: Phase at which A2 and B2 are evaluated, defaults to cfg.probe.phi

    Returns:
        NoiseTerms; homodyne terms are taken at the dark fringe phi = pi
    """
    if phi is None:
        phi = cfg.probe.phi
    arms = _arms(cfg.stage1, cfg.stage2, cfg.losses)
    G2, g2 = cfg.stage2.G, cfg.stage2.g
    C2 = G2 ** 2 * cfg.losses.l + g2 ** 2 * cfg.losses.eta
    return NoiseTerms(
        A2=_interference(arms.seed_direct, arms.seed_crossed, phi),
        B2=_interference(arms.partner_direct, arms.partner_crossed, phi),
        C2=C2,
        zeta1_2=(arms.seed_direct - arms.seed_crossed) ** 2,
        zeta2_2=(arms.partner_direct - arms.partner_crossed) ** 2,
        zeta3_2=C2,
    )


def visibility_su(cfg: InterferometerConfig) -> Measurement:
    """
    Fringe visibility of the optical output

    Optical seed: 2 G1G2g1g2 sqrt((1-l)(1-eta)) / (G1^2 G2^2 (1-l) + g1^2 g2^2 (1-eta)).
    Atomic seed: same numerator over G2^2 g1^2 (1-l) + G1^2 g2^2 (1-eta).

    Returns:
        Measurement in [0, 1]; 0 flagged UNDEFINED_FRINGE when both amplitudes vanish
    """
    arms = _arms(cfg.stage1, cfg.stage2, cfg.losses)
    if cfg.seed.kind is SeedKind.OPTICAL:
        direct, crossed = arms.seed_direct, arms.seed_crossed
    else:
        direct, crossed = arms.partner_direct, arms.partner_crossed
    denominator = direct ** 2 + crossed ** 2
    if denominator == 0.0:
        return Measurement.undefined_fringe()
    return Measurement(2.0 * direct * crossed / denominator)


def visibility_mz(losses: LossParams) -> Measurement:
    """
    Visibility of a Mach-Zehnder interferometer with the same arm losses

    V_MZ = 2 sqrt((1-l)(1-eta)) / (2 - l - eta); equals 1 iff l == eta.
    """
    s = losses.optical_transmission
    q = losses.atomic_transmission
    denominator = s ** 2 + q ** 2
    if denominator == 0.0:
        return Measurement.undefined_fringe()
    return Measurement(2.0 * s * q / denominator)


def snr_su_id(cfg: InterferometerConfig) -> Measurement:
    """
    SNR of the optical output under intensity detection

    4 G1^2 G2^2 g1^2 g2^2 (1-l)(1-eta) N sin^2(phi) delta^2 / (L (A^2 + B^2 + C^2)),
    with L = A^2 for an optical seed and L = B^2 for an atomic seed.

    Returns:
        Measurement; INFINITY_SENTINEL flagged INFINITE when the noise vanishes
    """
    phi = cfg.probe.phi
    arms = _arms(cfg.stage1, cfg.stage2, cfg.losses)
    terms = noise_terms(cfg, phi)
    fringe = 2.0 * arms.seed_direct * arms.seed_crossed
    sin2 = math.sin(phi) ** 2
    if sin2 < SIN2_FLOOR:
        # sin(pi) rounds to 1.2e-16
        sin2 = 0.0
    numerator = fringe ** 2 * cfg.seed.mean_photon_number * sin2 * cfg.probe.delta ** 2
    leading = terms.A2 if cfg.seed.kind is SeedKind.OPTICAL else terms.B2
    denominator = leading * terms.total
    if denominator <= 0.0:
        logger.debug(f"ID noise vanishes for {cfg}")
        return Measurement.infinite()
    return Measurement(numerator / denominator)


def snr_su_bhd(cfg: InterferometerConfig) -> Measurement:
    """
    SNR of the optical output under balanced homodyne detection at the dark fringe

    Optical seed: 4 (1-l) G1^2 G2^2 N delta^2 / (zeta1^2 + zeta2^2 + zeta3^2).
    Atomic seed: 4 (1-l) G2^2 g1^2 N delta^2 / (same).
    """
    arms = _arms(cfg.stage1, cfg.stage2, cfg.losses)
    terms = noise_terms(cfg)
    slope = arms.seed_direct if cfg.seed.kind is SeedKind.OPTICAL else arms.partner_direct
    numerator = 4.0 * slope ** 2 * cfg.seed.mean_photon_number * cfg.probe.delta ** 2
    denominator = terms.zeta_total
    if denominator <= 0.0:
        return Measurement.infinite()
    return Measurement(numerator / denominator)


def snr_su(cfg: InterferometerConfig, scheme: DetectionScheme) -> Measurement:
    if scheme is DetectionScheme.ID:
        return snr_su_id(cfg)
    return snr_su_bhd(cfg)


def snr_mz(losses: LossParams, G1: GainFactor, probe: ProbeSettings, N: float) -> Measurement:
    """
    SNR of a Mach-Zehnder interferometer fed with the phase-sensitive photon number
    N0 = (2 G1^2 - 1) N

    (1-l)(1-eta) N0 sin^2(phi) delta^2 / ((2 - l - eta) - 2 sqrt((1-l)(1-eta)) cos(phi))
    """
    s = losses.optical_transmission
    q = losses.atomic_transmission
    phi = probe.phi
    n0 = (2.0 * G1.G ** 2 - 1.0) * N
    numerator = s ** 2 * q ** 2 * n0 * math.sin(phi) ** 2 * probe.delta ** 2
    denominator = _interference(-q, s, phi)
    if denominator <= 0.0:
        return Measurement.infinite()
    return Measurement(numerator / denominator)


def _condition_residual(
    stage1: GainFactor,
    stage2: GainFactor,
    losses: LossParams,
    scheme: DetectionScheme,
    seed_kind: SeedKind,
) -> float:
    arms = _arms(stage1, stage2, losses)
    if scheme is DetectionScheme.BHD:
        lhs = 2.0 * arms.seed_direct * arms.seed_crossed
        rhs = 2.0 * arms.seed_crossed ** 2 + stage2.g ** 2 + stage2.G ** 2
        return lhs - rhs
    if seed_kind is SeedKind.OPTICAL:
        return arms.seed_direct - arms.seed_crossed
    return arms.partner_direct - arms.partner_crossed


def condition_residual(cfg: InterferometerConfig, scheme: DetectionScheme) -> float:
    """
    LHS - RHS of the optimization condition for the detection scheme and seed

    ID, optical seed: G1 G2 sqrt(1-l) - g1 g2 sqrt(1-eta)
    ID, atomic seed: G2 g1 sqrt(1-l) - G1 g2 sqrt(1-eta)
    BHD, either seed: 2 sqrt(1-l) sqrt(1-eta) G1G2g1g2 - (2 (1-eta) g1^2 g2^2 + g2^2 + G2^2)
    """
    return _condition_residual(cfg.stage1, cfg.stage2, cfg.losses, scheme, cfg.seed.kind)


class G2Solution(NamedTuple):
    gain: GainFactor
    exact: bool


def _clamp_solution(r: float, bounds: Tuple[float, float]) -> G2Solution:
    lo, hi = bounds
    gain = make_gain(r)
    if lo <= gain.G <= hi:
        return G2Solution(gain, True)
    return G2Solution(gain_from_G(hi if gain.G > hi else lo), False)


def solve_g2(
    G1: GainFactor,
    losses: LossParams,
    scheme: DetectionScheme = DetectionScheme.ID,
    seed_kind: SeedKind = SeedKind.OPTICAL,
    bounds: Tuple[float, float] = (config.G2_MIN, config.G2_MAX),
    points: int = config.PRESCAN_POINTS,
) -> G2Solution:
    """
    Recombination gain satisfying the optimization condition

    ID conditions are solved in closed form for g2/G2 = tanh(r2). The BHD
    condition is bracketed on the prescan grid and refined with brentq.
    Never raises for unsatisfiable conditions: the better bound is returned with
    exact=False.

    Args:
        G1: Splitting-stage gain
        losses: Internal losses
        scheme: Detection scheme selecting the condition
        seed_kind: Seeded input port (ID conditions differ per seed)
        bounds: Allowed (G2_min, G2_max), both >= 1
        points: Bracketing grid size for the BHD condition

    Returns:
        G2Solution(gain, exact)
    """
    lo, hi = bounds
    s = losses.optical_transmission
    q = losses.atomic_transmission

    if scheme is DetectionScheme.ID:
        if seed_kind is SeedKind.OPTICAL:
            # G1 G2 s = g1 g2 q  ->  tanh(r2) = G1 s / (g1 q)
            numerator, denominator = G1.G * s, G1.g * q
        else:
            # G2 g1 s = G1 g2 q  ->  tanh(r2) = g1 s / (G1 q)
            numerator, denominator = G1.g * s, G1.G * q
        if numerator == 0.0:
            if denominator == 0.0:
                # condition holds for every G2
                return G2Solution(gain_from_G(lo), True)
            return _clamp_solution(0.0, bounds)
        if denominator > numerator:
            return _clamp_solution(math.atanh(numerator / denominator), bounds)
        # only a larger G2 gets closer to the condition
        return G2Solution(gain_from_G(hi), False)

    def residual(G2: float) -> float:
        return _condition_residual(G1, gain_from_G(G2), losses, scheme, seed_kind)

    grid = np.linspace(lo, hi, max(points, 2))
    values = np.array([residual(float(x)) for x in grid])
    for i, value in enumerate(values):
        if value == 0.0:
            return G2Solution(gain_from_G(float(grid[i])), True)
        if i > 0 and np.sign(values[i - 1]) != np.sign(value):
            root = brentq(residual, float(grid[i - 1]), float(grid[i]), xtol=1e-14, rtol=4 * np.finfo(float).eps)
            return G2Solution(gain_from_G(root), True)

    logger.debug(f"No BHD condition root in [{lo}, {hi}] for G1={G1.G}, {losses}")
    low_value, high_value = abs(values[0]), abs(values[-1])
    if high_value < low_value - 1e-12:
        return G2Solution(gain_from_G(hi), False)
    return G2Solution(gain_from_G(lo), False)


def loss_at_condition(
    G1: GainFactor,
    G2: GainFactor,
    eta: float,
    scheme: DetectionScheme = DetectionScheme.ID,
    seed_kind: SeedKind = SeedKind.OPTICAL,
) -> Optional[float]:
    """
    Optical loss at which fixed gains satisfy the optimization condition

    For ID with an optical seed this is l_B = 1 - (g1 g2 / (G1 G2))^2 (1 - eta),
    the loss where the un-optimized SNR peaks.

    Returns:
        l in [0, 1], or None if no loss satisfies the condition
    """
    q = math.sqrt(max(0.0, 1.0 - eta))
    if scheme is DetectionScheme.BHD:
        denominator = 2.0 * q * G1.G * G2.G * G1.g * G2.g
        numerator = 2.0 * q ** 2 * G1.g ** 2 * G2.g ** 2 + G2.g ** 2 + G2.G ** 2
    elif seed_kind is SeedKind.OPTICAL:
        denominator = G1.G * G2.G
        numerator = G1.g * G2.g * q
    else:
        denominator = G2.G * G1.g
        numerator = G1.G * G2.g * q
    if denominator == 0.0:
        return None
    s = numerator / denominator
    if s > 1.0:
        return None
    return 1.0 - s * s
