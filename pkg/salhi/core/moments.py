"""
Exact operator-moment engine
Each output mode is a Bogoliubov combination of the four input modes (seeded
port, its partner, optical-loss vacuum v, atomic-dephasing vacuum F). Moments of
the Gaussian output follow from Wick's theorem.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from salhi import config
from salhi.core.analytic import DetectionScheme
from salhi.core.model import InterferometerConfig, Measurement, SeedKind, SeedSpec
from salhi.utils.numerics import golden_section_max

logger = logging.getLogger(__name__)

# Variances below this are treated as zero noise
VARIANCE_FLOOR = 1e-300


class Channel(str, Enum):
    OPTICAL_OUT = "optical"
    ATOMIC_OUT = "atomic"


class ModeLabel(str, Enum):
    SEED = "seed"
    PARTNER = "partner"
    V = "v"
    F = "F"


MODE_ORDER: Tuple[ModeLabel, ...] = (ModeLabel.SEED, ModeLabel.PARTNER, ModeLabel.V, ModeLabel.F)


@dataclass(frozen=True, eq=False)
class ModeCoefficients:
    """
    Output mode a_out = sum_k c_k b_k + d_k b_k^dagger over the input modes

    Attributes:
        modes: Input-mode labels, in the order of c and d
        c: Annihilation-operator coefficients
        d: Creation-operator coefficients
    """

    modes: Tuple[ModeLabel, ...]
    c: np.ndarray
    d: np.ndarray

    @property
    def commutator(self) -> float:
        """sum |c|^2 - sum |d|^2, equal to 1 for a bosonic mode"""
        return float(np.sum(np.abs(self.c) ** 2) - np.sum(np.abs(self.d) ** 2))

    def coefficient(self, label: ModeLabel) -> Tuple[complex, complex]:
        k = self.modes.index(label)
        return complex(self.c[k]), complex(self.d[k])


@dataclass(frozen=True)
class MomentReport:
    mean_intensity: float
    intensity_variance: float
    quadrature_mean: float
    quadrature_variance: float


def _coefficient_table(cfg: InterferometerConfig, phis: np.ndarray, channel: Channel) -> Tuple[np.ndarray, np.ndarray]:
    """
    Coefficients for a batch of phases, shape (len(phis), 4) in MODE_ORDER

    Physical inputs are the optical port a0 and the atomic port S0; the seeded
    one is relabelled SEED and the other PARTNER.
    """
    G1, g1 = cfg.stage1.G, cfg.stage1.g
    G2, g2 = cfg.stage2.G, cfg.stage2.g
    s = cfg.losses.optical_transmission
    q = cfg.losses.atomic_transmission
    sl = math.sqrt(max(0.0, cfg.losses.l))
    se = math.sqrt(max(0.0, cfg.losses.eta))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    zero = np.zeros_like(phis, dtype=complex)

    if channel is Channel.OPTICAL_OUT:
        rotor = np.exp(1j * phis)
        # a_s2 = (G1G2 s e^{i phi} + g1g2 q) a0 + (G2g1 s e^{i phi} + G1g2 q) S0^dag + G2 sqrt(l) v + g2 sqrt(eta) F^dag
        optical = (G1 * G2 * s * rotor + g1 * g2 * q, zero)
        atomic = (zero, G2 * g1 * s * rotor + G1 * g2 * q)
        v = (zero + G2 * sl, zero)
        f = (zero, zero + g2 * se)
    else:
        rotor = np.exp(-1j * phis)
        # S_a2 = (G1g2 s e^{-i phi} + G2g1 q) a0^dag + g2 sqrt(l) v^dag + (g1g2 s e^{-i phi} + G1G2 q) S0 + G2 sqrt(eta) F
        optical = (zero, G1 * g2 * s * rotor + G2 * g1 * q)
        atomic = (g1 * g2 * s * rotor + G1 * G2 * q, zero)
        v = (zero, zero + g2 * sl)
        f = (zero + G2 * se, zero)

    if cfg.seed.kind is SeedKind.OPTICAL:
        seed, partner = optical, atomic
    else:
        seed, partner = atomic, optical
    c = np.stack([seed[0], partner[0], v[0], f[0]], axis=-1)
    d = np.stack([seed[1], partner[1], v[1], f[1]], axis=-1)
    return c, d


def build_output_coefficients(
    cfg: InterferometerConfig,
    phi: Optional[float] = None,
    channel: Channel = Channel.OPTICAL_OUT,
) -> ModeCoefficients:
    """
    Express an interferometer output through the input modes

    Args:
        cfg: Interferometer configuration
        phi: Interferometer phase, defaults to cfg.probe.phi
        channel: Optical (a_s2) or atomic (S_a2) output

    Returns:
        ModeCoefficients in MODE_ORDER
    """
    if phi is None:
        phi = cfg.probe.phi
    c, d = _coefficient_table(cfg, np.array([phi]), channel)
    return ModeCoefficients(modes=MODE_ORDER, c=c[0], d=d[0])


def _mean_field(c: np.ndarray, d: np.ndarray, alpha: complex) -> np.ndarray:
    # seed coherent with amplitude alpha, every other input in vacuum
    return c[..., 0] * alpha + d[..., 0] * np.conj(alpha)


def compute_moments(mc: ModeCoefficients, seed: SeedSpec, lo_phase: float = 0.0) -> MomentReport:
    """
    Photon-number and quadrature moments of a Gaussian output mode

    With mu = c_seed alpha + d_seed alpha*, n_f = sum |d|^2 and m_f = sum c d:
        <N> = |mu|^2 + n_f
        Var N = |mu|^2 (2 n_f + 1) + 2 Re(mu*^2 m_f) + n_f (n_f + 1) + |m_f|^2
    and for X = a e^{-i theta} + a^dag e^{i theta}:
        <X> = 2 Re(mu e^{-i theta}),  Var X = sum |c e^{-i theta} + d* e^{i theta}|^2

    Args:
        mc: Output mode coefficients
        seed: Coherent seed on the SEED mode
        lo_phase: Local-oscillator phase theta

    Returns:
        MomentReport
    """
    c, d = mc.c, mc.d
    mu = complex(_mean_field(c, d, seed.alpha))
    n_f = float(np.sum(np.abs(d) ** 2))
    m_f = complex(np.sum(c * d))
    mu2 = abs(mu) ** 2

    mean_intensity = mu2 + n_f
    intensity_variance = (
        mu2 * (2.0 * n_f + 1.0)
        + 2.0 * (np.conj(mu) ** 2 * m_f).real
        + n_f * (n_f + 1.0)
        + abs(m_f) ** 2
    )
    lo = complex(math.cos(lo_phase), -math.sin(lo_phase))  # e^{-i theta}
    quadrature_mean = 2.0 * (mu * lo).real
    quadrature_variance = float(np.sum(np.abs(c * lo + np.conj(d) * np.conj(lo)) ** 2))
    return MomentReport(
        mean_intensity=float(mean_intensity),
        intensity_variance=float(intensity_variance),
        quadrature_mean=float(quadrature_mean),
        quadrature_variance=quadrature_variance,
    )


def fringe_curve(cfg: InterferometerConfig, phis: np.ndarray, channel: Channel = Channel.OPTICAL_OUT) -> np.ndarray:
    """Exact mean output intensity over a phase grid"""
    c, d = _coefficient_table(cfg, phis, channel)
    mu = _mean_field(c, d, cfg.seed.alpha)
    return np.abs(mu) ** 2 + np.sum(np.abs(d) ** 2, axis=-1)


def _intensity(cfg: InterferometerConfig, phi: float, channel: Channel) -> float:
    return float(fringe_curve(cfg, np.array([phi]), channel)[0])


def _refine(cfg: InterferometerConfig, channel: Channel, grid: np.ndarray, i: int, sign: float, tol: float) -> float:
    step = grid[1] - grid[0]
    _, value = golden_section_max(
        lambda p: sign * _intensity(cfg, p, channel),
        grid[i] - step,
        grid[i] + step,
        tol,
    )
    return sign * value


def exact_visibility(
    cfg: InterferometerConfig,
    channel: Channel = Channel.OPTICAL_OUT,
    points: int = config.FRINGE_POINTS,
    tol: float = config.FRINGE_TOL,
) -> Measurement:
    """
    Fringe visibility (I_max - I_min) / (I_max + I_min) from the exact intensity

    The phase is scanned on a uniform grid over [0, 2 pi), then each extremum is
    refined by golden-section search.
    """
    grid = np.linspace(0.0, 2.0 * math.pi, points, endpoint=False)
    curve = fringe_curve(cfg, grid, channel)
    i_max = max(float(curve.max()), _refine(cfg, channel, grid, int(np.argmax(curve)), 1.0, tol))
    i_min = min(float(curve.min()), _refine(cfg, channel, grid, int(np.argmin(curve)), -1.0, tol))
    total = i_max + i_min
    if total <= 0.0:
        return Measurement.undefined_fringe()
    return Measurement(min(1.0, max(0.0, (i_max - i_min) / total)))


def _quadrature_slope(cfg: InterferometerConfig, phi: float, channel: Channel, step: float) -> complex:
    """d(mu)/d(phi) by central difference"""
    c, d = _coefficient_table(cfg, np.array([phi - step, phi + step]), channel)
    mu = _mean_field(c, d, cfg.seed.alpha)
    return complex((mu[1] - mu[0]) / (2.0 * step))


def optimal_lo_phase(cfg: InterferometerConfig, phi: float = math.pi, channel: Channel = Channel.OPTICAL_OUT, step: float = config.FD_STEP) -> float:
    """Local-oscillator phase maximizing |d<X>/d phi|"""
    slope = _quadrature_slope(cfg, phi, channel, step)
    return math.atan2(slope.imag, slope.real)


def snr_numeric(
    cfg: InterferometerConfig,
    scheme: DetectionScheme = DetectionScheme.ID,
    channel: Channel = Channel.OPTICAL_OUT,
    step: float = config.FD_STEP,
    lo_phase: Optional[float] = None,
) -> Measurement:
    """
    SNR = (d<O>/d phi * delta)^2 / Var(O) from exact moments

    ID: O is the photon number at cfg.probe.phi.
    BHD: O is the quadrature at the dark fringe phi = pi, with the
    local-oscillator phase maximizing the slope unless lo_phase is given.

    Args:
        cfg: Interferometer configuration
        scheme: Detection scheme
        channel: Output mode
        step: Central-difference step in phi
        lo_phase: Homodyne local-oscillator phase override

    Returns:
        Measurement; INFINITY_SENTINEL flagged INFINITE when the variance underflows
    """
    delta = cfg.probe.delta
    if scheme is DetectionScheme.ID:
        phi = cfg.probe.phi
        slope = (_intensity(cfg, phi + step, channel) - _intensity(cfg, phi - step, channel)) / (2.0 * step)
        variance = compute_moments(build_output_coefficients(cfg, phi, channel), cfg.seed).intensity_variance
    else:
        phi = math.pi
        theta = optimal_lo_phase(cfg, phi, channel, step) if lo_phase is None else lo_phase
        upper = compute_moments(build_output_coefficients(cfg, phi + step, channel), cfg.seed, theta)
        lower = compute_moments(build_output_coefficients(cfg, phi - step, channel), cfg.seed, theta)
        slope = (upper.quadrature_mean - lower.quadrature_mean) / (2.0 * step)
        variance = compute_moments(build_output_coefficients(cfg, phi, channel), cfg.seed, theta).quadrature_variance

    if variance < VARIANCE_FLOOR:
        logger.debug(f"Output variance underflow ({variance}) for {cfg}")
        return Measurement.infinite()
    return Measurement((slope * delta) ** 2 / variance)
