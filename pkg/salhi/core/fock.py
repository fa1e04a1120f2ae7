"""
Truncated Fock-space oracle
Builds the interferometer output state by direct evolution in a two-mode
truncated basis and evaluates the same moments as salhi.core.moments. Loss and
dephasing are beam-splitter couplings to a fresh vacuum ancilla; each is
unravelled into its Kraus branches, so every branch stays a pure two-mode state
and the output is their incoherent sum.
"""

import logging
import math
from dataclasses import replace
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.linalg import expm
from scipy.special import comb, gammaln

from salhi import config
from salhi.core.errors import CutoffError, DomainError
from salhi.core.gain import make_gain
from salhi.core.model import InterferometerConfig, LossParams, SeedKind
from salhi.core.moments import Channel, ModeCoefficients, MomentReport, build_output_coefficients

logger = logging.getLogger(__name__)

# Operating range of the oracle; inside it the cutoff is sized to the state
MAX_SQUEEZE = 0.5
MAX_SEED_AMPLITUDE = 1.0

# Kraus branches lighter than this are dropped
BRANCH_FLOOR = 1e-17

# An automatic cutoff is sized for tail_tol times this factor
AUTO_TAIL_MARGIN = 1e-3


def coherent_state(alpha: complex, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff)
    log_norm = -0.5 * abs(alpha) ** 2 - 0.5 * gammaln(n + 1)
    if alpha == 0:
        state = np.zeros(cutoff, dtype=complex)
        state[0] = 1.0
        return state
    return np.exp(log_norm) * np.power(complex(alpha), n)


def loss_kraus(loss: float, cutoff: int) -> np.ndarray:
    """
    Kraus operators E_k of a pure-loss channel, shape (cutoff, cutoff, cutoff)

    E_k |n> = sqrt(C(n, k)) (1 - loss)^{(n-k)/2} loss^{k/2} |n - k>, the action of a
    beam splitter of transmission 1 - loss with the ancilla traced out.
    """
    kraus = np.zeros((cutoff, cutoff, cutoff))
    for k in range(cutoff):
        for n in range(k, cutoff):
            kraus[k, n - k, n] = math.sqrt(comb(n, k)) * (1.0 - loss) ** ((n - k) / 2.0) * loss ** (k / 2.0)
    return kraus


def two_mode_squeezer(r: float, cutoff: int) -> sparse.csr_matrix:
    """
    exp(r (a^dag s^dag - a s)) on the truncated two-mode basis |i, j> -> index i * cutoff + j

    The generator conserves i - j, so it is exponentiated one fixed-difference
    block at a time; a -> cosh(r) a + sinh(r) s^dag.
    """
    levels = np.arange(cutoff)
    rows, cols, values = [], [], []
    for difference in range(-(cutoff - 1), cutoff):
        i = levels[(levels - difference >= 0) & (levels - difference < cutoff)]
        j = i - difference
        index = i * cutoff + j
        coupling = np.sqrt((i[:-1] + 1.0) * (j[:-1] + 1.0))
        generator = np.diag(coupling, -1) - np.diag(coupling, 1)
        block = expm(r * generator)
        rows.append(np.repeat(index, len(index)))
        cols.append(np.tile(index, len(index)))
        values.append(block.ravel())
    size = cutoff * cutoff
    return sparse.csr_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    )


def _loss_weights(loss: float, cutoff: int) -> np.ndarray:
    # w[k, n] = <n - k| E_k |n>
    kraus = loss_kraus(loss, cutoff)
    levels = np.arange(cutoff)
    weights = np.zeros((cutoff, cutoff))
    for k in range(cutoff):
        weights[k, k:] = kraus[k, levels[k:] - k, levels[k:]]
    return weights


def _apply_loss(states: np.ndarray, loss: float, axis: int) -> np.ndarray:
    """Unravel a pure-loss channel on `axis` (1 optical, 2 atomic) of branches states[b, i, j]"""
    if loss <= 0.0:
        return states
    cutoff = states.shape[-1]
    weights = _loss_weights(loss, cutoff)
    moved = np.moveaxis(states, axis, -1)
    kept = []
    for k in range(cutoff):
        branch = np.zeros_like(moved)
        branch[..., : cutoff - k] = weights[k, k:] * moved[..., k:]
        norms = np.sum(np.abs(branch) ** 2, axis=(1, 2))
        keep = norms > BRANCH_FLOOR
        if keep.any():
            kept.append(branch[keep])
    return np.moveaxis(np.concatenate(kept), -1, axis)


def _tail_norm(states: np.ndarray) -> float:
    populations = np.sum(np.abs(states) ** 2, axis=0)
    return float(populations[-1, :].sum() + populations[:, -1].sum())


def _gaussian_tail_level(mc: ModeCoefficients, alpha: complex, tol: float) -> int:
    """
    Lowest level above which a single-mode Gaussian marginal holds less than tol

    The photon-number tail of a displaced Gaussian state with fluctuation spread
    n_f + |<a a>| and displacement |mu|^2 falls like x^n exp(2 sqrt(n y)), with
    x = spread / (spread + 1) and y = |mu|^2 / (spread (spread + 1)).
    """
    displacement = abs(mc.c[0] * alpha + mc.d[0] * np.conj(alpha)) ** 2
    spread = float(np.sum(np.abs(mc.d) ** 2) + abs(np.sum(mc.c * mc.d)))
    log_tol = math.log(tol)
    if spread < 1e-12:
        if displacement == 0.0:
            return 2
        # Poisson tail
        n = int(displacement)
        while n * math.log(displacement) - displacement - gammaln(n + 1) > log_tol:
            n += 1
        return n + 1
    decay = math.log1p(1.0 / spread)
    y = displacement / (spread * (spread + 1.0))
    t = (math.sqrt(y) + math.sqrt(y - decay * log_tol)) / decay
    return int(math.ceil(t * t)) + 1


def estimate_cutoff(cfg: InterferometerConfig, tail_tol: float = config.FOCK_TAIL_TOL, phi: Optional[float] = None) -> int:
    """
    Levels per mode needed to keep the top-level population below tail_tol

    Both modes are checked after the first stage and at the output.

    Args:
        cfg: Interferometer configuration
        tail_tol: Largest tolerated top-level population
        phi: Interferometer phase, defaults to cfg.probe.phi

    Returns:
        Estimated cutoff
    """
    first_stage = replace(cfg, stage2=make_gain(0.0), losses=LossParams(0.0, 0.0))
    required = 2
    for variant in (first_stage, cfg):
        for channel in Channel:
            mc = build_output_coefficients(variant, phi=phi, channel=channel)
            required = max(required, _gaussian_tail_level(mc, variant.seed.alpha, tail_tol))
    return required


def _evolve(cfg: InterferometerConfig, phi: float, cutoff: int, tail_tol: float) -> np.ndarray:
    """Output branches, shape (branches, cutoff, cutoff), optical level first"""
    n = cutoff
    vacuum = coherent_state(0.0, n)
    seeded = coherent_state(cfg.seed.alpha, n)
    if cfg.seed.kind is SeedKind.OPTICAL:
        psi = np.outer(seeded, vacuum)
    else:
        psi = np.outer(vacuum, seeded)

    psi = (two_mode_squeezer(cfg.stage1.r, n) @ psi.ravel()).reshape(n, n)
    # phase shift on the optical arm: a -> e^{i phi} a
    psi = psi * np.exp(1j * phi * np.arange(n))[:, None]
    states = psi[None, :, :]
    tail = _tail_norm(states)

    states = _apply_loss(states, cfg.losses.l, axis=1)
    states = _apply_loss(states, cfg.losses.eta, axis=2)
    branches = len(states)
    flat = two_mode_squeezer(cfg.stage2.r, n) @ states.reshape(branches, n * n).T
    states = np.ascontiguousarray(flat.T).reshape(branches, n, n)

    tail = max(tail, _tail_norm(states))
    if tail > tail_tol:
        raise CutoffError(tail, n, max(estimate_cutoff(cfg, tail_tol, phi), n + max(4, n // 4)))
    logger.debug(f"Fock oracle tail norm {tail:.2e} at n_max={n} over {branches} branches")
    return states


def fock_oracle(
    cfg: InterferometerConfig,
    channel: Channel = Channel.OPTICAL_OUT,
    phi: Optional[float] = None,
    lo_phase: float = 0.0,
    cutoff: Optional[int] = None,
    tail_tol: float = config.FOCK_TAIL_TOL,
) -> MomentReport:
    """
    Output moments by direct evolution in a truncated Fock basis

    Without an explicit cutoff the basis is sized from the state, never below
    config.FOCK_CUTOFF, and grown once if the tail still exceeds tail_tol.

    Args:
        cfg: Configuration with squeeze arguments <= 0.5 and |alpha| <= 1
        channel: Output mode whose moments are returned
        phi: Interferometer phase, defaults to cfg.probe.phi
        lo_phase: Quadrature angle theta
        cutoff: Levels per mode; fixed, with no retry, when given
        tail_tol: Largest population tolerated on the top level of either mode

    Returns:
        MomentReport comparable with compute_moments

    Raises:
        DomainError: Outside the small-squeezing operating range
        CutoffError: When the truncation tail exceeds tail_tol
    """
    if cfg.stage1.r > MAX_SQUEEZE or cfg.stage2.r > MAX_SQUEEZE:
        raise DomainError(f"Fock oracle needs squeeze arguments <= {MAX_SQUEEZE}")
    if abs(cfg.seed.alpha) > MAX_SEED_AMPLITUDE + 1e-12:
        raise DomainError(f"Fock oracle needs |alpha| <= {MAX_SEED_AMPLITUDE}")
    if phi is None:
        phi = cfg.probe.phi

    if cutoff is not None:
        states = _evolve(cfg, phi, cutoff, tail_tol)
    else:
        n = max(config.FOCK_CUTOFF, estimate_cutoff(cfg, tail_tol * AUTO_TAIL_MARGIN, phi))
        try:
            states = _evolve(cfg, phi, n, tail_tol)
        except CutoffError as e:
            logger.warning(f"Growing Fock cutoff from {n} to {e.required_cutoff}: {str(e)}")
            states = _evolve(cfg, phi, e.required_cutoff, tail_tol)
    n = states.shape[-1]

    mode = np.moveaxis(states, 1 if channel is Channel.OPTICAL_OUT else 2, -1)
    levels = np.arange(n, dtype=float)
    root = np.sqrt(levels[1:])
    probability = np.abs(mode) ** 2
    mean_intensity = float(np.sum(levels * probability))
    mean_square = float(np.sum(levels ** 2 * probability))

    lowered = np.zeros_like(mode)
    lowered[..., :-1] = root * mode[..., 1:]
    raised = np.zeros_like(mode)
    raised[..., 1:] = root * mode[..., :-1]
    rotor = complex(math.cos(lo_phase), -math.sin(lo_phase))
    quadrature = rotor * lowered + rotor.conjugate() * raised
    quadrature_mean = float(np.real(np.vdot(mode, quadrature)))

    return MomentReport(
        mean_intensity=mean_intensity,
        intensity_variance=mean_square - mean_intensity ** 2,
        quadrature_mean=quadrature_mean,
        quadrature_variance=float(np.sum(np.abs(quadrature) ** 2)) - quadrature_mean ** 2,
    )
