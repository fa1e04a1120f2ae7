"""
Self-verification suite
Cross-checks the closed-form layer, the exact-moment engine and the Fock oracle,
and asserts the structural properties of the optimizer. Each check reports its
worst residual against a fixed tolerance.
"""

import logging
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, List, Optional

import numpy as np
from tqdm import tqdm

from salhi import config
from salhi.core import analytic
from salhi.core.analytic import DetectionScheme
from salhi.core.errors import SalhiError
from salhi.core.fock import MAX_SEED_AMPLITUDE, MAX_SQUEEZE, fock_oracle
from salhi.core.gain import gain_from_G, make_gain
from salhi.core.model import InterferometerConfig, LossParams, ProbeSettings, SeedKind, SeedSpec
from salhi.core.moments import (
    Channel,
    build_output_coefficients,
    compute_moments,
    exact_visibility,
    snr_numeric,
)
from salhi.services.optimizer import Grid, Objective, SweepSpec, SweptVariable, coincidence_report, run_sweep
from salhi.utils.numerics import relative_stationarity

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 100

# Moments-engine configs whose discarded vacuum-noise term stays below the triangle tolerance
BRIGHTNESS_MARGIN = 1e4

# Distance from phi = pi for the intensity-detection stationarity check
STATIONARITY_OFFSET = 1e-5


class Fault(str, Enum):
    """Deliberate defects used to check that the suite can fail"""

    CROSS_TERM_SIGN = "cross-term-sign"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0


@dataclass
class VerificationReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]


def _check(name: str, residual: float, tolerance: float, detail: str = "") -> CheckResult:
    passed = math.isfinite(residual) and residual <= tolerance
    return CheckResult(name, passed, float(residual), tolerance, detail)


def _baseline(l: float = 0.96) -> InterferometerConfig:
    return InterferometerConfig.from_gains(3.0, 5.0, l, 0.4)


def check_golden_value() -> CheckResult:
    value = analytic.visibility_su(_baseline()).value
    return _check("golden visibility", abs(value - 0.51852), 1e-4, f"V_SU={value:.6f}")


def check_restoration(rng: np.random.Generator, count: int) -> CheckResult:
    """Random solvable conditions: zero residual and unit visibility after solve_g2"""
    worst, found, attempts = 0.0, 0, 0
    while found < count and attempts < 200 * count:
        attempts += 1
        G1 = rng.uniform(1.1, 5.0)
        losses = LossParams(l=rng.uniform(0.0, 0.99), eta=rng.uniform(0.0, 0.9))
        solution = analytic.solve_g2(gain_from_G(G1), losses)
        if not solution.exact or not 1.0 < solution.gain.G < 10.0:
            continue
        found += 1
        cfg = InterferometerConfig(gain_from_G(G1), solution.gain, losses)
        worst = max(
            worst,
            abs(analytic.condition_residual(cfg, DetectionScheme.ID)),
            abs(analytic.visibility_su(cfg).value - 1.0),
        )
    residual = worst if found == count else math.inf
    return _check("condition restores visibility", residual, 1e-10, f"{found} solvable configs")


def check_spot_values() -> CheckResult:
    exact = analytic.solve_g2(gain_from_G(3.0), LossParams(0.6, 0.4)).gain.G
    near = analytic.solve_g2(gain_from_G(3.0), LossParams(0.96, 0.4)).gain.G
    residual = max(abs(exact - 2.0) / 1e-10, abs(near - 1.0397) / 1e-3)
    return _check("closed-form G2 spot values", residual, 1.0, f"G2={exact:.12f}, {near:.6f}")


def _bright(cfg: InterferometerConfig) -> bool:
    mc = build_output_coefficients(cfg)
    mu = mc.c[0] * cfg.seed.alpha + mc.d[0] * np.conj(cfg.seed.alpha)
    n_f = float(np.sum(np.abs(mc.d) ** 2))
    return abs(mu) ** 2 * (2.0 * n_f + 1.0) >= BRIGHTNESS_MARGIN * n_f * (n_f + 1.0)


def _random_config(rng: np.random.Generator) -> InterferometerConfig:
    return InterferometerConfig.from_gains(
        G1=rng.uniform(1.0, 6.0),
        G2=rng.uniform(1.0, 6.0),
        l=rng.uniform(0.0, 0.99),
        eta=rng.uniform(0.0, 0.99),
        seed_kind=SeedKind.OPTICAL if rng.random() < 0.5 else SeedKind.ATOMIC,
    )


def check_analytic_vs_moments(
    rng: np.random.Generator,
    count: int,
    fault: Optional[Fault] = None,
    progress: bool = False,
) -> List[CheckResult]:
    """Closed-form ID SNR and visibility against the exact-moment engine"""
    snr_worst, vis_worst, found = 0.0, 0.0, 0
    with tqdm(total=count, desc="Analytic vs moments", disable=not progress) as bar:
        for _ in range(200 * count):
            if found >= count:
                break
            cfg = _random_config(rng)
            if not _bright(cfg):
                continue
            found += 1
            bar.update(1)
            probe_cfg = cfg
            if fault is Fault.CROSS_TERM_SIGN:
                # flipping the interference cross term is a half-period phase shift
                probe_cfg = cfg.with_phi(cfg.probe.phi + math.pi)
            closed = analytic.snr_su_id(probe_cfg).value
            exact = snr_numeric(cfg, DetectionScheme.ID).value
            snr_worst = max(snr_worst, abs(closed - exact) / exact)
            vis_worst = max(vis_worst, abs(analytic.visibility_su(cfg).value - exact_visibility(cfg).value))
    if found < count:
        snr_worst = vis_worst = math.inf
    return [
        _check("analytic vs moments: ID SNR", snr_worst, 1e-3, f"{found} configs, relative"),
        _check("analytic vs moments: visibility", vis_worst, 1e-3, f"{found} configs"),
    ]


def check_bhd_snr() -> CheckResult:
    cfg = InterferometerConfig.from_gains(3.0, 5.0, 0.5, 0.4)
    closed = analytic.snr_su_bhd(cfg).value
    exact = snr_numeric(cfg, DetectionScheme.BHD).value
    return _check("analytic vs moments: BHD SNR", abs(closed - exact) / exact, 1e-3, f"SNR={exact:.6g}")


def check_moments_vs_fock(rng: np.random.Generator, count: int, progress: bool = False) -> CheckResult:
    """Small-squeezing configs through the truncated Fock oracle, all four moments"""
    worst = 0.0
    for _ in tqdm(range(count), desc="Moments vs Fock", disable=not progress):
        cfg = InterferometerConfig(
            stage1=make_gain(rng.uniform(0.0, MAX_SQUEEZE)),
            stage2=make_gain(rng.uniform(0.0, MAX_SQUEEZE)),
            losses=LossParams(l=rng.uniform(0.0, 0.9), eta=rng.uniform(0.0, 0.9)),
            seed=SeedSpec(
                kind=SeedKind.OPTICAL if rng.random() < 0.5 else SeedKind.ATOMIC,
                mean_photon_number=rng.uniform(0.0, MAX_SEED_AMPLITUDE ** 2),
                alpha_phase=rng.uniform(0.0, 2.0 * math.pi),
            ),
            probe=ProbeSettings(phi=rng.uniform(0.0, 2.0 * math.pi)),
        )
        channel = Channel.OPTICAL_OUT if rng.random() < 0.5 else Channel.ATOMIC_OUT
        theta = rng.uniform(0.0, 2.0 * math.pi)
        expected = compute_moments(build_output_coefficients(cfg, channel=channel), cfg.seed, theta)
        try:
            actual = fock_oracle(cfg, channel=channel, lo_phase=theta)
        except SalhiError as e:
            logger.error(f"Fock oracle failed for {cfg}: {str(e)}")
            return _check("moments vs Fock oracle", math.inf, 1e-8, str(e))
        for name in ("mean_intensity", "intensity_variance", "quadrature_mean", "quadrature_variance"):
            a, b = getattr(expected, name), getattr(actual, name)
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return _check("moments vs Fock oracle", worst, 1e-8, f"{count} configs, four moments")


def check_coincidence(scheme: DetectionScheme, tol: float = config.GOLDEN_TOL) -> CheckResult:
    """
    ID: visibility-optimal and SNR-optimal G2 agree at every loss.
    BHD: they disagree somewhere.
    """
    base = InterferometerConfig.from_gains(3.0, 5.0, 0.5, 0.4)
    rows = coincidence_report(base, np.linspace(0.1, 0.9, 9), scheme=scheme, tol=tol)
    largest = max(row.difference for row in rows)
    if scheme is DetectionScheme.ID:
        return _check("coincidence of optima (ID)", largest, 1e-3, f"max |dG2|={largest:.3g}")
    # inverted: passes when some grid point separates the optima by more than 1e-2
    return _check("divergence of optima (BHD)", 1e-2 / largest if largest > 0 else math.inf, 1.0, f"max |dG2|={largest:.3g}")


def _snr_of_transmission(cfg: InterferometerConfig, scheme: DetectionScheme) -> Callable[[float], float]:
    def snr(s: float) -> float:
        return analytic.snr_su(cfg.with_losses(l=1.0 - s * s), scheme).value
    return snr


def check_stationarity() -> List[CheckResult]:
    """
    The SNR is stationary in sqrt(1-l) where each condition holds

    The intensity-detection condition is exact only as phi -> pi, so that check
    runs at STATIONARITY_OFFSET from the dark fringe.
    """
    worst_id = 0.0
    for l in (0.9, 0.96):
        losses = LossParams(l, 0.4)
        stage2 = analytic.solve_g2(gain_from_G(3.0), losses).gain
        cfg = InterferometerConfig(
            gain_from_G(3.0), stage2, losses, probe=ProbeSettings.dark_point(STATIONARITY_OFFSET)
        )
        worst_id = max(worst_id, relative_stationarity(_snr_of_transmission(cfg, DetectionScheme.ID), losses.optical_transmission))

    G1, G2 = gain_from_G(3.0), gain_from_G(2.0)
    l = analytic.loss_at_condition(G1, G2, 0.4, DetectionScheme.BHD)
    if l is None:
        bhd = math.inf
    else:
        cfg = InterferometerConfig(G1, G2, LossParams(l, 0.4))
        bhd = relative_stationarity(_snr_of_transmission(cfg, DetectionScheme.BHD), math.sqrt(1.0 - l))
    return [
        _check("SNR stationary at condition (ID)", worst_id, 1e-6),
        _check("SNR stationary at condition (BHD)", bhd, 1e-6, f"l={l}"),
    ]


def check_orderings(points: int = 37) -> List[CheckResult]:
    # SU visibility above MZ visibility
    spec = SweepSpec(SweptVariable.LOSS_L, Grid(0.6, 0.96, points), _baseline(), objective=Objective.BOTH)
    result = run_sweep(spec)
    su, mz = result.column("visibility_su"), result.column("visibility_mz")
    su_over_mz = float(np.max(mz - su))

    dominance = max(
        float(np.max(result.column("visibility_su") - result.column("optimized_visibility"))),
        float(np.max((result.column("snr_su") - result.column("optimized_snr")) / result.column("snr_su"))),
    )

    # un-optimized SNR peaks at l_B
    base = _baseline()
    l_b = analytic.loss_at_condition(base.stage1, base.stage2, base.losses.eta)
    grid = np.linspace(0.0, 0.99, 199)
    snr = [analytic.snr_su_id(base.with_losses(l=float(l))).value for l in grid]
    step = grid[1] - grid[0]
    peak_offset = abs(float(grid[int(np.argmax(snr))]) - l_b) / step if l_b is not None else math.inf

    return [
        _check("V_SU >= V_MZ", max(0.0, su_over_mz), 1e-12),
        _check("optimized curves dominate", max(0.0, dominance), 1e-9),
        _check("SNR peak at l_B", peak_offset, 1.0, f"l_B={l_b}"),
    ]


def check_bogoliubov(rng: np.random.Generator, count: int) -> CheckResult:
    worst = 0.0
    for _ in range(count):
        cfg = _random_config(rng).with_stage2(gain_from_G(rng.uniform(1.0, 10.0)))
        for channel in Channel:
            mc = build_output_coefficients(cfg, phi=rng.uniform(0.0, 2.0 * math.pi), channel=channel)
            worst = max(worst, abs(mc.commutator - 1.0))
    return _check("Bogoliubov commutator", worst, 1e-10, f"{count} configs, both outputs")


def run_verification(
    grid_size: int = DEFAULT_GRID_SIZE,
    seed: int = config.RANDOM_SEED,
    fault: Optional[Fault] = None,
    progress: bool = False,
) -> VerificationReport:
    """
    Run every check

    Args:
        grid_size: Random configs in the analytic-vs-moments comparison; the Fock,
            restoration and commutator samples scale with it
        seed: Seed of the random grids
        fault: Optional deliberate defect
        progress: Show progress bars

    Returns:
        VerificationReport
    """
    rng = np.random.default_rng(seed)
    report = VerificationReport()
    steps = [
        lambda: [check_golden_value()],
        lambda: [check_restoration(rng, max(5, grid_size // 2))],
        lambda: [check_spot_values()],
        lambda: check_analytic_vs_moments(rng, grid_size, fault, progress),
        lambda: [check_bhd_snr()],
        lambda: [check_moments_vs_fock(rng, max(2, grid_size // 5), progress)],
        lambda: [check_coincidence(DetectionScheme.ID), check_coincidence(DetectionScheme.BHD)],
        check_stationarity,
        check_orderings,
        lambda: [check_bogoliubov(rng, 10 * grid_size)],
    ]
    for step in steps:
        start = time.perf_counter()
        results = step()
        elapsed = (time.perf_counter() - start) / max(1, len(results))
        for result in results:
            result = replace(result, seconds=elapsed)
            level = logging.INFO if result.passed else logging.ERROR
            logger.log(level, f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.residual:.3g} <= {result.tolerance:.3g}")
            report.checks.append(result)
    return report
