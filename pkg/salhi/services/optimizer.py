"""
Recombination-gain optimization and parameter sweeps
Only G2 is adjusted; G1, losses and probe stay fixed.
"""

import logging
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Callable, FrozenSet, List, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from salhi import config
from salhi.core import analytic
from salhi.core.analytic import DetectionScheme
from salhi.core.errors import ConfigValidationError, SalhiError
from salhi.core.gain import GainFactor, gain_from_G
from salhi.core.model import Flag, InterferometerConfig, Measurement
from salhi.core.moments import fringe_curve
from salhi.core.validation import validate_config
from salhi.utils.numerics import maximize_on_interval

logger = logging.getLogger(__name__)

Bounds = Tuple[float, float]
DEFAULT_BOUNDS: Bounds = (config.G2_MIN, config.G2_MAX)


class Objective(str, Enum):
    VISIBILITY = "visibility"
    SNR = "snr"
    BOTH = "both"
    NONE = "none"


class SweptVariable(str, Enum):
    LOSS_L = "l"
    LOSS_ETA = "eta"
    G2 = "G2"
    PHI = "phi"


@dataclass(frozen=True)
class Grid:
    min: float
    max: float
    points: int

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.points)


@dataclass(frozen=True)
class SweepSpec:
    swept: SweptVariable
    grid: Grid
    base: InterferometerConfig
    scheme: DetectionScheme = DetectionScheme.ID
    objective: Objective = Objective.BOTH
    bounds: Bounds = DEFAULT_BOUNDS


@dataclass(frozen=True)
class GainOptimum:
    """Best recombination gain for one objective"""

    gain: GainFactor
    value: float
    exact: bool
    flags: FrozenSet[Flag] = frozenset()


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a sweep; column names double as the CSV header"""

    swept_value: float
    visibility_su: float
    visibility_mz: float
    snr_su: float
    snr_mz: float
    optimal_g2_for_v: float = math.nan
    optimal_g2_for_snr: float = math.nan
    optimized_visibility: float = math.nan
    optimized_snr: float = math.nan
    condition_residual: float = math.nan
    intensity_su: float = math.nan
    intensity_mz: float = math.nan
    exact: bool = False
    undefined_fringe: bool = False
    infinite: bool = False
    flat_objective: bool = False
    error: str = ""

    @classmethod
    def columns(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    def values(self) -> list:
        return [getattr(self, name) for name in self.columns()]


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: Tuple[SweepRow, ...] = field(default_factory=tuple)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.rows], dtype=float)


def _objective_function(base: InterferometerConfig, objective: Objective, scheme: DetectionScheme) -> Callable[[float], float]:
    if objective is Objective.VISIBILITY:
        def evaluate(G2: float) -> float:
            return analytic.visibility_su(base.with_stage2(gain_from_G(G2))).value
    else:
        def evaluate(G2: float) -> float:
            return analytic.snr_su(base.with_stage2(gain_from_G(G2)), scheme).value
    return evaluate


def optimize_g2(
    base: InterferometerConfig,
    objective: Objective = Objective.VISIBILITY,
    scheme: DetectionScheme = DetectionScheme.ID,
    bounds: Bounds = DEFAULT_BOUNDS,
    points: int = config.PRESCAN_POINTS,
    tol: float = config.GOLDEN_TOL,
) -> GainOptimum:
    """
    Recombination gain maximizing visibility or SNR

    Visibility uses the closed-form condition when it is solvable inside the
    bounds; otherwise, and for SNR, a prescan grid followed by golden-section
    refinement. The base G2 is always a candidate, so the optimum never falls
    below the un-optimized value.

    Args:
        base: Configuration whose stage2 is replaced
        objective: Objective.VISIBILITY or Objective.SNR
        scheme: Detection scheme of the SNR objective
        bounds: (G2_min, G2_max)
        points: Prescan grid size
        tol: Golden-section tolerance in G2

    Returns:
        GainOptimum; for SNR, exact means the maximizer is interior to the bounds
    """
    if objective not in (Objective.VISIBILITY, Objective.SNR):
        raise ValueError(f"optimize_g2 needs a single objective, got {objective}")
    lo, hi = bounds

    if objective is Objective.VISIBILITY:
        solution = analytic.solve_g2(base.stage1, base.losses, DetectionScheme.ID, base.seed.kind, bounds, points)
        if solution.exact:
            value = analytic.visibility_su(base.with_stage2(solution.gain)).value
            return GainOptimum(solution.gain, value, True)

    evaluate = _objective_function(base, objective, scheme)
    result = maximize_on_interval(evaluate, lo, hi, points, tol, candidates=(base.stage2.G,))
    if result.flat:
        logger.debug(f"Flat {objective.value} objective over G2 in [{lo}, {hi}]")
        return GainOptimum(gain_from_G(lo), result.value, False, frozenset({Flag.FLAT_OBJECTIVE}))
    exact = result.interior if objective is Objective.SNR else False
    return GainOptimum(gain_from_G(result.x), result.value, exact)


@dataclass(frozen=True)
class CoincidenceRow:
    l: float
    g2_for_visibility: float
    g2_for_snr: float
    difference: float
    flags: FrozenSet[Flag] = frozenset()


def coincidence_report(
    base: InterferometerConfig,
    loss_grid: Sequence[float],
    bounds: Bounds = DEFAULT_BOUNDS,
    scheme: DetectionScheme = DetectionScheme.ID,
    tol: float = config.GOLDEN_TOL,
) -> List[CoincidenceRow]:
    """
    Compare the visibility-optimal and SNR-optimal G2 along a loss grid

    Args:
        base: Configuration supplying G1, eta, seed and probe
        loss_grid: Optical losses to evaluate
        bounds: (G2_min, G2_max)
        scheme: Detection scheme of the SNR objective
        tol: Golden-section tolerance

    Returns:
        One CoincidenceRow per loss, in grid order
    """
    rows = []
    for l in loss_grid:
        cfg = base.with_losses(l=float(l))
        best_v = optimize_g2(cfg, Objective.VISIBILITY, scheme, bounds, tol=tol)
        best_snr = optimize_g2(cfg, Objective.SNR, scheme, bounds, tol=tol)
        rows.append(CoincidenceRow(
            l=float(l),
            g2_for_visibility=best_v.gain.G,
            g2_for_snr=best_snr.gain.G,
            difference=abs(best_v.gain.G - best_snr.gain.G),
            flags=best_v.flags | best_snr.flags,
        ))
    return rows


def validate_sweep(spec: SweepSpec) -> SweepSpec:
    """
    Check grid ordering and that the swept variable stays in its domain

    Raises:
        ConfigValidationError: Listing each violated invariant
    """
    errors = []
    try:
        validate_config(spec.base)
    except ConfigValidationError as e:
        errors.extend(e.errors)
    grid = spec.grid
    if not grid.min < grid.max:
        errors.append(f"grid min must be < max (got {grid.min}, {grid.max})")
    if grid.points < 2:
        errors.append(f"grid needs at least 2 points (got {grid.points})")
    if spec.swept in (SweptVariable.LOSS_L, SweptVariable.LOSS_ETA) and (grid.min < 0 or grid.max > 1):
        errors.append(f"{spec.swept.value} grid out of [0,1]")
    lo, hi = spec.bounds
    if not 1.0 <= lo < hi:
        errors.append(f"G2 bounds must satisfy 1 <= min < max (got {lo}, {hi})")
    if spec.swept is SweptVariable.G2 and (grid.min < lo or grid.max > hi):
        errors.append(f"G2 grid out of [{lo}, {hi}]")
    if errors:
        raise ConfigValidationError(errors)
    return spec


def _point_config(base: InterferometerConfig, swept: SweptVariable, value: float) -> InterferometerConfig:
    if swept is SweptVariable.LOSS_L:
        return base.with_losses(l=value)
    if swept is SweptVariable.LOSS_ETA:
        return base.with_losses(eta=value)
    if swept is SweptVariable.G2:
        return base.with_stage2(gain_from_G(value))
    return base.with_phi(value)


def _flags_of(*measurements: Measurement) -> FrozenSet[Flag]:
    flags: FrozenSet[Flag] = frozenset()
    for m in measurements:
        flags |= m.flags
    return flags


def evaluate_point(spec: SweepSpec, value: float) -> SweepRow:
    """Evaluate every requested quantity at one grid value"""
    cfg = _point_config(spec.base, spec.swept, value)
    validate_config(cfg)
    v_su = analytic.visibility_su(cfg)
    v_mz = analytic.visibility_mz(cfg.losses)
    snr = analytic.snr_su(cfg, spec.scheme)
    photons = cfg.seed.mean_photon_number
    snr_mz = analytic.snr_mz(cfg.losses, cfg.stage1, cfg.probe, photons)
    flags = _flags_of(v_su, v_mz, snr, snr_mz)

    phi = cfg.probe.phi
    s, q = cfg.losses.optical_transmission, cfg.losses.atomic_transmission
    n0 = (2.0 * cfg.stage1.G ** 2 - 1.0) * photons
    intensity_mz = n0 * (s ** 2 + q ** 2 + 2.0 * s * q * math.cos(phi))

    row = dict(
        swept_value=float(value),
        visibility_su=v_su.value,
        visibility_mz=v_mz.value,
        snr_su=snr.value,
        snr_mz=snr_mz.value,
        condition_residual=analytic.condition_residual(cfg, spec.scheme),
        intensity_su=float(fringe_curve(cfg, np.array([phi]))[0]),
        intensity_mz=intensity_mz,
    )

    exact = False
    if spec.objective in (Objective.VISIBILITY, Objective.BOTH):
        best = optimize_g2(cfg, Objective.VISIBILITY, spec.scheme, spec.bounds)
        row.update(optimal_g2_for_v=best.gain.G, optimized_visibility=best.value)
        flags |= best.flags
        exact = best.exact
    if spec.objective in (Objective.SNR, Objective.BOTH):
        best = optimize_g2(cfg, Objective.SNR, spec.scheme, spec.bounds)
        row.update(optimal_g2_for_snr=best.gain.G, optimized_snr=best.value)
        flags |= best.flags
        if spec.objective is Objective.SNR:
            exact = best.exact

    return SweepRow(
        **row,
        exact=exact,
        undefined_fringe=Flag.UNDEFINED_FRINGE in flags,
        infinite=Flag.INFINITE in flags,
        flat_objective=Flag.FLAT_OBJECTIVE in flags,
    )


def run_sweep(spec: SweepSpec, progress: bool = False) -> SweepResult:
    """
    Evaluate a sweep over its grid

    A failing grid point is logged and recorded in its row's error column;
    the sweep itself never aborts part-way.

    Args:
        spec: Sweep description
        progress: Show a progress bar

    Returns:
        SweepResult with one row per grid point, ascending in the swept value
    """
    validate_sweep(spec)
    rows = []
    for value in tqdm(spec.grid.values(), desc=f"Sweeping {spec.swept.value}", disable=not progress):
        try:
            rows.append(evaluate_point(spec, float(value)))
        except SalhiError as e:
            logger.error(f"Error evaluating {spec.swept.value}={value}: {str(e)}")
            rows.append(SweepRow(
                swept_value=float(value),
                visibility_su=math.nan,
                visibility_mz=math.nan,
                snr_su=math.nan,
                snr_mz=math.nan,
                error=str(e),
            ))
    return SweepResult(spec=spec, rows=tuple(rows))
