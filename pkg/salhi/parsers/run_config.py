"""
Run configuration: everything a CLI invocation reads from its config file
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

from salhi import config
from salhi.core.analytic import DetectionScheme
from salhi.core.gain import gain_from_G
from salhi.core.model import InterferometerConfig, LossParams, ProbeSettings
from salhi.services.optimizer import Grid, Objective, SweepSpec, SweptVariable

OUTPUT_FORMATS = ("csv", "json", "svg")

# G1 = 3, G2 = 5, eta = 0.4 at the largest loss of the visibility-versus-loss curve
BASELINE = InterferometerConfig(
    stage1=gain_from_G(3.0),
    stage2=gain_from_G(5.0),
    losses=LossParams(l=0.96, eta=0.4),
)


@dataclass(frozen=True)
class SweepBlock:
    swept: SweptVariable = SweptVariable.LOSS_L
    min: float = 0.6
    max: float = 0.96
    points: int = 37
    scheme: DetectionScheme = DetectionScheme.ID
    objective: Objective = Objective.BOTH


@dataclass(frozen=True)
class FigurePanel:
    G1: float
    eta: float


# Illustrative parameter sets for the before/after-optimization panels, not measured values
DEFAULT_PANELS: Tuple[FigurePanel, ...] = (
    FigurePanel(G1=2.0, eta=0.2),
    FigurePanel(G1=3.0, eta=0.4),
    FigurePanel(G1=4.0, eta=0.6),
)


@dataclass(frozen=True)
class FigureSettings:
    l_min: float = 0.6
    l_max: float = 0.96
    points: int = 37
    panels: Tuple[FigurePanel, ...] = DEFAULT_PANELS

    def loss_grid(self) -> Grid:
        return Grid(self.l_min, self.l_max, self.points)


@dataclass(frozen=True)
class RunConfig:
    """
    Parsed run configuration

    Attributes:
        interferometer: Base interferometer, validated
        bounds: Allowed (G2_min, G2_max) for every optimization
        sweep: Sweep block, None when the file has none
        figure: Figure preset settings
        output_dir: Directory for written artifacts
        formats: Subset of OUTPUT_FORMATS to write
        random_seed: Seed of the random grids used by verify
    """

    interferometer: InterferometerConfig = BASELINE
    bounds: Tuple[float, float] = (config.G2_MIN, config.G2_MAX)
    sweep: Optional[SweepBlock] = None
    figure: FigureSettings = field(default_factory=FigureSettings)
    output_dir: str = config.OUTPUT_DIR
    formats: Tuple[str, ...] = OUTPUT_FORMATS
    random_seed: int = config.RANDOM_SEED

    def sweep_spec(self, points: Optional[int] = None) -> SweepSpec:
        """SweepSpec for the sweep block (defaults when absent), optionally regridded"""
        block = self.sweep or SweepBlock()
        if points is not None:
            block = replace(block, points=points)
        return SweepSpec(
            swept=block.swept,
            grid=Grid(block.min, block.max, block.points),
            base=self.interferometer,
            scheme=block.scheme,
            objective=block.objective,
            bounds=self.bounds,
        )

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready dict accepted back by JsonConfigParser"""
        cfg = self.interferometer
        payload: Dict[str, Any] = {
            "interferometer": {
                "G1": cfg.stage1.G,
                "G2": cfg.stage2.G,
                "l": cfg.losses.l,
                "eta": cfg.losses.eta,
                "seed": {
                    "kind": cfg.seed.kind.value,
                    "mean_photon_number": cfg.seed.mean_photon_number,
                    "alpha_phase": cfg.seed.alpha_phase,
                },
                "probe": {
                    "phi": cfg.probe.phi,
                    "delta": cfg.probe.delta,
                    "dark_offset": cfg.probe.dark_offset,
                },
            },
            "bounds": list(self.bounds),
            "figure": {
                "l_min": self.figure.l_min,
                "l_max": self.figure.l_max,
                "points": self.figure.points,
                "panels": [{"G1": p.G1, "eta": p.eta} for p in self.figure.panels],
            },
            "output": {"dir": self.output_dir, "formats": list(self.formats)},
            "random_seed": self.random_seed,
        }
        if self.sweep is not None:
            payload["sweep"] = {
                "swept": self.sweep.swept.value,
                "min": self.sweep.min,
                "max": self.sweep.max,
                "points": self.sweep.points,
                "scheme": self.sweep.scheme.value,
                "objective": self.sweep.objective.value,
            }
        return payload


def default_probe(phi: Optional[float], delta: float, dark_offset: float) -> ProbeSettings:
    if phi is None:
        phi = math.pi + dark_offset
    return ProbeSettings(phi=phi, delta=delta, dark_offset=dark_offset)
