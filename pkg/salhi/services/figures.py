"""
Figure presets
Each preset runs loss sweeps and returns a table plus the plot panels drawn from it.
"""

import logging
import os
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Sequence

from tqdm import tqdm

from salhi.core.analytic import DetectionScheme
from salhi.core.gain import gain_from_G
from salhi.parsers.run_config import RunConfig
from salhi.services.optimizer import Objective, SweepResult, SweepRow, SweepSpec, SweptVariable, run_sweep
from salhi.utils.output import render_json, write_csv, atomic_write
from salhi.utils.svg import PlotPanel, render_svg

logger = logging.getLogger(__name__)


class FigureName(str, Enum):
    FIG2B = "fig2b"
    FIG3 = "fig3"
    FIG4A = "fig4a"


@dataclass
class FigureData:
    """Tabular and plotted content of a figure preset"""

    name: FigureName
    columns: List[str]
    rows: List[List[Any]]
    panels: List[PlotPanel] = field(default_factory=list)
    panel_columns: int = 1

    def records(self) -> List[Dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _loss_sweep(run: RunConfig, objective: Objective, base=None, progress: bool = False) -> SweepResult:
    grid = run.figure.loss_grid()
    spec = SweepSpec(
        swept=SweptVariable.LOSS_L,
        grid=grid,
        base=base if base is not None else run.interferometer,
        scheme=DetectionScheme.ID,
        objective=objective,
        bounds=run.bounds,
    )
    return run_sweep(spec, progress=progress)


def _rows(result: SweepResult) -> List[List[Any]]:
    return [row.values() for row in result.rows]


def figure_visibility_vs_loss(run: RunConfig, progress: bool = False) -> FigureData:
    """Un-optimized SU(1,1) and Mach-Zehnder visibility over the loss grid"""
    result = _loss_sweep(run, Objective.NONE, progress=progress)
    l = result.column("swept_value")
    panel = PlotPanel("Visibility versus internal loss", "l", "V", y_range=(0.0, 1.05))
    panel.add("V_SU", l, result.column("visibility_su"))
    panel.add("V_MZ", l, result.column("visibility_mz"), dashed=True)
    return FigureData(FigureName.FIG2B, SweepRow.columns(), _rows(result), [panel])


def figure_before_after(run: RunConfig, progress: bool = False) -> FigureData:
    """
    Visibility and ID SNR before and after optimizing G2, one column of plots per panel

    Each panel replaces G1 and eta of the base interferometer; the remaining
    settings, including the fixed G2 of the un-optimized curves, are shared.
    """
    columns = ["panel", "G1", "eta"] + SweepRow.columns()
    rows: List[List[Any]] = []
    visibility, snr, ratio = [], [], []
    for k, settings in enumerate(tqdm(run.figure.panels, desc="Figure panels", disable=not progress)):
        base = replace(run.interferometer, stage1=gain_from_G(settings.G1)).with_losses(eta=settings.eta)
        result = _loss_sweep(run, Objective.BOTH, base=base)
        rows.extend([k, settings.G1, settings.eta] + row.values() for row in result.rows)

        title = f"G1={settings.G1:g}, eta={settings.eta:g}"
        l = result.column("swept_value")
        visibility.append(
            PlotPanel(title, "l", "V", y_range=(0.0, 1.05))
            .add("before", l, result.column("visibility_su"))
            .add("after", l, result.column("optimized_visibility"), dashed=True)
        )
        snr.append(
            PlotPanel(title, "l", "SNR (ID)")
            .add("before", l, result.column("snr_su"))
            .add("after", l, result.column("optimized_snr"), dashed=True)
        )
        ratio.append(
            PlotPanel(title, "l", "G2/G1")
            .add("for V", l, result.column("optimal_g2_for_v") / settings.G1)
            .add("for SNR", l, result.column("optimal_g2_for_snr") / settings.G1, dashed=True)
        )
    return FigureData(FigureName.FIG3, columns, rows, visibility + snr + ratio, panel_columns=max(1, len(run.figure.panels)))


def figure_optimized_visibility(run: RunConfig, progress: bool = False) -> FigureData:
    """Visibility after optimizing G2; unity wherever the condition is solvable inside the bounds"""
    result = _loss_sweep(run, Objective.VISIBILITY, progress=progress)
    l = result.column("swept_value")
    panel = PlotPanel("Optimized visibility versus internal loss", "l", "V_opt", y_range=(0.0, 1.05))
    panel.add("V_opt", l, result.column("optimized_visibility"))
    panel.add("V_SU before", l, result.column("visibility_su"), dashed=True)
    return FigureData(FigureName.FIG4A, SweepRow.columns(), _rows(result), [panel])


PRESETS = {
    FigureName.FIG2B: figure_visibility_vs_loss,
    FigureName.FIG3: figure_before_after,
    FigureName.FIG4A: figure_optimized_visibility,
}


def build_figure(name: FigureName, run: RunConfig, progress: bool = False) -> FigureData:
    return PRESETS[FigureName(name)](run, progress=progress)


def write_figure(figure: FigureData, out_dir: str, formats: Sequence[str]) -> List[str]:
    """
    Write a figure's artifacts as <name>.csv, <name>.json and <name>.svg

    Args:
        figure: Built figure
        out_dir: Output directory, created if missing
        formats: Any of "csv", "json", "svg"

    Returns:
        Written paths
    """
    stem = os.path.join(out_dir, figure.name.value)
    written = []
    if "csv" in formats:
        written.append(write_csv(f"{stem}.csv", figure.columns, figure.rows))
    if "json" in formats:
        written.append(atomic_write(f"{stem}.json", render_json({"figure": figure.name.value, "rows": figure.records()})))
    if "svg" in formats:
        written.append(atomic_write(f"{stem}.svg", render_svg(figure.panels, columns=figure.panel_columns)))
    return written
