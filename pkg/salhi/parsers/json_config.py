"""
JSON parser for run configurations
Unknown keys are an error at every level.
"""

import json
import logging
from typing import Any, Dict, List, Optional

from salhi import config
from salhi.core.analytic import DetectionScheme
from salhi.core.errors import ConfigFileError
from salhi.core.model import SeedKind, SeedSpec
from salhi.core.validation import build_config
from salhi.parsers.base import BaseConfigParser
from salhi.parsers.run_config import (
    OUTPUT_FORMATS,
    FigurePanel,
    FigureSettings,
    RunConfig,
    SweepBlock,
    default_probe,
)
from salhi.services.optimizer import Objective, SweptVariable

logger = logging.getLogger(__name__)

# Allowed keys per object; a nested dict describes a sub-object, "panels" a list of objects
SCHEMA: Dict[str, Any] = {
    "interferometer": {
        "G1": None,
        "G2": None,
        "l": None,
        "eta": None,
        "seed": {"kind": None, "mean_photon_number": None, "alpha_phase": None},
        "probe": {"phi": None, "delta": None, "dark_offset": None},
    },
    "bounds": None,
    "sweep": {"swept": None, "min": None, "max": None, "points": None, "scheme": None, "objective": None},
    "figure": {"l_min": None, "l_max": None, "points": None, "panels": {"G1": None, "eta": None}},
    "output": {"dir": None, "formats": None},
    "random_seed": None,
}


class JsonConfigParser(BaseConfigParser):
    """Parser for JSON run configurations"""

    def parse(self, content: str) -> RunConfig:
        self._lines = content.splitlines()
        try:
            document = json.loads(content)
        except json.JSONDecodeError as e:
            raise ConfigFileError(f"invalid JSON: {e.msg} (column {e.colno})", line=e.lineno)
        if not isinstance(document, dict):
            raise ConfigFileError("top level must be an object", line=1)
        self._check_keys(document, SCHEMA, "")
        return self._build(document)

    @classmethod
    def get_supported_extensions(cls) -> List[str]:
        return ["json"]

    def _line_of(self, key: str, start: int = 1) -> Optional[int]:
        needle = f'"{key}"'
        for i in range(start - 1, len(self._lines)):
            if needle in self._lines[i]:
                return i + 1
        return None

    def _locate(self, path: str) -> Optional[int]:
        # walk the dotted path, each key searched from its parent's line on
        line = None
        for part in path.split("."):
            if part.isdigit():
                continue
            found = self._line_of(part, line or 1)
            if found is None:
                return line
            line = found
        return line

    def _fail(self, path: str, message: str) -> ConfigFileError:
        return ConfigFileError(message, field=path, line=self._locate(path))

    def _check_keys(self, obj: Dict[str, Any], schema: Dict[str, Any], prefix: str) -> None:
        for key, value in obj.items():
            path = f"{prefix}{key}"
            if key not in schema:
                raise self._fail(path, f"unknown key (allowed: {', '.join(sorted(schema))})")
            sub = schema[key]
            if sub is None:
                continue
            if key == "panels":
                if not isinstance(value, list):
                    raise self._fail(path, "expected a list of objects")
                for i, item in enumerate(value):
                    if not isinstance(item, dict):
                        raise self._fail(f"{path}.{i}", "expected an object")
                    self._check_keys(item, sub, f"{path}.{i}.")
            elif not isinstance(value, dict):
                raise self._fail(path, "expected an object")
            else:
                self._check_keys(value, sub, f"{path}.")

    def _number(self, obj: Dict[str, Any], key: str, path: str, default: Any = None) -> Any:
        if key not in obj:
            if default is None:
                raise self._fail(f"{path}{key}", "missing required field")
            return default
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self._fail(f"{path}{key}", f"expected a number (got {value!r})")
        return float(value)

    def _integer(self, obj: Dict[str, Any], key: str, path: str, default: int) -> int:
        value = obj.get(key, default)
        if isinstance(value, bool) or not isinstance(value, int):
            raise self._fail(f"{path}{key}", f"expected an integer (got {value!r})")
        return value

    def _choice(self, obj: Dict[str, Any], key: str, path: str, enum: Any, default: Any) -> Any:
        if key not in obj:
            return default
        try:
            return enum(obj[key])
        except ValueError:
            valid = ", ".join(e.value for e in enum)
            raise self._fail(f"{path}{key}", f"expected one of {valid} (got {obj[key]!r})")

    def _build(self, document: Dict[str, Any]) -> RunConfig:
        defaults = RunConfig()
        base = defaults.interferometer

        block = document.get("interferometer", {})
        seed_block = block.get("seed", {})
        probe_block = block.get("probe", {})
        seed = SeedSpec(
            kind=self._choice(seed_block, "kind", "interferometer.seed.", SeedKind, SeedKind.OPTICAL),
            mean_photon_number=self._number(seed_block, "mean_photon_number", "interferometer.seed.", config.SEED_PHOTONS),
            alpha_phase=self._number(seed_block, "alpha_phase", "interferometer.seed.", 0.0),
        )
        phi = probe_block.get("phi")
        if phi is not None:
            phi = self._number(probe_block, "phi", "interferometer.probe.")
        probe = default_probe(
            phi,
            self._number(probe_block, "delta", "interferometer.probe.", config.DELTA),
            self._number(probe_block, "dark_offset", "interferometer.probe.", config.DARK_OFFSET),
        )
        interferometer = build_config(
            G1=self._number(block, "G1", "interferometer.", base.stage1.G),
            G2=self._number(block, "G2", "interferometer.", base.stage2.G),
            l=self._number(block, "l", "interferometer.", base.losses.l),
            eta=self._number(block, "eta", "interferometer.", base.losses.eta),
            seed=seed,
            probe=probe,
        )

        bounds = defaults.bounds
        if "bounds" in document:
            raw = document["bounds"]
            if (
                not isinstance(raw, list)
                or len(raw) != 2
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in raw)
            ):
                raise self._fail("bounds", "expected [G2_min, G2_max]")
            bounds = (float(raw[0]), float(raw[1]))
            if not 1.0 <= bounds[0] < bounds[1]:
                raise self._fail("bounds", f"expected 1 <= G2_min < G2_max (got {raw})")

        sweep = None
        if "sweep" in document:
            raw = document["sweep"]
            fallback = SweepBlock()
            sweep = SweepBlock(
                swept=self._choice(raw, "swept", "sweep.", SweptVariable, fallback.swept),
                min=self._number(raw, "min", "sweep.", fallback.min),
                max=self._number(raw, "max", "sweep.", fallback.max),
                points=self._integer(raw, "points", "sweep.", fallback.points),
                scheme=self._choice(raw, "scheme", "sweep.", DetectionScheme, fallback.scheme),
                objective=self._choice(raw, "objective", "sweep.", Objective, fallback.objective),
            )

        figure = defaults.figure
        if "figure" in document:
            raw = document["figure"]
            panels = figure.panels
            if "panels" in raw:
                panels = tuple(
                    FigurePanel(
                        G1=self._number(p, "G1", f"figure.panels.{i}."),
                        eta=self._number(p, "eta", f"figure.panels.{i}."),
                    )
                    for i, p in enumerate(raw["panels"])
                )
            figure = FigureSettings(
                l_min=self._number(raw, "l_min", "figure.", figure.l_min),
                l_max=self._number(raw, "l_max", "figure.", figure.l_max),
                points=self._integer(raw, "points", "figure.", figure.points),
                panels=panels,
            )

        output_dir, formats = defaults.output_dir, defaults.formats
        if "output" in document:
            raw = document["output"]
            output_dir = raw.get("dir", output_dir)
            if not isinstance(output_dir, str):
                raise self._fail("output.dir", "expected a string")
            if "formats" in raw:
                formats = raw["formats"]
                if not isinstance(formats, list) or any(f not in OUTPUT_FORMATS for f in formats):
                    raise self._fail("output.formats", f"expected a list drawn from {', '.join(OUTPUT_FORMATS)}")
                formats = tuple(formats)

        random_seed = self._integer(document, "random_seed", "", defaults.random_seed)
        logger.debug(f"Parsed run config for {interferometer}")
        return RunConfig(
            interferometer=interferometer,
            bounds=bounds,
            sweep=sweep,
            figure=figure,
            output_dir=output_dir,
            formats=formats,
            random_seed=random_seed,
        )
