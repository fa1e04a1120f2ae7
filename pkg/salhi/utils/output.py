"""
File output helpers
Every writer goes through atomic_write: content lands in a temporary file in the
target directory and is renamed into place.
"""

import csv
import io
import json
import logging
import math
import os
import tempfile
from typing import Any, Iterable, List, Sequence

from salhi import config

logger = logging.getLogger(__name__)


def atomic_write(path: str, content: str) -> str:
    """
    Write text to path via a temporary sibling file and os.replace

    Args:
        path: Destination file
        content: Text to write

    Returns:
        The destination path
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(content)
        os.replace(tmp_path, path)
    except Exception:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.info(f"Wrote {path}")
    return path


def format_cell(value: Any, digits: int = config.CSV_DIGITS) -> str:
    """Locale-independent CSV cell: booleans as 0/1, floats with `digits` significant digits"""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, f".{digits}g")
    if value is None:
        return ""
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]], digits: int = config.CSV_DIGITS) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(value, digits) for value in row])
    return buffer.getvalue()


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence[Any]], digits: int = config.CSV_DIGITS) -> str:
    return atomic_write(path, render_csv(columns, rows, digits))


def read_csv(path: str) -> List[dict]:
    """Read a CSV written by write_csv back as a list of string dicts"""
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def render_json(payload: Any) -> str:
    return json.dumps(_json_safe(payload), indent=2, sort_keys=True) + "\n"


def write_json(path: str, payload: Any) -> str:
    return atomic_write(path, render_json(payload))
