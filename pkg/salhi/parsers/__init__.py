"""
Run-configuration parsers, looked up by file extension
"""

import logging
import os
from typing import Dict, Optional, Type

from salhi.core.errors import ConfigFileError
from salhi.parsers.base import BaseConfigParser
from salhi.parsers.json_config import JsonConfigParser
from salhi.parsers.run_config import RunConfig

logger = logging.getLogger(__name__)

_PARSERS: Dict[str, Type[BaseConfigParser]] = {}


def _register_parsers() -> None:
    """Register all available parsers"""
    for ext in JsonConfigParser.get_supported_extensions():
        _PARSERS[ext] = JsonConfigParser


_register_parsers()


def get_parser_for_file(file_path: str) -> Optional[BaseConfigParser]:
    """
    Get appropriate parser for a file based on its extension

    Args:
        file_path: Path to the file

    Returns:
        Parser instance or None if no parser is available
    """
    ext = os.path.splitext(file_path)[1].lower().lstrip(".")
    parser_class = _PARSERS.get(ext)
    if parser_class is None:
        return None
    return parser_class()


def load_run_config(file_path: Optional[str]) -> RunConfig:
    """
    Read and parse a run configuration; defaults when no path is given

    Raises:
        ConfigFileError: Unreadable file, unsupported extension or malformed content
        ConfigValidationError: Values violating an invariant
    """
    if file_path is None:
        return RunConfig()
    parser = get_parser_for_file(file_path)
    if parser is None:
        raise ConfigFileError(f"no parser for '{file_path}' (supported: {', '.join(sorted(_PARSERS))})")
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            content = f.read()
    except OSError as e:
        raise ConfigFileError(f"cannot read '{file_path}': {e.strerror}")
    logger.info(f"Loading run config from {file_path}")
    return parser.parse(content)


__all__ = ["BaseConfigParser", "JsonConfigParser", "RunConfig", "get_parser_for_file", "load_run_config"]
