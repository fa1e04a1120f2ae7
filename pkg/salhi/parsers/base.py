"""
Base parser class for SALHI run configurations
Defines the interface for all config file parsers
"""

from abc import ABC, abstractmethod
from typing import List

from salhi.parsers.run_config import RunConfig


class BaseConfigParser(ABC):
    """
    Abstract base class for run-configuration parsers
    All specific file format parsers should inherit from this class
    """

    @abstractmethod
    def parse(self, content: str) -> RunConfig:
        """
        Parse config file content into a validated RunConfig

        Args:
            content: Raw file content as string

        Returns:
            RunConfig

        Raises:
            ConfigFileError: Malformed content or unknown keys
            ConfigValidationError: Well-formed content violating an invariant
        """
        pass

    @classmethod
    @abstractmethod
    def get_supported_extensions(cls) -> List[str]:
        """
        Get list of file extensions supported by this parser

        Returns:
            List of supported file extensions (without dot)
        """
        pass
