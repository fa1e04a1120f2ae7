"""
Exception hierarchy for SALHI
"""

from typing import List, Optional


class SalhiError(Exception):
    """Base class for all errors raised by the package"""


class DomainError(SalhiError, ValueError):
    """A scalar argument lies outside its mathematical domain"""


class ConfigValidationError(SalhiError, ValueError):
    """
    One or more configuration invariants are violated

    Attributes:
        errors: Message for every violated invariant, in check order
    """

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class ConfigFileError(SalhiError):
    """
    A run configuration file could not be parsed

    Attributes:
        field: Dotted path of the offending field, if known
        line: 1-based line number in the file, if known
    """

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class CutoffError(SalhiError):
    """
    The truncated Fock basis is too small for the requested state

    Attributes:
        tail_norm: Probability weight found at the top of the basis
        required_cutoff: Estimated cutoff that would hold the state
    """

    def __init__(self, tail_norm: float, cutoff: int, required_cutoff: int):
        self.tail_norm = tail_norm
        self.cutoff = cutoff
        self.required_cutoff = required_cutoff
        super().__init__(
            f"cutoff insufficient: tail norm {tail_norm:.3e} at n_max={cutoff}, "
            f"use n_max >= {required_cutoff}"
        )
