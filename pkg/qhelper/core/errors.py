"""
Exception hierarchy shared by every qhelper module.
"""
from typing import Optional


class QHelperError(Exception):
    """Base class for all qhelper failures."""
    pass


class ConfigurationError(QHelperError):
    """Invalid or unreadable configuration."""
    pass


class LayoutError(QHelperError):
    """Unknown, duplicated, colliding or overlapping subsystem labels."""
    pass


class StateValidationError(QHelperError):
    """Matrix or vector is not a valid quantum state within tolerance."""
    pass


class ChannelError(QHelperError):
    """Kraus family or isometry is invalid, or its dimensions do not fit the state."""
    pass


class DimensionOverflowError(QHelperError):
    """Requested dense computation exceeds the configured dimension cap."""
    pass


class RIParseError(QHelperError):
    """Syntax error in a resource inequality, positioned by byte offset."""

    def __init__(self, message: str, offset: int, line: Optional[int] = None):
        self.message = message
        self.offset = offset
        self.line = line
        where = f"line {line}, offset {offset}" if line is not None else f"offset {offset}"
        super().__init__(f"{message} at {where}")


class RIEvaluationError(QHelperError):
    """Coefficient cannot be evaluated against the bound state."""
    pass


class ChainError(QHelperError):
    """Two resource inequalities share no resource to compose on."""
    pass


class OutputLockError(QHelperError):
    """Output file stayed locked by another writer past the timeout."""
    pass
