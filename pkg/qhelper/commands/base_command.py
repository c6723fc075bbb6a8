"""
Base command class for the qhelper subcommands.
"""
import argparse
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from qhelper.utils.centralized_logging import get_logger
from qhelper.utils.config_manager import ConfigManager, config

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_DECISION_FAIL = 1
EXIT_INVALID_INPUT = 2
EXIT_ITERATION_CAP = 3


@dataclass
class CommandResult:
    """Standard result format for all commands."""
    command: str
    success: bool
    data: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = EXIT_OK
    text: Optional[str] = None
    error_message: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def render(self) -> Optional[str]:
        """What goes to stdout: the plain-text payload if any, else None (JSON report)."""
        return self.text


class BaseCommand(ABC):
    """Base class for all subcommands."""

    def __init__(self, name: str, settings: Optional[ConfigManager] = None):
        self.name = name
        self.settings = settings or config

    @abstractmethod
    def run(self, args: argparse.Namespace) -> CommandResult:
        """
        Execute the subcommand.

        Args:
            args: Parsed and validated command-line arguments

        Returns:
            CommandResult with the report
        """
        pass

    def tolerance(self, args: argparse.Namespace) -> float:
        tol = getattr(args, "tol", None)
        return float(tol) if tol is not None else float(self.settings.get("tolerances.ent", 1e-8))

    def echo(self, args: argparse.Namespace, **extra: Any) -> Dict[str, Any]:
        """Effective run settings embedded in every report."""
        return {
            "command": self.name,
            "seed": getattr(args, "seed", 0),
            "tol": self.tolerance(args),
            **extra,
        }

    def log_activity(self, message: str, level: str = "INFO") -> None:
        log_msg = f"{self.name}: {message}"
        if level.upper() == "ERROR":
            logger.error(log_msg)
        elif level.upper() == "WARNING":
            logger.warning(log_msg)
        elif level.upper() == "DEBUG":
            logger.debug(log_msg)
        else:
            logger.info(log_msg)

    def create_result(self, data: Dict[str, Any], exit_code: int = EXIT_OK,
                      text: Optional[str] = None, error_message: Optional[str] = None,
                      **metadata: Any) -> CommandResult:
        return CommandResult(
            command=self.name,
            success=exit_code == EXIT_OK,
            data=data,
            exit_code=exit_code,
            text=text,
            error_message=error_message,
            metadata=metadata,
        )
