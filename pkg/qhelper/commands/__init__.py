"""
Subcommand registry.
"""
from qhelper.commands.audit_command import AuditCommand
from qhelper.commands.base_command import BaseCommand, CommandResult
from qhelper.commands.entropy_command import EntropyCommand
from qhelper.commands.frontier_command import FrontierCommand
from qhelper.commands.presets_command import PresetsCommand
from qhelper.commands.rates_command import RatesCommand
from qhelper.commands.ri_command import RICommand

COMMANDS = {
    "entropy": EntropyCommand,
    "rates": RatesCommand,
    "frontier": FrontierCommand,
    "audit": AuditCommand,
    "ri": RICommand,
    "presets": PresetsCommand,
}

__all__ = ["COMMANDS", "BaseCommand", "CommandResult"]
