"""
`presets`: list the built-in states, channels, RIs and certificates.
"""
import argparse

from qhelper.commands.base_command import BaseCommand, CommandResult
from qhelper.core.channels import PRESET_NAMES
from qhelper.ricalc.library import CERTIFICATES, LIBRARY
from qhelper.utils.input_validation import STATE_PRESETS


class PresetsCommand(BaseCommand):
    def __init__(self, settings=None):
        super().__init__("presets", settings)

    def run(self, args: argparse.Namespace) -> CommandResult:
        data = {
            "command": self.name,
            "states": list(STATE_PRESETS),
            "isotropic_convention": "p*Phi + (1-p)*I/4",
            "channels": list(PRESET_NAMES),
            "resource_inequalities": dict(sorted(LIBRARY.items())),
            "certificates": sorted(CERTIFICATES),
        }
        return self.create_result(data)
