"""
`rates`: helper rate pair and protocol costs for one source and helper channel.
"""
import argparse

from qhelper.commands.base_command import BaseCommand, CommandResult
from qhelper.core.rates import HelperInstance, rate_report
from qhelper.utils.input_validation import InputValidator


class RatesCommand(BaseCommand):
    def __init__(self, settings=None):
        super().__init__("rates", settings)

    def run(self, args: argparse.Namespace) -> CommandResult:
        source = InputValidator.validate_source(args.state)
        helper = InputValidator.validate_channel(args.channel, source.layout.dim_of("B"), args.seed)
        report = rate_report(HelperInstance(source, helper))
        self.log_activity(f"r1 = {report.r1:.6f}, r2 = {report.r2:.6f}")
        data = {
            **self.echo(args, state=args.state, channel=args.channel),
            "helper_dims": {"dim_in": helper.dim_in, "dim_c": helper.dim_out, "dim_e": helper.dim_env},
            **report.to_dict(),
        }
        return self.create_result(data)
