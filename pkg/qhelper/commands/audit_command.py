"""
`audit`: numeric check of the converse's entropy steps on n copies.
"""
import argparse

from qhelper.commands.base_command import EXIT_DECISION_FAIL, BaseCommand, CommandResult
from qhelper.core.channels import default_env_dim, random_isometry
from qhelper.core.rates import HelperInstance, converse_audit
from qhelper.utils.input_validation import InputValidator, ValidationError


class AuditCommand(BaseCommand):
    def __init__(self, settings=None):
        super().__init__("audit", settings)

    def run(self, args: argparse.Namespace) -> CommandResult:
        if args.n not in (1, 2):
            raise ValidationError(f"--n must be 1 or 2, got {args.n}")
        source = InputValidator.validate_source(args.state)
        dim_b = source.layout.dim_of("B")
        if args.channel:
            helper = InputValidator.validate_channel(args.channel, dim_b, args.seed)
            origin = args.channel
        else:
            dim_c = InputValidator.validate_positive_int(args.dim_c, "--dim-c")
            dim_e = (InputValidator.validate_positive_int(args.dim_e, "--dim-e")
                     if args.dim_e is not None else default_env_dim(dim_b, dim_c))
            helper = random_isometry(dim_b, dim_c, dim_e, args.seed)
            origin = f"random:{dim_c},{dim_e}"

        tol = self.tolerance(args)
        max_dim = int(self.settings.get("audit.max_dim", 4096))
        residuals = converse_audit(HelperInstance(source, helper), args.n, tol=tol, max_dim=max_dim)
        passed = all(r.passed for r in residuals)
        data = {
            **self.echo(args, state=args.state, channel=origin, n=args.n, max_dim=max_dim),
            "passed": passed,
            "checks": [r.to_dict() for r in residuals],
        }
        if passed:
            return self.create_result(data)
        failed = [r.name for r in residuals if not r.passed]
        return self.create_result(data, exit_code=EXIT_DECISION_FAIL,
                                  error_message=f"audit FAIL: {', '.join(failed)}")
