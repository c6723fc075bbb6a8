"""
`frontier`: trace the Pareto frontier of the helper rate region.
"""
import argparse
import os
from typing import Optional

from qhelper.commands.base_command import EXIT_ITERATION_CAP, BaseCommand, CommandResult
from qhelper.core.region import (
    EPS_OPT, FrontierConfig, dominance_violations, preset_sweep, trace_frontier,
)
from qhelper.utils.atomic_io import write_csv_atomic, write_text_atomic
from qhelper.utils.input_validation import InputValidator


def default_hull_path(out: Optional[str]) -> Optional[str]:
    if not out:
        return None
    stem, _ = os.path.splitext(out)
    return f"{stem}_hull.dat"


class FrontierCommand(BaseCommand):
    def __init__(self, settings=None):
        super().__init__("frontier", settings)

    def build_config(self, args: argparse.Namespace) -> FrontierConfig:
        s = self.settings
        lambdas = (InputValidator.validate_lambdas(args.lambdas) if getattr(args, "lambdas", None)
                   else tuple(s.get("frontier.lambda_grid")))
        restarts = args.restarts if getattr(args, "restarts", None) is not None else s.get("frontier.restarts")
        return FrontierConfig(
            dim_c=InputValidator.validate_positive_int(args.dim_c, "--dim-c"),
            dim_e=InputValidator.validate_positive_int(args.dim_e, "--dim-e") if args.dim_e is not None else None,
            lambda_grid=lambdas,
            restarts=InputValidator.validate_positive_int(restarts, "--restarts"),
            seed=int(args.seed),
            max_iters=int(s.get("frontier.max_iters")),
            step_tol=float(s.get("frontier.step_tol")),
            obj_tol=float(s.get("frontier.obj_tol")),
            initial_step=float(s.get("frontier.initial_step")),
            workers=int(s.get("processing.max_workers", 1)),
        )

    def run(self, args: argparse.Namespace) -> CommandResult:
        source = InputValidator.validate_source(args.state)
        cfg = self.build_config(args)
        result = trace_frontier(source, cfg)

        data = {
            **self.echo(args, state=args.state, config=cfg.to_dict()),
            "all_converged": result.all_converged,
            **result.to_dict(),
        }
        if getattr(args, "oracle", False):
            eps = float(self.settings.get("tolerances.eps_opt", EPS_OPT))
            oracle = preset_sweep(source, cfg.dim_c)
            violations = dominance_violations(result, oracle, eps)
            if violations:
                self.log_activity(f"{len(violations)} preset point(s) beat the optimizer", "WARNING")
            data["oracle"] = {name: {"r1": p.r1, "r2": p.r2} for name, p in sorted(oracle.items())}
            data["dominance_violations"] = violations

        text = None
        if args.format == "csv":
            frame = result.to_frame()
            if args.out:
                write_csv_atomic(frame, args.out)
            else:
                text = frame.to_csv(index=False, lineterminator="\n")

        hull_path = getattr(args, "hull_out", None) or default_hull_path(args.out)
        if hull_path:
            write_text_atomic("\n".join(result.hull_lines()) + "\n", hull_path)

        if result.all_converged:
            return self.create_result(data, text=text)
        capped = [o.lam for o in result.outcomes if not o.converged]
        return self.create_result(data, exit_code=EXIT_ITERATION_CAP, text=text,
                                  error_message=f"iteration cap reached at lambda {capped}; results emitted")
