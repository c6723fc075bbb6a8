"""
`ri`: parse, evaluate and certify resource inequalities.
"""
import argparse
from typing import Any, Dict, List

from qhelper.commands.base_command import EXIT_DECISION_FAIL, BaseCommand, CommandResult
from qhelper.core.errors import RIEvaluationError
from qhelper.core.qcore import State, SystemLayout, random_pure
from qhelper.core.serialization import CertificateModel, load_json
from qhelper.ricalc.calculus import certify, evaluate, scale
from qhelper.ricalc.library import CERTIFICATES, resolve
from qhelper.ricalc.parser import parse_expr, parse_file, to_text
from qhelper.utils.input_validation import InputValidator, ValidationError


def load_certificate(source: str) -> CertificateModel:
    """`builtin:NAME` or a certificate JSON file."""
    if source.startswith("builtin:"):
        name = source[len("builtin:"):]
        if name not in CERTIFICATES:
            raise ValidationError(f"Unknown built-in certificate {name!r}; known: {', '.join(sorted(CERTIFICATES))}")
        return CertificateModel.model_validate(CERTIFICATES[name])
    try:
        payload = load_json(source)
    except (OSError, ValueError) as e:
        raise ValidationError(f"Cannot read certificate {source!r}: {e}")
    return CertificateModel.model_validate(payload)


def sample_states(cert: CertificateModel) -> List[State]:
    samples = cert.samples
    if samples.kind == "states":
        return [s.to_state() for s in samples.states]
    layout = SystemLayout(tuple(samples.labels), tuple(samples.dims))
    return [random_pure(layout, [samples.seed, i]) for i in range(samples.count)]


class RICommand(BaseCommand):
    def __init__(self, settings=None):
        super().__init__("ri", settings)

    def run(self, args: argparse.Namespace) -> CommandResult:
        if not args.file and not args.certify:
            raise ValidationError("ri needs an RI file, --certify, or both")
        bindings = InputValidator.validate_bindings(getattr(args, "map", None))
        bound = InputValidator.validate_state(args.bind) if args.bind else None
        data: Dict[str, Any] = self.echo(args, file=args.file, certify=args.certify, bind=args.bind)

        if args.file:
            statements = parse_file(args.file)
            entries = []
            for ri in statements:
                entry: Dict[str, Any] = {"statement": to_text(ri)}
                if bound is not None:
                    try:
                        entry["evaluation"] = evaluate(ri, bound, bindings).to_dict()
                    except RIEvaluationError as e:
                        entry["error"] = str(e)
                entries.append(entry)
            data["statements"] = entries
            self.log_activity(f"parsed {len(statements)} statement(s) from {args.file}")

        if args.certify:
            cert = load_certificate(args.certify)
            target = resolve(cert.target)
            steps = []
            for step in cert.steps:
                ri = resolve(step.ri)
                steps.append(scale(ri, parse_expr(step.scale)) if step.scale else ri)
            free_classical = (cert.free_classical if cert.free_classical is not None
                              else bool(self.settings.get("ri.free_classical", True)))
            if getattr(args, "count_classical", False):
                free_classical = False
            states = [bound] if bound is not None else sample_states(cert)
            report = certify(target, steps, states, {**cert.bindings, **bindings},
                             free_classical=free_classical, tol=self.tolerance(args),
                             workers=int(self.settings.get("processing.max_workers", 1)))
            data["certificate"] = {"name": cert.name, **report.to_dict()}
            if not report.passed:
                return self.create_result(
                    data, exit_code=EXIT_DECISION_FAIL,
                    error_message=f"certificate {cert.name} FAIL, max residual {report.max_residual:.3g}")
        return self.create_result(data)
