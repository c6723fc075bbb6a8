"""
Evaluation and composition of resource inequalities.

Rewrite rules: addition of statements, composition where one statement's
output feeds the next one's input, cancellation of identical
(coefficient, resource) pairs across sides, and numeric folding of whatever
remains at evaluation time.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from qhelper.core.errors import ChainError, LayoutError, RIEvaluationError
from qhelper.core.qcore import TAU_ENT, State, entropy_report
from qhelper.ricalc.ast import (
    Const, Entropic, Expr, Infinity, Neg, Resource, ResourceKind,
    RIStatement, Symbol, Term, times,
)
from qhelper.ricalc.parser import expr_to_text, to_text
from qhelper.utils.centralized_logging import get_logger

logger = get_logger(__name__)


def evaluate_expr(node: Expr, state: State, bindings: Optional[Mapping[str, str]] = None) -> float:
    """Numeric value of a coefficient; RI labels are renamed through `bindings`."""
    bindings = bindings or {}
    if isinstance(node, Const):
        return float(node.value)
    if isinstance(node, (Infinity, Symbol)):
        raise RIEvaluationError(f"Symbolic coefficient {expr_to_text(node)} cannot be evaluated")
    if isinstance(node, Entropic):
        systems = [tuple(bindings.get(l, l) for l in group) for group in node.systems]
        try:
            return entropy_report(state, node.quantity, *systems).value
        except LayoutError as e:
            raise RIEvaluationError(f"Cannot resolve {expr_to_text(node)} against {state.labels}: {e}")
    if isinstance(node, Neg):
        return -evaluate_expr(node.operand, state, bindings)
    left = evaluate_expr(node.left, state, bindings)
    right = evaluate_expr(node.right, state, bindings)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    return left * right


@dataclass
class RIEvaluation:
    """Summed coefficient per resource key on each side."""
    lhs: Dict[str, float]
    rhs: Dict[str, float]
    resources: Dict[str, Resource] = field(default_factory=dict)

    def net(self) -> Dict[str, float]:
        keys = sorted(set(self.lhs) | set(self.rhs))
        return {k: self.lhs.get(k, 0.0) - self.rhs.get(k, 0.0) for k in keys}

    def to_dict(self) -> Dict:
        return {"lhs": dict(sorted(self.lhs.items())), "rhs": dict(sorted(self.rhs.items())), "net": self.net()}


def evaluate(ri: RIStatement, state: State, bindings: Optional[Mapping[str, str]] = None) -> RIEvaluation:
    def side(terms: Tuple[Term, ...]) -> Dict[str, float]:
        sums: Dict[str, float] = {}
        for term in terms:
            key = term.resource.key
            sums[key] = sums.get(key, 0.0) + evaluate_expr(term.coeff, state, bindings)
        return sums

    return RIEvaluation(side(ri.lhs), side(ri.rhs), {r.key: r for r in ri.resources()})


def scale(ri: RIStatement, coeff: Expr) -> RIStatement:
    """Run the protocol at rate `coeff`: every coefficient is multiplied by it."""
    if isinstance(coeff, Const) and coeff.value < 0:
        raise RIEvaluationError(f"Rates must be nonnegative, got {coeff.value}")
    if isinstance(coeff, Neg):
        raise RIEvaluationError("Rates must be nonnegative")
    return RIStatement(
        tuple(Term(times(coeff, t.coeff), t.resource) for t in ri.lhs),
        tuple(Term(times(coeff, t.coeff), t.resource) for t in ri.rhs),
    )


def _cancel_pairs(left: List[Term], right: List[Term], keys: Optional[set] = None) -> Tuple[List[Term], List[Term]]:
    """Remove pairs of syntactically identical terms, one from each list."""
    left, right = list(left), list(right)
    for term in list(left):
        if keys is not None and term.resource.key not in keys:
            continue
        if term in right:
            right.remove(term)
            left.remove(term)
    return left, right


def chain(ri1: RIStatement, ri2: RIStatement) -> RIStatement:
    """
    Compose ri1 then ri2: resources produced by ri1 and consumed by ri2 are
    matched. Matched terms with equal coefficients cancel; the rest are carried
    and net out numerically at evaluation.
    """
    produced = {t.resource.key for t in ri1.rhs}
    consumed = {t.resource.key for t in ri2.lhs}
    shared = produced & consumed
    if not shared:
        raise ChainError(
            f"No resource produced by '{to_text(ri1)}' is consumed by '{to_text(ri2)}'")
    rhs1, lhs2 = _cancel_pairs(list(ri1.rhs), list(ri2.lhs), shared)
    logger.debug(f"Chained on {sorted(shared)}")
    return RIStatement(tuple(ri1.lhs) + tuple(lhs2), tuple(rhs1) + tuple(ri2.rhs))


def cancel(ri: RIStatement) -> RIStatement:
    """Drop identical (coefficient, resource) pairs appearing on both sides."""
    lhs, rhs = _cancel_pairs(list(ri.lhs), list(ri.rhs))
    return RIStatement(tuple(lhs), tuple(rhs))


def derive(steps: Sequence[RIStatement]) -> RIStatement:
    if not steps:
        raise ChainError("Derivation has no steps")
    return reduce(chain, steps)


@dataclass
class SampleResidual:
    index: int
    residuals: Dict[str, float]
    max_residual: float
    worst_resource: Optional[str]

    def to_dict(self) -> Dict:
        return {"index": self.index, "max_residual": self.max_residual,
                "worst_resource": self.worst_resource, "residuals": self.residuals}


@dataclass
class CertificateReport:
    target: str
    derived: str
    samples: List[SampleResidual]
    tolerance: float
    free_classical: bool
    excluded: List[str]

    @property
    def max_residual(self) -> float:
        return max((s.max_residual for s in self.samples), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_dict(self) -> Dict:
        return {
            "target": self.target,
            "derived": self.derived,
            "verdict": "PASS" if self.passed else "FAIL",
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "free_classical": self.free_classical,
            "excluded": self.excluded,
            "samples": [s.to_dict() for s in self.samples],
        }


def _sample_residual(index: int, target: RIStatement, derived: RIStatement, state: State,
                     bindings: Optional[Mapping[str, str]], excluded: set) -> SampleResidual:
    want = evaluate(target, state, bindings).net()
    got = evaluate(derived, state, bindings).net()
    residuals = {
        key: abs(got.get(key, 0.0) - want.get(key, 0.0))
        for key in sorted(set(want) | set(got)) if key not in excluded
    }
    worst = max(residuals, key=residuals.get) if residuals else None
    return SampleResidual(index, residuals, residuals[worst] if worst else 0.0, worst)


def certify(target: RIStatement, derivation: Sequence[RIStatement], states: Sequence[State],
            bindings: Optional[Mapping[str, str]] = None, free_classical: bool = True,
            tol: float = TAU_ENT, workers: int = 1) -> CertificateReport:
    """
    Check that the chained derivation has the same net resource balance as the
    target on every sample state. Classical channel uses are reported but left
    out of the verdict when `free_classical` is set.
    """
    derived = derive(derivation)
    keys = {r.key: r for r in target.resources() + derived.resources()}
    excluded = {k for k, r in keys.items() if free_classical and r.kind is ResourceKind.CBIT}
    jobs = list(enumerate(states))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            samples = list(executor.map(
                lambda job: _sample_residual(job[0], target, derived, job[1], bindings, excluded), jobs))
    else:
        samples = [_sample_residual(i, target, derived, s, bindings, excluded) for i, s in jobs]
    report = CertificateReport(to_text(target), to_text(derived), samples, tol, free_classical, sorted(excluded))
    logger.info(f"Certificate {'PASS' if report.passed else 'FAIL'}: max residual {report.max_residual:.3e}")
    return report
