"""
Rate functionals for source compression with a quantum helper.

The global pure state φ on A, C, E, R is obtained by purifying ρ_AB with a
reference R and letting the helper's isometry act on B:
    |φ_ACER⟩ = (I_RA ⊗ U_{B→CE}) |ψ_ABR⟩.
Alice's rate R1 = H(A|C)_φ (net ebits per copy, may be negative); the helper's
rate R2 = ½ I(RA;C)_φ (qubits per copy).
"""
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from qhelper.core.channels import (
    ChannelParams, StinespringIsometry, apply_isometry,
)
from qhelper.core.errors import ChannelError, DimensionOverflowError, LayoutError, StateValidationError
from qhelper.core.qcore import (
    TAU_ENT, TAU_NUM, DensityOperator, Labels, PureState, State,
    cond_entropy, cond_mutual_info, entropy, merge_labels, mutual_info,
    partial_trace, purify, tensor_power, trace_distance,
)
from qhelper.utils.centralized_logging import get_logger

logger = get_logger(__name__)

PHI_LABELS = ("A", "C", "E", "R")


@dataclass(frozen=True, eq=False)
class HelperInstance:
    """Source ρ_AB and the helper's isometry B → C⊗E."""
    rho_AB: DensityOperator
    helper: StinespringIsometry

    def __post_init__(self):
        if set(self.rho_AB.labels) != {"A", "B"}:
            raise LayoutError(f"Source must be labeled A, B; got {self.rho_AB.labels}")
        dim_b = self.rho_AB.layout.dim_of("B")
        if dim_b != self.helper.dim_in:
            raise ChannelError(f"Helper expects input dimension {self.helper.dim_in}, B has {dim_b}")


@dataclass(frozen=True, eq=False)
class GlobalPureState:
    phi: PureState

    def __post_init__(self):
        if set(self.phi.labels) != set(PHI_LABELS):
            raise LayoutError(f"φ must carry labels {PHI_LABELS}; got {self.phi.labels}")


@dataclass(frozen=True, eq=False)
class RatePoint:
    r1: float
    r2: float
    params: Optional[ChannelParams] = None

    def __post_init__(self):
        if self.r2 < -TAU_ENT:
            raise StateValidationError(f"Helper rate r2 = {self.r2} is negative")

    def as_tuple(self):
        return self.r1, self.r2

    def to_dict(self) -> Dict:
        out = {"r1": self.r1, "r2": self.r2}
        if self.params is not None:
            out["params"] = {
                "dim_in": self.params.dim_in,
                "dim_out": self.params.dim_out,
                "dim_env": self.params.dim_env,
                "theta": [float(t) for t in self.params.theta],
            }
        return out


@dataclass(frozen=True)
class MergingRates:
    ebit_cost: float
    cbit_cost: float


@dataclass(frozen=True)
class FQSWRates:
    qubit_cost: float
    ebit_gain: float


@dataclass(frozen=True)
class QRSTRates:
    qubit_cost: float
    ebit_cost: float


@dataclass(frozen=True)
class DirectPartCosts:
    helper_qubits: float
    helper_ebits: float
    alice_ebits: float


@dataclass(frozen=True)
class FQSWVariantCosts:
    """Alice runs FQSW instead of state merging once the decoder holds C."""
    helper_qubits: float
    helper_ebits: float
    alice_qubits: float
    alice_ebit_gain: float

    @property
    def alice_net_ebits(self) -> float:
        return self.alice_qubits - self.alice_ebit_gain


# ---------------------------------------------------------------------------
# Helper rate functionals
# ---------------------------------------------------------------------------

def build_phi(inst: HelperInstance) -> GlobalPureState:
    psi = purify(inst.rho_AB, "R")
    phi = apply_isometry(psi, inst.helper, "B", ("C", "E"))
    # the marginal on A is untouched by the helper
    drift = trace_distance(partial_trace(phi, "A"), partial_trace(inst.rho_AB, "A"))
    if drift > TAU_NUM:
        raise StateValidationError(f"Marginal on A drifted by {drift:.3g}")
    return GlobalPureState(phi)


def helper_rates(phi: GlobalPureState, params: Optional[ChannelParams] = None) -> RatePoint:
    """(H(A|C)_φ, ½ I(RA;C)_φ)."""
    state = phi.phi
    r1 = cond_entropy(state, "A", "C")
    r2 = 0.5 * mutual_info(state, ("R", "A"), "C")
    if -TAU_ENT < r2 < 0.0:
        r2 = 0.0
    return RatePoint(r1, r2, params)


def naive_rate(phi: GlobalPureState) -> float:
    """Schumacher-compressing C outright costs H(C)_φ qubits."""
    return schumacher_rate(phi.phi, "C")


def decomposition_check(phi: GlobalPureState) -> float:
    """|H(C) − ½ I(C;E) − ½ I(C;RA)|, zero for every pure φ."""
    state = phi.phi
    h_c = entropy(state, "C")
    return abs(h_c - 0.5 * mutual_info(state, "C", "E") - 0.5 * mutual_info(state, "C", ("R", "A")))


def schumacher_rate(state: State, systems: Labels) -> float:
    return entropy(state, systems)


# ---------------------------------------------------------------------------
# Protocol rates
# ---------------------------------------------------------------------------

def merging_rates(psi: State, a: Labels = "A", b: Labels = "B", r: Labels = "R") -> MergingRates:
    """State merging: H(A|B) ebits and I(A;R) cbits."""
    return MergingRates(ebit_cost=cond_entropy(psi, a, b), cbit_cost=mutual_info(psi, a, r))


def fqsw_rates(psi: State, a: Labels = "A", b: Labels = "B", r: Labels = "R") -> FQSWRates:
    """Fully quantum Slepian-Wolf: ½ I(A;R) qubits in, ½ I(A;B) ebits out."""
    return FQSWRates(qubit_cost=0.5 * mutual_info(psi, a, r), ebit_gain=0.5 * mutual_info(psi, a, b))


def qrst_rates(psi: State, r: Labels = "R", b: Labels = "B", e: Labels = "E") -> QRSTRates:
    """Channel simulation: ½ I(R;B) qubits plus ½ I(E;B) ebits."""
    return QRSTRates(qubit_cost=0.5 * mutual_info(psi, r, b), ebit_cost=0.5 * mutual_info(psi, e, b))


def helper_qrst_rates(phi: GlobalPureState) -> QRSTRates:
    """QRST of the helper channel with reference RA."""
    return qrst_rates(phi.phi, r=("R", "A"), b="C", e="E")


def direct_part_total(inst: HelperInstance) -> DirectPartCosts:
    """Helper simulation by QRST, then state merging of A against C."""
    phi = build_phi(inst)
    sim = helper_qrst_rates(phi)
    merge = merging_rates(phi.phi, a="A", b="C", r=("E", "R"))
    return DirectPartCosts(helper_qubits=sim.qubit_cost, helper_ebits=sim.ebit_cost, alice_ebits=merge.ebit_cost)


def fqsw_variant_total(inst: HelperInstance) -> FQSWVariantCosts:
    phi = build_phi(inst)
    sim = helper_qrst_rates(phi)
    fqsw = fqsw_rates(phi.phi, a="A", b="C", r=("E", "R"))
    return FQSWVariantCosts(
        helper_qubits=sim.qubit_cost,
        helper_ebits=sim.ebit_cost,
        alice_qubits=fqsw.qubit_cost,
        alice_ebit_gain=fqsw.ebit_gain,
    )


@dataclass
class RateReport:
    """Everything the `rates` subcommand prints for one instance."""
    r1: float
    r2: float
    naive: float
    residuals: Dict[str, float]
    direct_part: DirectPartCosts
    fqsw_variant: FQSWVariantCosts

    def to_dict(self) -> Dict:
        return {
            "r1": self.r1,
            "r2": self.r2,
            "naive": self.naive,
            "residuals": dict(sorted(self.residuals.items())),
            "direct_part": asdict(self.direct_part),
            "fqsw_variant": {**asdict(self.fqsw_variant), "alice_net_ebits": self.fqsw_variant.alice_net_ebits},
        }


def rate_report(inst: HelperInstance) -> RateReport:
    phi = build_phi(inst)
    point = helper_rates(phi)
    direct = direct_part_total(inst)
    variant = fqsw_variant_total(inst)
    psi = purify(inst.rho_AB, "R")
    merge, fqsw = merging_rates(psi), fqsw_rates(psi)
    residuals = {
        "decomposition": decomposition_check(phi),
        "direct_part_gap": max(abs(direct.helper_qubits - point.r2), abs(direct.alice_ebits - point.r1)),
        "fqsw_variant_net": abs(variant.alice_net_ebits - point.r1),
        "merging_vs_fqsw": abs(merge.ebit_cost - (fqsw.qubit_cost - fqsw.ebit_gain)),
        "global_purity": entropy(phi.phi, PHI_LABELS),
    }
    return RateReport(
        r1=point.r1, r2=point.r2, naive=naive_rate(phi),
        residuals=residuals, direct_part=direct, fqsw_variant=variant,
    )


# ---------------------------------------------------------------------------
# Converse audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditResidual:
    name: str
    copy_index: Optional[int]
    residual: float
    passed: bool

    def to_dict(self) -> Dict:
        return {"name": self.name, "copy": self.copy_index, "residual": self.residual, "passed": self.passed}


def _audit_state(inst: HelperInstance, n: int, aux: Optional[StinespringIsometry],
                 max_dim: int) -> Tuple[PureState, List[str]]:
    psi = purify(inst.rho_AB, "R")
    if aux is None:
        per_copy = psi.layout.total_dim // inst.helper.dim_in * inst.helper.dim_out * inst.helper.dim_env
        final_dim = per_copy ** n
    else:
        final_dim = (psi.layout.total_dim // inst.helper.dim_in) ** n * aux.dim_out * aux.dim_env
    if final_dim > max_dim:
        raise DimensionOverflowError(f"{n} copies need dimension {final_dim} > cap {max_dim}")
    state = tensor_power(psi, n)
    if aux is None:
        x_labels = []
        for i in range(1, n + 1):
            state = apply_isometry(state, inst.helper, f"B{i}", (f"X{i}", f"F{i}"))
            x_labels.append(f"X{i}")
    else:
        state = merge_labels(state, [f"B{i}" for i in range(1, n + 1)], "Bn")
        if state.layout.dim_of("Bn") != aux.dim_in:
            raise ChannelError(f"Auxiliary map expects input dimension {aux.dim_in}, B^n has {state.layout.dim_of('Bn')}")
        x_labels = ["X"]
        state = apply_isometry(state, aux, "Bn", ("X", "F"))
    return state, x_labels


def converse_audit(inst: HelperInstance, n: int, aux: Optional[StinespringIsometry] = None,
                   tol: float = TAU_ENT, max_dim: int = 4096) -> List[AuditResidual]:
    """
    Check on ρ_AB^{⊗n} every entropy identity and inequality the converse uses.

    The auxiliary system X is the output of `aux` applied to B^n, or the helper
    applied to each copy when `aux` is None.
    """
    if n not in (1, 2):
        raise DimensionOverflowError(f"Converse audit supports n in {{1, 2}}, got {n}")
    state, x = _audit_state(inst, n, aux, max_dim)
    A = [f"A{i}" for i in range(1, n + 1)]
    R = [f"R{i}" for i in range(1, n + 1)]
    results: List[AuditResidual] = []

    def record(name: str, copy_index: Optional[int], residual: float) -> None:
        results.append(AuditResidual(name, copy_index, float(residual), bool(residual <= tol)))

    # (a) H(A^n|X) = Σ_i H(A_i | X A_{<i})
    lhs = cond_entropy(state, A, x)
    rhs = sum(cond_entropy(state, A[i], x + A[:i]) for i in range(n))
    record("chain_rule_entropy", None, abs(lhs - rhs))

    # (b) I(X; R^nA^n) = Σ_i I(X; R_iA_i | R_{<i}A_{<i})
    ra = [[R[i], A[i]] for i in range(n)]
    past = lambda i: [l for pair in ra[:i] for l in pair]
    lhs = mutual_info(state, x, R + A)
    terms = [cond_mutual_info(state, x, ra[i], past(i)) if i else mutual_info(state, x, ra[i]) for i in range(n)]
    record("chain_rule_mutual_info", None, abs(lhs - sum(terms)))

    # first converse step: 2 log|X| >= I(X; R^nA^n)
    log_dim_x = float(np.log2(state.layout.dim_of(x)))
    record("dimension_bound", None, max(0.0, lhs - 2.0 * log_dim_x))

    for i in range(n):
        copy_index = i + 1
        # I(X;R_iA_i|past) = I(X past; R_iA_i) − I(past; R_iA_i)
        joint = mutual_info(state, x + past(i), ra[i])
        prior = mutual_info(state, past(i), ra[i]) if i else 0.0
        record("mi_chain_split", copy_index, abs(terms[i] - (joint - prior)))
        # (c) copies are independent
        record("copy_independence", copy_index, abs(prior))
        # (d) I(X R_{<i}A_{<i}; R_iA_i) >= I(X A_{<i}; R_iA_i)
        weaker = mutual_info(state, x + A[:i], ra[i])
        record("monotonicity", copy_index, max(0.0, weaker - joint))

    failed = [r for r in results if not r.passed]
    if failed:
        logger.warning(f"Converse audit: {len(failed)} check(s) above tolerance {tol:g}")
    else:
        logger.info(f"Converse audit passed {len(results)} checks at n = {n}")
    return results
