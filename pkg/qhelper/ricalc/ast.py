"""
Syntax tree of resource inequalities.

A statement is two multisets of (coefficient, resource) terms. Coefficients
are expressions over exact rationals and entropic quantities; symbolic atoms
(inf, Q(N)) parse but do not evaluate.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple, Union

from qhelper.core.qcore import EntropyKind


class ResourceKind(Enum):
    EBIT = "ebit"
    QUBIT = "qubit_channel"
    CBIT = "cbit_channel"
    NOISY = "noisy"
    RELATIVE = "relative"
    STATE = "state"


_UNIT_TEXT = {
    ResourceKind.EBIT: "[qq]",
    ResourceKind.QUBIT: "[q->q]",
    ResourceKind.CBIT: "[c->c]",
}


@dataclass(frozen=True)
class Resource:
    kind: ResourceKind
    name: Optional[str] = None
    state: Optional[str] = None

    @property
    def key(self) -> str:
        """Canonical text; equal keys are the same resource."""
        if self.kind in _UNIT_TEXT:
            return _UNIT_TEXT[self.kind]
        if self.kind is ResourceKind.RELATIVE:
            return f"<{self.name}:{self.state}>"
        return f"<{self.name}>"

    @staticmethod
    def named(name: str) -> "Resource":
        """`<name>` is a state when the name has '_' or starts lowercase."""
        if "_" in name or name[:1].islower():
            return Resource(ResourceKind.STATE, name)
        return Resource(ResourceKind.NOISY, name)


# ---------------------------------------------------------------------------
# Coefficient expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Entropic:
    quantity: EntropyKind
    systems: Tuple[Tuple[str, ...], ...]
    tag: Optional[str] = None


@dataclass(frozen=True)
class Symbol:
    """Opaque function-style quantity such as Q(N)."""
    name: str
    args: Tuple[str, ...]


@dataclass(frozen=True)
class Infinity:
    pass


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-' or '*'
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


Expr = Union[Const, Entropic, Symbol, Infinity, BinOp, Neg]

ONE = Const(Fraction(1))


@dataclass(frozen=True)
class Term:
    coeff: Expr
    resource: Resource


@dataclass(frozen=True)
class RIStatement:
    lhs: Tuple[Term, ...]
    rhs: Tuple[Term, ...]

    def resources(self) -> Tuple[Resource, ...]:
        seen = {}
        for term in self.lhs + self.rhs:
            seen.setdefault(term.resource.key, term.resource)
        return tuple(seen.values())


def times(a: Expr, b: Expr) -> Expr:
    """a·b with constant folding."""
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if a == ONE:
        return b
    if b == ONE:
        return a
    if isinstance(b, Const):
        a, b = b, a
    if isinstance(a, Const) and isinstance(b, BinOp) and b.op == "*" and isinstance(b.left, Const):
        return times(Const(a.value * b.left.value), b.right)
    return BinOp("*", a, b)
