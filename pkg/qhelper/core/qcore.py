"""
Finite-dimensional state algebra and entropy calculus.

Tensor index convention: row-major, the leftmost label is the most significant
index. All logarithms are base 2.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from qhelper.core.errors import ConfigurationError, LayoutError, StateValidationError
from qhelper.utils.centralized_logging import get_logger
from qhelper.utils.config_manager import ConfigManager, config

logger = get_logger(__name__)

# config key under `tolerances` -> fallback
TOLERANCE_DEFAULTS = {
    "herm": 1e-9,
    "trace": 1e-9,
    "num": 1e-9,
    "psd": 1e-10,
    "ent": 1e-8,
    "rank": 1e-10,
}


def load_tolerances(settings: ConfigManager) -> Dict[str, float]:
    """Numerical tolerances from the `tolerances` config section, each in (0, 1)."""
    tolerances = {}
    for key, fallback in TOLERANCE_DEFAULTS.items():
        raw = settings.get(f"tolerances.{key}", fallback)
        try:
            value = float(raw)
        except (TypeError, ValueError):
            raise ConfigurationError(f"tolerances.{key} must be a number, got {raw!r}")
        if not 0.0 < value < 1.0:
            raise ConfigurationError(f"tolerances.{key} must be in (0, 1), got {value}")
        tolerances[key] = value
    return tolerances


_tolerances = load_tolerances(config)
TAU_HERM = _tolerances["herm"]
TAU_TR = _tolerances["trace"]
TAU_NUM = _tolerances["num"]
TAU_PSD = _tolerances["psd"]
TAU_ENT = _tolerances["ent"]
TAU_RANK = _tolerances["rank"]
CLIP_WARN = 1e-12

Labels = Union[str, Iterable[str]]


def as_labels(systems: Optional[Labels]) -> Tuple[str, ...]:
    """Normalize a label argument; a bare string is one label."""
    if systems is None:
        return ()
    if isinstance(systems, str):
        return (systems,)
    return tuple(systems)


@dataclass(frozen=True)
class SystemLayout:
    """Ordered subsystem labels with their dimensions."""
    labels: Tuple[str, ...]
    dims: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.labels) != len(self.dims):
            raise LayoutError(f"{len(self.labels)} labels but {len(self.dims)} dims")
        if len(set(self.labels)) != len(self.labels):
            raise LayoutError(f"Duplicate labels in {self.labels}")
        for label, dim in zip(self.labels, self.dims):
            if not isinstance(label, str) or not label:
                raise LayoutError(f"Invalid label {label!r}")
            if dim < 1:
                raise LayoutError(f"Dimension of {label} must be >= 1, got {dim}")

    @classmethod
    def of(cls, **dims: int) -> "SystemLayout":
        return cls(tuple(dims.keys()), tuple(dims.values()))

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.dims else 1

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LayoutError(f"Unknown label {label!r}; layout has {list(self.labels)}")

    def dim_of(self, systems: Labels) -> int:
        return int(np.prod([self.dims[self.index(s)] for s in as_labels(systems)], dtype=np.int64))

    def check(self, systems: Labels) -> Tuple[str, ...]:
        labels = as_labels(systems)
        for label in labels:
            self.index(label)
        if len(set(labels)) != len(labels):
            raise LayoutError(f"Repeated label in {labels}")
        return labels

    def subset(self, keep: Labels) -> "SystemLayout":
        """Layout restricted to `keep`, in this layout's order."""
        keep_set = set(self.check(keep))
        pairs = [(l, d) for l, d in zip(self.labels, self.dims) if l in keep_set]
        return SystemLayout(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def concat(self, other: "SystemLayout") -> "SystemLayout":
        clash = set(self.labels) & set(other.labels)
        if clash:
            raise LayoutError(f"Label collision: {sorted(clash)}")
        return SystemLayout(self.labels + other.labels, self.dims + other.dims)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Positive unit-trace matrix over a labeled tensor factorization."""
    layout: SystemLayout
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        d = self.layout.total_dim
        if m.shape != (d, d):
            raise StateValidationError(f"Matrix shape {m.shape} does not match layout dimension {d}")
        if not np.all(np.isfinite(m)):
            raise StateValidationError("Matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > TAU_HERM:
            raise StateValidationError("Matrix is not Hermitian")
        trace = np.trace(m).real
        if abs(trace - 1.0) > TAU_TR:
            raise StateValidationError(f"Trace is {trace:.12g}, expected 1")
        if np.linalg.eigvalsh(m).min(initial=0.0) < -TAU_PSD:
            raise StateValidationError("Matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.layout.labels

    def eigenvalues(self) -> np.ndarray:
        return _clip_spectrum(np.linalg.eigvalsh(self.matrix))


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector over a labeled tensor factorization."""
    layout: SystemLayout
    vector: np.ndarray

    def __post_init__(self):
        v = _frozen(np.ravel(self.vector))
        if v.shape != (self.layout.total_dim,):
            raise StateValidationError(
                f"Vector length {v.shape[0]} does not match layout dimension {self.layout.total_dim}")
        if not np.all(np.isfinite(v)):
            raise StateValidationError("Vector has non-finite entries")
        norm2 = float(np.vdot(v, v).real)
        if abs(norm2 - 1.0) > TAU_TR:
            raise StateValidationError(f"Squared norm is {norm2:.12g}, expected 1")
        object.__setattr__(self, "vector", v)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.layout.labels

    def to_density(self) -> DensityOperator:
        return DensityOperator(self.layout, np.outer(self.vector, self.vector.conj()))


State = Union[DensityOperator, PureState]


class EntropyKind(Enum):
    H = "H"
    H_COND = "H_cond"
    I = "I"
    I_COND = "I_cond"


@dataclass(frozen=True)
class EntropyReport:
    quantity: EntropyKind
    systems: Tuple[Tuple[str, ...], ...]
    value: float

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise StateValidationError(f"Non-finite {self.quantity.value} value")
        if self.quantity is EntropyKind.H and self.value < -TAU_ENT:
            raise StateValidationError(f"Negative entropy {self.value}")

    def symbol(self) -> str:
        parts = ["".join(s) for s in self.systems]
        if self.quantity is EntropyKind.H:
            return f"H({parts[0]})"
        if self.quantity is EntropyKind.H_COND:
            return f"H({parts[0]}|{parts[1]})"
        if self.quantity is EntropyKind.I:
            return f"I({parts[0]};{parts[1]})"
        return f"I({parts[0]};{parts[1]}|{parts[2]})"


# ---------------------------------------------------------------------------
# Array-level kernels (no validation; used by hot loops)
# ---------------------------------------------------------------------------

def _clip_spectrum(eigenvalues: np.ndarray) -> np.ndarray:
    if eigenvalues.size and eigenvalues.min() < -TAU_PSD:
        raise StateValidationError(f"Eigenvalue {eigenvalues.min():.3g} below -{TAU_PSD}")
    if eigenvalues.size and eigenvalues.min() < -CLIP_WARN:
        logger.warning(f"Clipping eigenvalue {eigenvalues.min():.3g} to zero")
    return np.clip(eigenvalues, 0.0, None)


def spectrum_entropy(eigenvalues: np.ndarray) -> float:
    """Shannon entropy in bits of a clipped spectrum, 0 log 0 = 0."""
    lam = _clip_spectrum(np.asarray(eigenvalues, dtype=float))
    lam = lam[lam > 0.0]
    return float(-np.sum(lam * np.log2(lam)))


def reduce_vector(vector: np.ndarray, dims: Sequence[int], keep_axes: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of a pure vector on the given axes (kept in order)."""
    n = len(dims)
    trace_axes = [i for i in range(n) if i not in keep_axes]
    tensor = np.reshape(vector, dims).transpose(list(keep_axes) + trace_axes)
    dk = int(np.prod([dims[i] for i in keep_axes], dtype=np.int64))
    m = tensor.reshape(dk, -1)
    return m @ m.conj().T


def reduce_matrix(matrix: np.ndarray, dims: Sequence[int], keep_axes: Sequence[int]) -> np.ndarray:
    """Partial trace of a dense matrix onto the given axes (kept in order)."""
    n = len(dims)
    trace_axes = [i for i in range(n) if i not in keep_axes]
    dk = int(np.prod([dims[i] for i in keep_axes], dtype=np.int64))
    dt = int(np.prod([dims[i] for i in trace_axes], dtype=np.int64))
    order = list(keep_axes) + trace_axes
    tensor = np.reshape(matrix, list(dims) + list(dims))
    tensor = tensor.transpose(order + [n + i for i in order]).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", tensor)


def vector_entropy(vector: np.ndarray, dims: Sequence[int], axes: Sequence[int]) -> float:
    """Entropy of a pure vector's marginal, reduced on the smaller side."""
    if not axes:
        return 0.0
    others = [i for i in range(len(dims)) if i not in axes]
    if not others:
        return 0.0
    d_axes = int(np.prod([dims[i] for i in axes], dtype=np.int64))
    d_others = int(np.prod([dims[i] for i in others], dtype=np.int64))
    side = list(axes) if d_axes <= d_others else others
    return spectrum_entropy(np.linalg.eigvalsh(reduce_vector(vector, dims, side)))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def tensor(a: State, b: State) -> State:
    """Kronecker product; pure ⊗ pure stays pure."""
    layout = a.layout.concat(b.layout)
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(layout, np.kron(a.vector, b.vector))
    ma = a.matrix if isinstance(a, DensityOperator) else a.to_density().matrix
    mb = b.matrix if isinstance(b, DensityOperator) else b.to_density().matrix
    return DensityOperator(layout, np.kron(ma, mb))


def partial_trace(state: State, keep: Labels) -> DensityOperator:
    """Reduced state on `keep`, labels in the original layout order."""
    layout = state.layout
    sub = layout.subset(keep)
    axes = [layout.index(l) for l in sub.labels]
    if isinstance(state, PureState):
        reduced = reduce_vector(state.vector, layout.dims, axes)
    else:
        reduced = reduce_matrix(state.matrix, layout.dims, axes)
    return DensityOperator(sub, 0.5 * (reduced + reduced.conj().T))


def purify(rho: DensityOperator, ref_label: str = "R") -> PureState:
    """
    Purification with the reference appended last.

    The reference dimension equals the number of eigenvalues above TAU_RANK.
    """
    if ref_label in rho.labels:
        raise LayoutError(f"Reference label {ref_label!r} already in layout")
    eigenvalues, eigenvectors = np.linalg.eigh(rho.matrix)
    if eigenvalues.min(initial=0.0) < -TAU_PSD:
        raise StateValidationError("Cannot purify a non-positive operator")
    support = eigenvalues > TAU_RANK
    lam = eigenvalues[support]
    vecs = eigenvectors[:, support]
    # descending order keeps the reference basis canonical
    order = np.argsort(lam)[::-1]
    lam, vecs = lam[order], vecs[:, order]
    rank = lam.size
    amplitudes = vecs * np.sqrt(lam)[np.newaxis, :]
    vector = amplitudes.reshape(-1)
    vector = vector / np.linalg.norm(vector)
    layout = SystemLayout(rho.labels + (ref_label,), rho.layout.dims + (rank,))
    return PureState(layout, vector)


def _marginal_entropy(state: State, systems: Tuple[str, ...]) -> float:
    layout = state.layout
    axes = [layout.index(l) for l in layout.subset(systems).labels]
    if isinstance(state, PureState):
        return vector_entropy(state.vector, layout.dims, axes)
    if not axes:
        return 0.0
    reduced = reduce_matrix(state.matrix, layout.dims, axes)
    return spectrum_entropy(np.linalg.eigvalsh(0.5 * (reduced + reduced.conj().T)))


def entropy(state: State, systems: Labels) -> float:
    """von Neumann entropy H(systems) in bits."""
    return _marginal_entropy(state, state.layout.check(systems))


def _disjoint(layout: SystemLayout, *groups: Labels) -> List[Tuple[str, ...]]:
    checked = [layout.check(g) for g in groups]
    seen: Dict[str, int] = {}
    for i, group in enumerate(checked):
        for label in group:
            if label in seen:
                raise LayoutError(f"Label {label!r} appears in more than one argument")
            seen[label] = i
    return checked


def cond_entropy(state: State, x: Labels, given: Labels) -> float:
    """H(X|Y) = H(XY) − H(Y)."""
    x, y = _disjoint(state.layout, x, given)
    return _marginal_entropy(state, x + y) - _marginal_entropy(state, y)


def mutual_info(state: State, x: Labels, y: Labels) -> float:
    """I(X;Y) = H(X) + H(Y) − H(XY)."""
    x, y = _disjoint(state.layout, x, y)
    return _marginal_entropy(state, x) + _marginal_entropy(state, y) - _marginal_entropy(state, x + y)


def cond_mutual_info(state: State, x: Labels, y: Labels, given: Labels) -> float:
    """I(X;Y|Z) = H(XZ) + H(YZ) − H(XYZ) − H(Z)."""
    x, y, z = _disjoint(state.layout, x, y, given)
    return (_marginal_entropy(state, x + z) + _marginal_entropy(state, y + z)
            - _marginal_entropy(state, x + y + z) - _marginal_entropy(state, z))


def entropy_report(state: State, kind: EntropyKind, *systems: Labels) -> EntropyReport:
    groups = tuple(as_labels(s) for s in systems)
    if kind is EntropyKind.H:
        value = entropy(state, groups[0])
    elif kind is EntropyKind.H_COND:
        value = cond_entropy(state, groups[0], groups[1])
    elif kind is EntropyKind.I:
        value = mutual_info(state, groups[0], groups[1])
    else:
        value = cond_mutual_info(state, groups[0], groups[1], groups[2])
    return EntropyReport(kind, groups, value)


def trace_distance(rho: State, sigma: State) -> float:
    """½‖ρ − σ‖₁ from the eigenvalues of the difference."""
    if rho.layout != sigma.layout:
        raise LayoutError(f"Layout mismatch: {rho.layout} vs {sigma.layout}")
    a = rho.matrix if isinstance(rho, DensityOperator) else rho.to_density().matrix
    b = sigma.matrix if isinstance(sigma, DensityOperator) else sigma.to_density().matrix
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(a - b))))


# ---------------------------------------------------------------------------
# Relabeling and reshaping
# ---------------------------------------------------------------------------

def relabel(state: State, mapping: Dict[str, str]) -> State:
    labels = tuple(mapping.get(l, l) for l in state.labels)
    layout = SystemLayout(labels, state.layout.dims)
    if isinstance(state, PureState):
        return PureState(layout, state.vector)
    return DensityOperator(layout, state.matrix)


def permute(state: State, order: Sequence[str]) -> State:
    """Reorder tensor factors to `order` (a permutation of the labels)."""
    layout = state.layout
    order = tuple(order)
    if sorted(order) != sorted(layout.labels):
        raise LayoutError(f"{order} is not a permutation of {layout.labels}")
    axes = [layout.index(l) for l in order]
    new_layout = SystemLayout(order, tuple(layout.dims[i] for i in axes))
    n = len(axes)
    if isinstance(state, PureState):
        vec = np.reshape(state.vector, layout.dims).transpose(axes).reshape(-1)
        return PureState(new_layout, vec)
    mat = np.reshape(state.matrix, layout.dims + layout.dims)
    mat = mat.transpose(axes + [n + i for i in axes]).reshape(new_layout.total_dim, -1)
    return DensityOperator(new_layout, mat)


def merge_labels(state: State, labels: Sequence[str], new_label: str) -> State:
    """Fuse `labels` into one factor placed where the first of them sat."""
    layout = state.layout
    labels = layout.check(labels)
    if new_label in layout.labels and new_label not in labels:
        raise LayoutError(f"Label {new_label!r} already in layout")
    first = min(layout.index(l) for l in labels)
    rest = [l for l in layout.labels if l not in labels]
    before = [l for l in rest if layout.index(l) < first]
    after = [l for l in rest if layout.index(l) > first]
    ordered = permute(state, before + list(labels) + after)
    dims = [layout.dim_of(l) for l in before] + [layout.dim_of(labels)] + [layout.dim_of(l) for l in after]
    merged_layout = SystemLayout(tuple(before) + (new_label,) + tuple(after), tuple(dims))
    if isinstance(ordered, PureState):
        return PureState(merged_layout, ordered.vector)
    return DensityOperator(merged_layout, ordered.matrix)


def tensor_power(state: State, n: int) -> State:
    """n copies with labels suffixed by copy index: A1, B1, ..., A2, B2, ..."""
    if n < 1:
        raise LayoutError(f"Copy count must be >= 1, got {n}")
    copies = [relabel(state, {l: f"{l}{i}" for l in state.labels}) for i in range(1, n + 1)]
    result = copies[0]
    for c in copies[1:]:
        result = tensor(result, c)
    return result


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def maximally_entangled(d: int = 2, labels: Tuple[str, str] = ("A", "B")) -> PureState:
    vector = np.eye(d, dtype=np.complex128).reshape(-1) / np.sqrt(d)
    return PureState(SystemLayout(labels, (d, d)), vector)


def bell_state(labels: Tuple[str, str] = ("A", "B")) -> DensityOperator:
    return maximally_entangled(2, labels).to_density()


def maximally_mixed(d: int, label: str = "A") -> DensityOperator:
    return DensityOperator(SystemLayout((label,), (d,)), np.eye(d) / d)


def isotropic_state(p: float, d: int = 2, labels: Tuple[str, str] = ("A", "B")) -> DensityOperator:
    """p·Φ + (1−p)·I/d²."""
    if not 0.0 <= p <= 1.0:
        raise StateValidationError(f"Isotropic weight must be in [0, 1], got {p}")
    phi = maximally_entangled(d, labels).to_density().matrix
    return DensityOperator(SystemLayout(labels, (d, d)), p * phi + (1.0 - p) * np.eye(d * d) / (d * d))


def diagonal_state(probabilities: Sequence[float], label: str = "A") -> DensityOperator:
    probs = np.asarray(probabilities, dtype=float)
    if probs.ndim != 1 or probs.size == 0 or probs.min() < 0 or abs(probs.sum() - 1.0) > TAU_TR:
        raise StateValidationError(f"Not a probability vector: {list(probabilities)}")
    return DensityOperator(SystemLayout((label,), (probs.size,)), np.diag(probs))


def product_state(*states: State) -> State:
    """ρ_1 ⊗ ρ_2 ⊗ ... in argument order."""
    if not states:
        raise LayoutError("product_state needs at least one factor")
    result = states[0]
    for s in states[1:]:
        result = tensor(result, s)
    return result


def random_pure(layout: SystemLayout, seed: Optional[Union[int, Sequence[int]]] = None) -> PureState:
    """Haar-random pure state (normalized complex Gaussian)."""
    rng = np.random.default_rng(seed)
    d = layout.total_dim
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(layout, v / np.linalg.norm(v))


def random_density(layout: SystemLayout, seed: Optional[Union[int, Sequence[int]]] = None) -> DensityOperator:
    """Full-rank random mixed state from a square Ginibre matrix."""
    rng = np.random.default_rng(seed)
    d = layout.total_dim
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityOperator(layout, m / np.trace(m).real)
