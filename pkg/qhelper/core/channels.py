"""
CPTP maps as Kraus families and Stinespring isometries.

Isometry rows are ordered C ⊗ E row-major: row = c * dim_env + e.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm

from qhelper.core.errors import ChannelError, LayoutError
from qhelper.core.qcore import (
    TAU_NUM, DensityOperator, PureState, State, SystemLayout,
)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Σ K_k ρ K_k† with Σ K_k†K_k = I."""
    dim_in: int
    dim_out: int
    kraus: Tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=np.complex128) for k in self.kraus)
        if not ops:
            raise ChannelError("Kraus family is empty")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise ChannelError(f"Kraus operator shape {k.shape}, expected {(self.dim_out, self.dim_in)}")
            k.setflags(write=False)
        completeness = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(completeness - np.eye(self.dim_in))) > TAU_NUM:
            raise ChannelError("Kraus operators violate completeness Σ K†K = I")
        object.__setattr__(self, "kraus", ops)

    def __call__(self, matrix: np.ndarray) -> np.ndarray:
        return sum(k @ matrix @ k.conj().T for k in self.kraus)


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    """V: B → C ⊗ E with V†V = I."""
    dim_in: int
    dim_out: int
    dim_env: int
    V: np.ndarray

    def __post_init__(self):
        v = np.array(self.V, dtype=np.complex128)
        if v.shape != (self.dim_out * self.dim_env, self.dim_in):
            raise ChannelError(
                f"Isometry shape {v.shape}, expected {(self.dim_out * self.dim_env, self.dim_in)}")
        if np.max(np.abs(v.conj().T @ v - np.eye(self.dim_in))) > TAU_NUM:
            raise ChannelError("Matrix is not an isometry (V†V != I)")
        v.setflags(write=False)
        object.__setattr__(self, "V", v)

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.dim_in, self.dim_out, self.dim_env


@dataclass(frozen=True, eq=False)
class ChannelParams:
    """Real coordinates of an anti-Hermitian generator of side dim_out·dim_env."""
    dim_in: int
    dim_out: int
    dim_env: int
    theta: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float).reshape(-1)
        side = self.dim_out * self.dim_env
        if self.dim_in > side:
            raise ChannelError(f"dim_out*dim_env = {side} cannot host an isometry from dim {self.dim_in}")
        if theta.size != side * side:
            raise ChannelError(f"theta has {theta.size} entries, expected {side * side}")
        if not np.all(np.isfinite(theta)):
            raise ChannelError("theta has non-finite entries")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.dim_in, self.dim_out, self.dim_env

    def with_theta(self, theta: np.ndarray) -> "ChannelParams":
        return ChannelParams(self.dim_in, self.dim_out, self.dim_env, theta)


def default_env_dim(dim_in: int, dim_out: int) -> int:
    """Environment size that suffices for any channel dim_in → dim_out."""
    return dim_in * dim_out


# ---------------------------------------------------------------------------
# Conversions
# ---------------------------------------------------------------------------

def kraus_to_stinespring(channel: KrausChannel) -> StinespringIsometry:
    """V|x⟩ = Σ_k (K_k|x⟩) ⊗ |k⟩_E."""
    n = len(channel.kraus)
    stacked = np.stack(channel.kraus, axis=1)  # (dim_out, n, dim_in)
    return StinespringIsometry(channel.dim_in, channel.dim_out, n, stacked.reshape(channel.dim_out * n, channel.dim_in))


def stinespring_to_kraus(iso: StinespringIsometry) -> KrausChannel:
    blocks = iso.V.reshape(iso.dim_out, iso.dim_env, iso.dim_in)
    return KrausChannel(iso.dim_in, iso.dim_out, tuple(blocks[:, k, :] for k in range(iso.dim_env)))


def generator_from_theta(theta: np.ndarray, side: int) -> np.ndarray:
    """
    Anti-Hermitian G from side² reals: the first `side` entries are the
    imaginary diagonal, then (re, im) pairs for each j < k in row-major order.
    """
    g = np.zeros((side, side), dtype=np.complex128)
    g[np.diag_indices(side)] = 1j * theta[:side]
    rows, cols = np.triu_indices(side, k=1)
    pairs = theta[side:].reshape(-1, 2)
    upper = pairs[:, 0] + 1j * pairs[:, 1]
    g[rows, cols] = upper
    g[cols, rows] = -upper.conj()
    return g


def params_to_isometry(params: ChannelParams) -> StinespringIsometry:
    """V = first dim_in columns of exp(G)."""
    side = params.dim_out * params.dim_env
    unitary = expm(generator_from_theta(params.theta, side))
    return StinespringIsometry(params.dim_in, params.dim_out, params.dim_env, unitary[:, :params.dim_in])


def random_params(dim_in: int, dim_out: int, dim_env: int,
                  rng: np.random.Generator, scale: float = np.pi) -> ChannelParams:
    side = dim_out * dim_env
    return ChannelParams(dim_in, dim_out, dim_env, rng.uniform(-scale, scale, side * side))


def random_isometry(dim_in: int, dim_out: int, dim_env: int,
                    seed: Optional[Union[int, Sequence[int]]] = None) -> StinespringIsometry:
    """Orthonormalized complex Gaussian matrix, phases fixed by R's diagonal."""
    side = dim_out * dim_env
    if dim_in > side:
        raise ChannelError(f"No isometry from dim {dim_in} into dim {side}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((side, dim_in)) + 1j * rng.standard_normal((side, dim_in))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return StinespringIsometry(dim_in, dim_out, dim_env, q * phases[np.newaxis, :])


# ---------------------------------------------------------------------------
# Action on states
# ---------------------------------------------------------------------------

def _apply_on_axis(tensor: np.ndarray, op: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(op, tensor, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def apply_isometry(state: State, iso: StinespringIsometry, on: str,
                   out_labels: Tuple[str, str] = ("C", "E")) -> State:
    """Replace label `on` by two labels (C, E) in place; purity and trace preserved."""
    layout = state.layout
    axis = layout.index(on)
    if layout.dims[axis] != iso.dim_in:
        raise ChannelError(f"Label {on} has dimension {layout.dims[axis]}, isometry expects {iso.dim_in}")
    out_c, out_e = out_labels
    if out_c == out_e:
        raise LayoutError("Output labels must differ")
    for label in out_labels:
        if label in layout.labels and label != on:
            raise LayoutError(f"Output label {label!r} already in layout")

    labels = layout.labels[:axis] + (out_c, out_e) + layout.labels[axis + 1:]
    dims = layout.dims[:axis] + (iso.dim_out, iso.dim_env) + layout.dims[axis + 1:]
    new_layout = SystemLayout(labels, dims)

    if isinstance(state, PureState):
        t = _apply_on_axis(np.reshape(state.vector, layout.dims), iso.V, axis)
        return PureState(new_layout, t.reshape(-1))

    n = len(layout.dims)
    t = np.reshape(state.matrix, layout.dims + layout.dims)
    t = _apply_on_axis(t, iso.V, axis)
    t = _apply_on_axis(t, iso.V.conj(), n + axis)
    d = new_layout.total_dim
    return DensityOperator(new_layout, t.reshape(d, d))


def apply_channel(state: State, channel: KrausChannel, on: str,
                  out_label: Optional[str] = None) -> DensityOperator:
    """Kraus action on one label; the output keeps the label unless renamed."""
    layout = state.layout
    axis = layout.index(on)
    if layout.dims[axis] != channel.dim_in:
        raise ChannelError(f"Label {on} has dimension {layout.dims[axis]}, channel expects {channel.dim_in}")
    out_label = out_label or on
    if out_label != on and out_label in layout.labels:
        raise LayoutError(f"Output label {out_label!r} already in layout")
    rho = state.matrix if isinstance(state, DensityOperator) else state.to_density().matrix
    n = len(layout.dims)
    t = np.reshape(rho, layout.dims + layout.dims)
    acc = None
    for k in channel.kraus:
        term = _apply_on_axis(_apply_on_axis(t, k, axis), k.conj(), n + axis)
        acc = term if acc is None else acc + term
    labels = layout.labels[:axis] + (out_label,) + layout.labels[axis + 1:]
    dims = layout.dims[:axis] + (channel.dim_out,) + layout.dims[axis + 1:]
    new_layout = SystemLayout(labels, dims)
    d = new_layout.total_dim
    m = acc.reshape(d, d)
    return DensityOperator(new_layout, 0.5 * (m + m.conj().T))


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

def _weyl_x(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)


def _weyl_z(d: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def _check_probability(name: str, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ChannelError(f"{name} parameter must be in [0, 1], got {p}")
    return float(p)


def identity(d: int = 2) -> KrausChannel:
    return KrausChannel(d, d, (np.eye(d),))


def trace_and_replace(sigma: np.ndarray, dim_in: int = 2) -> KrausChannel:
    """ρ ↦ tr(ρ)·σ; Kraus √λ_j |s_j⟩⟨i|."""
    sigma = np.atleast_2d(np.asarray(sigma, dtype=np.complex128))
    eigenvalues, eigenvectors = np.linalg.eigh(sigma)
    if eigenvalues.min() < -TAU_NUM or abs(eigenvalues.sum() - 1.0) > TAU_NUM:
        raise ChannelError("Replacement output must be a density matrix")
    dim_out = sigma.shape[0]
    ops = []
    for lam, vec in zip(eigenvalues, eigenvectors.T):
        if lam <= TAU_NUM:
            continue
        for i in range(dim_in):
            bra = np.zeros((1, dim_in))
            bra[0, i] = 1.0
            ops.append(np.sqrt(lam) * np.outer(vec, bra))
    return KrausChannel(dim_in, dim_out, tuple(ops))


def discard(dim_in: int = 2) -> KrausChannel:
    """Trace-and-replace with a one-dimensional output."""
    return trace_and_replace(np.ones((1, 1)), dim_in)


def depolarizing(p: float, d: int = 2) -> KrausChannel:
    """(1−p)ρ + p·I/d via the d² Weyl operators (½·Pauli at p = 1 for qubits)."""
    p = _check_probability("depolarizing", p)
    x, z = _weyl_x(d), _weyl_z(d)
    ops = []
    for a in range(d):
        for b in range(d):
            weyl = np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
            weight = 1.0 - p + p / d ** 2 if (a, b) == (0, 0) else p / d ** 2
            ops.append(np.sqrt(weight) * weyl)
    return KrausChannel(d, d, tuple(ops))


def dephasing(p: float, d: int = 2) -> KrausChannel:
    """(1−p)ρ + p·diag(ρ) via powers of Weyl Z; two operators for qubits."""
    p = _check_probability("dephasing", p)
    z = _weyl_z(d)
    ops = [np.sqrt(1.0 - p + p / d) * np.eye(d)]
    ops += [np.sqrt(p / d) * np.linalg.matrix_power(z, k) for k in range(1, d)]
    return KrausChannel(d, d, tuple(ops))


def amplitude_damping(gamma: float) -> KrausChannel:
    gamma = _check_probability("amplitude_damping", gamma)
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]])
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]])
    return KrausChannel(2, 2, (k0, k1))


PRESET_NAMES = ("identity", "discard", "depolarizing", "dephasing", "amplitude_damping", "replace")


def preset_from_string(spec: str, dim_in: int = 2) -> KrausChannel:
    """Parse strings such as 'depolarizing:0.25', 'discard' or 'replace:1,0'."""
    name, _, arg = spec.strip().partition(":")
    name = name.strip().lower()
    try:
        if name == "identity":
            return identity(dim_in)
        if name == "discard":
            return discard(dim_in)
        if name == "depolarizing":
            return depolarizing(float(arg), dim_in)
        if name == "dephasing":
            return dephasing(float(arg), dim_in)
        if name == "amplitude_damping":
            if dim_in != 2:
                raise ChannelError("amplitude_damping is defined for qubits only")
            return amplitude_damping(float(arg))
        if name == "replace":
            probs = [float(x) for x in arg.split(",") if x.strip()]
            return trace_and_replace(np.diag(probs), dim_in)
    except ValueError as e:
        raise ChannelError(f"Bad preset parameter in {spec!r}: {e}")
    raise ChannelError(f"Unknown channel preset {name!r}; known: {', '.join(PRESET_NAMES)}")
