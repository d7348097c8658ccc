"""Dense complex linear algebra over labeled multipartite Hilbert spaces.

States and operators carry a :class:`SystemLayout` naming their tensor
factors.  All values are immutable after construction and every operation
is a pure function, so concurrent use is safe.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERMITICITY_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
TRACE_TOL = 1e-10
PURE_NORM_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-9

#: Dense storage only; verification systems are small by design.
MAX_TOTAL_DIM = 4096

_AXIS_LETTERS = string.ascii_lowercase + string.ascii_uppercase


class QStateError(ValueError):
    """A state, operator, or layout violates its contract."""


@dataclass(frozen=True)
class SystemLayout:
    """Ordered tensor factors, each a (label, dimension) pair.

    The factor order fixes the basis convention: indices are lexicographic
    with the first factor slowest, and partial traces keep the surviving
    factors in layout order.
    """

    factors: tuple[tuple[str, int], ...]

    def __init__(self, factors: Iterable[tuple[str, int]]):
        normalized = tuple((str(lbl), int(dim)) for lbl, dim in factors)
        if not normalized:
            raise QStateError("layout needs at least one factor")
        labels = [lbl for lbl, _ in normalized]
        if len(set(labels)) != len(labels):
            raise QStateError(f"duplicate labels in layout: {labels}")
        for lbl, dim in normalized:
            if dim < 1:
                raise QStateError(f"factor {lbl!r} has dimension {dim} < 1")
        total = 1
        for _, dim in normalized:
            total *= dim
        if total > MAX_TOTAL_DIM:
            raise QStateError(
                f"total dimension {total} exceeds dense-simulation guard {MAX_TOTAL_DIM}"
            )
        object.__setattr__(self, "factors", normalized)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.factors)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def dim(self, label: str) -> int:
        return self.factors[self.position(label)][1]

    def position(self, label: str) -> int:
        for i, (lbl, _) in enumerate(self.factors):
            if lbl == label:
                return i
        raise QStateError(f"unknown label {label!r}; layout has {self.labels}")

    def has(self, label: str) -> bool:
        return any(lbl == label for lbl, _ in self.factors)

    def restricted(self, keep: Sequence[str]) -> "SystemLayout":
        keep_set = set(keep)
        unknown = keep_set - set(self.labels)
        if unknown:
            raise QStateError(f"unknown labels {sorted(unknown)}; layout has {self.labels}")
        return SystemLayout([f for f in self.factors if f[0] in keep_set])

    def replace(self, label: str, new_factors: Sequence[tuple[str, int]]) -> "SystemLayout":
        """New layout with `label` swapped for `new_factors` in place."""
        pos = self.position(label)
        factors = list(self.factors)
        factors[pos : pos + 1] = list(new_factors)
        return SystemLayout(factors)


def single_factor(label: str, dim: int) -> SystemLayout:
    return SystemLayout([(label, dim)])


def _as_square_complex(entries: np.ndarray, dim: int, what: str) -> np.ndarray:
    arr = np.asarray(entries, dtype=np.complex128)
    if arr.shape != (dim, dim):
        raise QStateError(f"{what} has shape {arr.shape}, expected ({dim}, {dim})")
    return arr


def _check_and_symmetrize(entries: np.ndarray, what: str) -> np.ndarray:
    dev = np.max(np.abs(entries - entries.conj().T))
    if dev > 1e-8:
        raise QStateError(f"{what} is not Hermitian: max deviation {dev:.3e}")
    sym = (entries + entries.conj().T) / 2.0
    sym.setflags(write=False)
    return sym


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Hermitian operator on a labeled space; symmetrized on construction."""

    layout: SystemLayout
    entries: np.ndarray

    def __post_init__(self):
        arr = _as_square_complex(self.entries, self.layout.total_dim, "operator")
        object.__setattr__(self, "entries", _check_and_symmetrize(arr, "operator"))

    @staticmethod
    def difference(a: "DensityMatrix", b: "DensityMatrix") -> "HermitianOperator":
        if a.layout != b.layout:
            raise QStateError("difference requires matching layouts")
        return HermitianOperator(a.layout, a.entries - b.entries)

    def trace(self) -> float:
        return float(np.trace(self.entries).real)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, PSD, unit-trace operator over a labeled layout."""

    layout: SystemLayout
    entries: np.ndarray

    def __post_init__(self):
        arr = _as_square_complex(self.entries, self.layout.total_dim, "density matrix")
        sym = _check_and_symmetrize(arr, "density matrix")
        tr = np.trace(sym).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise QStateError(f"trace {tr} deviates from 1 beyond {TRACE_TOL}")
        lo = float(np.linalg.eigvalsh(sym)[0])
        if lo < EIGENVALUE_FLOOR:
            raise QStateError(f"negative eigenvalue {lo:.3e} below floor {EIGENVALUE_FLOOR}")
        object.__setattr__(self, "entries", sym)

    def as_hermitian(self) -> HermitianOperator:
        return HermitianOperator(self.layout, self.entries)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over a labeled layout."""

    layout: SystemLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if vec.shape != (self.layout.total_dim,):
            raise QStateError(
                f"amplitude vector has length {vec.size}, expected {self.layout.total_dim}"
            )
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > PURE_NORM_TOL:
            raise QStateError(f"norm {norm} deviates from 1 beyond {PURE_NORM_TOL}")
        vec = vec.copy()
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def marginal(self, keep: Sequence[str]) -> DensityMatrix:
        return partial_trace(self.to_density(), keep)


def maximally_mixed(layout: SystemLayout) -> DensityMatrix:
    d = layout.total_dim
    return DensityMatrix(layout, np.eye(d) / d)


def basis_pure(layout: SystemLayout, index: int) -> PureState:
    vec = np.zeros(layout.total_dim, dtype=np.complex128)
    vec[index] = 1.0
    return PureState(layout, vec)


def convex_mix(p: float, rho: DensityMatrix, sigma: DensityMatrix) -> DensityMatrix:
    if rho.layout != sigma.layout:
        raise QStateError("mixing requires matching layouts")
    if not 0.0 <= p <= 1.0:
        raise QStateError(f"mixing weight {p} outside [0, 1]")
    return DensityMatrix(rho.layout, p * rho.entries + (1.0 - p) * sigma.entries)


def tensor_product(a, b):
    """Kronecker product with concatenated layouts; labels must be disjoint."""
    if type(a) is not type(b):
        raise QStateError("tensor_product requires two values of the same kind")
    overlap = set(a.layout.labels) & set(b.layout.labels)
    if overlap:
        raise QStateError(f"labels {sorted(overlap)} appear on both sides")
    layout = SystemLayout(a.layout.factors + b.layout.factors)
    if isinstance(a, PureState):
        return PureState(layout, np.kron(a.amplitudes, b.amplitudes))
    return type(a)(layout, np.kron(a.entries, b.entries))


def _partial_trace_entries(
    entries: np.ndarray, layout: SystemLayout, keep: Sequence[str]
) -> tuple[np.ndarray, SystemLayout]:
    keep_set = set(keep)
    if not keep_set:
        raise QStateError("keep set must be non-empty")
    unknown = keep_set - set(layout.labels)
    if unknown:
        raise QStateError(f"unknown labels {sorted(unknown)}; layout has {layout.labels}")
    dims = layout.dims
    n = len(dims)
    if 2 * n > len(_AXIS_LETTERS):
        raise QStateError("too many tensor factors for einsum contraction")
    keep_idx = [i for i, (lbl, _) in enumerate(layout.factors) if lbl in keep_set]
    row = [_AXIS_LETTERS[i] for i in range(n)]
    col = [_AXIS_LETTERS[n + i] if i in keep_idx else _AXIS_LETTERS[i] for i in range(n)]
    out = [_AXIS_LETTERS[i] for i in keep_idx] + [_AXIS_LETTERS[n + i] for i in keep_idx]
    spec = "".join(row) + "".join(col) + "->" + "".join(out)
    tensor = entries.reshape(dims + dims)
    reduced_layout = layout.restricted(sorted(keep_set, key=layout.position))
    d = reduced_layout.total_dim
    reduced = np.einsum(spec, tensor).reshape(d, d)
    return reduced, reduced_layout


def partial_trace(rho: DensityMatrix, keep: Sequence[str]) -> DensityMatrix:
    """Trace out every factor not named in `keep`; trace is preserved."""
    if set(keep) == set(rho.layout.labels):
        return rho
    entries, layout = _partial_trace_entries(rho.entries, rho.layout, keep)
    return DensityMatrix(layout, entries)


def partial_trace_hermitian(op: HermitianOperator, keep: Sequence[str]) -> HermitianOperator:
    entries, layout = _partial_trace_entries(op.entries, op.layout, keep)
    return HermitianOperator(layout, entries)


def _entries_of(op) -> np.ndarray:
    if isinstance(op, (DensityMatrix, HermitianOperator)):
        return op.entries
    return np.asarray(op, dtype=np.complex128)


def eigh(op) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian operator.

    The reconstruction U diag(w) U* is verified to within 1e-9 in operator
    norm; failure of the underlying solver surfaces as QStateError.
    """
    mat = _entries_of(op)
    try:
        w, u = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise QStateError(f"eigendecomposition failed to converge: {exc}") from exc
    residual = np.linalg.norm((u * w) @ u.conj().T - mat, 2)
    if residual > RECONSTRUCTION_TOL:
        raise QStateError(f"eigendecomposition residual {residual:.3e} above 1e-9")
    return w, u


def trace_norm(op) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(_entries_of(op), compute_uv=False).sum())


def operator_norm(op) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(_entries_of(op), 2))


def purify(rho: DensityMatrix, ref_label: str) -> PureState:
    """Purification over an appended reference factor of the same dimension.

    The partial trace over `ref_label` returns `rho` (up to 1e-9).
    """
    if rho.layout.has(ref_label):
        raise QStateError(f"reference label {ref_label!r} already in layout")
    w, u = eigh(rho)
    w = np.clip(w, 0.0, None)
    d = rho.layout.total_dim
    # |psi> = sum_i sqrt(w_i) |u_i> (x) |i>_ref, ref index fastest
    vec = (u * np.sqrt(w)).reshape(-1)
    vec = vec / np.linalg.norm(vec)
    layout = SystemLayout(rho.layout.factors + ((ref_label, d),))
    return PureState(layout, vec)


def jordan_parts(op: HermitianOperator) -> tuple[HermitianOperator, HermitianOperator]:
    """Positive and negative parts: op = pos - neg, both PSD, orthogonal supports."""
    w, u = eigh(op)
    pos = (u * np.clip(w, 0.0, None)) @ u.conj().T
    neg = (u * np.clip(-w, 0.0, None)) @ u.conj().T
    return HermitianOperator(op.layout, pos), HermitianOperator(op.layout, neg)
