"""Hamiltonians, Gibbs states, max-entropy functions, and state truncation.

Hamiltonians are finite spectral objects.  The exponential-tail condition
the infinite-dimensional theory assumes is vacuous at finite truncation and
is documented rather than tested; oscillator realizations warn when the
Gibbs weight at the top level is no longer negligible.
"""

from __future__ import annotations

import math
import threading
import warnings
import weakref
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .entropic import entropy_of_spectrum
from .qstate import (
    DensityMatrix,
    HermitianOperator,
    PureState,
    QStateError,
    single_factor,
)

DEGENERACY_TOL = 1e-9
ENERGY_SOLVE_TOL = 1e-10
INVERSE_SOLVE_TOL = 1e-10

#: Gibbs weight on the top eigenvalue above which truncation is suspect.
TAIL_WARN_THRESHOLD = 1e-8


class EnergyDomainError(QStateError):
    """An energy or entropy argument is outside the feasible range."""


class TruncationTailWarning(UserWarning):
    """The Gibbs state puts non-negligible weight on the top level."""


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Finite spectral representation {E_k}, ascending, with E_0 >= 0.

    The eigenbasis defaults to computational; it only matters when the
    Hamiltonian is realized as a matrix.  `truncated` marks a finite
    realization of an infinite spectrum, enabling the Gibbs tail warning.
    """

    eigenvalues: np.ndarray
    eigenbasis: Optional[np.ndarray] = None
    truncated: bool = False

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float).reshape(-1)
        if ev.size < 1:
            raise QStateError("Hamiltonian needs at least one eigenvalue")
        if np.any(np.diff(ev) < -1e-12):
            raise QStateError("eigenvalues must be nondecreasing")
        if ev[0] < -1e-12:
            raise QStateError(f"ground energy {ev[0]} must be >= 0")
        ev = np.clip(ev, 0.0, None)
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)
        if self.eigenbasis is not None:
            u = np.asarray(self.eigenbasis, dtype=np.complex128)
            if u.shape != (ev.size, ev.size):
                raise QStateError("eigenbasis shape does not match spectrum")
            if np.max(np.abs(u.conj().T @ u - np.eye(ev.size))) > 1e-10:
                raise QStateError("eigenbasis is not unitary")
            u = u.copy()
            u.setflags(write=False)
            object.__setattr__(self, "eigenbasis", u)

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def ground_multiplicity(self) -> int:
        return int(np.sum(self.eigenvalues <= self.ground_energy + DEGENERACY_TOL))

    @property
    def max_energy(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def uniform_energy(self) -> float:
        """Mean energy of the maximally mixed state."""
        return float(self.eigenvalues.mean())

    def to_matrix(self, shift: float = 0.0) -> np.ndarray:
        diag = np.diag(self.eigenvalues - shift).astype(np.complex128)
        if self.eigenbasis is None:
            return diag
        return self.eigenbasis @ diag @ self.eigenbasis.conj().T

    def to_operator(self, label: str = "A", shift: float = 0.0) -> HermitianOperator:
        return HermitianOperator(single_factor(label, self.dim), self.to_matrix(shift))


def _gibbs_weights(eigenvalues: np.ndarray, lam: float) -> np.ndarray:
    x = -lam * eigenvalues
    x = x - x.max()
    w = np.exp(x)
    return w / w.sum()


def _mean_energy(eigenvalues: np.ndarray, lam: float) -> float:
    return float(_gibbs_weights(eigenvalues, lam) @ eigenvalues)


def gibbs_lambda(h: Hamiltonian, energy: float) -> float:
    """Inverse-temperature parameter matching the prescribed mean energy."""
    ev = h.eigenvalues
    if energy < h.ground_energy - 1e-12 or energy >= h.max_energy - 1e-12:
        if h.max_energy == h.ground_energy and abs(energy - h.ground_energy) <= 1e-12:
            return 0.0
        raise EnergyDomainError(
            f"energy {energy} outside feasible interval "
            f"[{h.ground_energy}, {h.max_energy})"
        )
    if abs(energy - h.uniform_energy) <= 1e-15:
        return 0.0
    if energy < h.uniform_energy:
        lo, hi = 0.0, 1.0
        while _mean_energy(ev, hi) > energy:
            lo, hi = hi, hi * 2.0
            if hi > 1e12:
                raise EnergyDomainError(f"energy {energy} too close to the ground energy")
    else:
        lo, hi = -1.0, 0.0
        while _mean_energy(ev, lo) < energy:
            lo, hi = lo * 2.0, lo
            if lo < -1e12:
                raise EnergyDomainError(f"energy {energy} too close to the top energy")
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if _mean_energy(ev, mid) > energy:
            lo = mid
        else:
            hi = mid
        if abs(_mean_energy(ev, mid) - energy) <= ENERGY_SOLVE_TOL:
            return mid
    return 0.5 * (lo + hi)


def gibbs_spectrum(h: Hamiltonian, energy: float) -> np.ndarray:
    """Eigenvalue distribution of the Gibbs state at the given mean energy."""
    if energy <= h.ground_energy + 1e-14:
        if energy < h.ground_energy - 1e-12:
            raise EnergyDomainError(f"energy {energy} below ground energy {h.ground_energy}")
        d0 = h.ground_multiplicity
        w = np.zeros(h.dim)
        w[:d0] = 1.0 / d0
        return w
    w = _gibbs_weights(h.eigenvalues, gibbs_lambda(h, energy))
    top = h.eigenvalues >= h.max_energy - DEGENERACY_TOL
    if h.truncated and float(w[top].sum()) > TAIL_WARN_THRESHOLD:
        warnings.warn(
            f"Gibbs weight {float(w[top].sum()):.3e} on the top level at energy {energy}; "
            "the spectrum truncation may be too small",
            TruncationTailWarning,
            stacklevel=2,
        )
    return w


def gibbs_state(h: Hamiltonian, energy: float, label: str = "A") -> DensityMatrix:
    """Gibbs state exp(-lambda H)/Z with mean energy solved to 1e-10."""
    w = gibbs_spectrum(h, energy)
    layout = single_factor(label, h.dim)
    if h.eigenbasis is None:
        return DensityMatrix(layout, np.diag(w).astype(np.complex128))
    u = h.eigenbasis
    return DensityMatrix(layout, (u * w) @ u.conj().T)


def f_h(h: Hamiltonian, energy: float) -> float:
    """Max entropy over states with mean energy <= `energy` (nats).

    Equals the Gibbs-state entropy on the increasing branch and saturates
    at log(dim) once the constraint goes slack (energy >= uniform energy).
    """
    if energy < h.ground_energy - 1e-12:
        raise EnergyDomainError(f"energy {energy} below ground energy {h.ground_energy}")
    if energy >= h.uniform_energy:
        return math.log(h.dim)
    return entropy_of_spectrum(gibbs_spectrum(h, energy))


def f_bar(h: Hamiltonian, e_bar: float) -> float:
    """Shifted max-entropy function: f_bar(E) = f_h(E + E_0), E >= 0."""
    if e_bar < -1e-12:
        raise EnergyDomainError(f"shifted energy {e_bar} must be >= 0")
    return f_h(h, max(e_bar, 0.0) + h.ground_energy)


def f_bar_inverse(h: Hamiltonian, y: float) -> float:
    """Inverse of f_bar by bisection; domain [log d_0, log dim]."""
    lo_y = math.log(h.ground_multiplicity)
    hi_y = math.log(h.dim)
    if y < lo_y - 1e-12:
        raise EnergyDomainError(f"target {y} below log d_0 = {lo_y}")
    if y > hi_y + 1e-12:
        raise EnergyDomainError(f"target {y} above log dim = {hi_y}")
    if y <= lo_y:
        return 0.0
    hi = h.uniform_energy - h.ground_energy
    if y >= hi_y:
        return hi
    lo = 0.0
    with warnings.catch_warnings():
        # probe energies are solver internals, not user-requested states
        warnings.simplefilter("ignore", TruncationTailWarning)
        while hi - lo > INVERSE_SOLVE_TOL:
            mid = 0.5 * (lo + hi)
            if f_bar(h, mid) < y:
                lo = mid
            else:
                hi = mid
    return 0.5 * (lo + hi)


_gamma_lock = threading.Lock()
_gamma_cache: "weakref.WeakKeyDictionary[Hamiltonian, dict[int, float]]" = (
    weakref.WeakKeyDictionary()
)


def gamma(h: Hamiltonian, d: int) -> float:
    """gamma(d) = f_bar^{-1}(log d), memoized per Hamiltonian."""
    d = int(d)
    if d < h.ground_multiplicity:
        raise EnergyDomainError(f"d = {d} below ground multiplicity {h.ground_multiplicity}")
    if d > h.dim:
        raise EnergyDomainError(f"d = {d} above spectrum size {h.dim}")
    with _gamma_lock:
        per_h = _gamma_cache.setdefault(h, {})
        if d not in per_h:
            per_h[d] = f_bar_inverse(h, math.log(d))
        return per_h[d]


@dataclass(frozen=True)
class OscillatorSpec:
    """l-mode oscillator: frequencies, hbar, and a per-mode truncation level."""

    modes: int
    frequencies: tuple[float, ...]
    hbar: float = 1.0
    truncation: int = 40

    def __post_init__(self):
        freqs = tuple(float(w) for w in self.frequencies)
        object.__setattr__(self, "frequencies", freqs)
        if self.modes < 1 or len(freqs) != self.modes:
            raise QStateError(f"expected {self.modes} frequencies, got {len(freqs)}")
        if any(w <= 0 for w in freqs):
            raise QStateError("frequencies must be positive")
        if self.hbar <= 0:
            raise QStateError("hbar must be positive")
        if self.truncation < 2:
            raise QStateError("need at least two levels per mode")
        # arithmetic-geometric mean inequality, up to float noise
        if 2 * self.ground_energy < self.geometric_energy * (1 - 1e-12):
            raise QStateError("2 E_0 >= E_* violated; frequencies are inconsistent")

    @property
    def ground_energy(self) -> float:
        return 0.5 * self.hbar * sum(self.frequencies)

    @property
    def geometric_energy(self) -> float:
        """E_* = (prod hbar omega_i)^(1/l)."""
        return float(np.prod([self.hbar * w for w in self.frequencies]) ** (1.0 / self.modes))

    def to_hamiltonian(self) -> Hamiltonian:
        grids = np.meshgrid(*[np.arange(self.truncation) for _ in range(self.modes)], indexing="ij")
        ev = np.zeros(self.truncation**self.modes)
        for n_i, w in zip(grids, self.frequencies):
            ev += self.hbar * w * (n_i.reshape(-1) + 0.5)
        return Hamiltonian(np.sort(ev), truncated=True)


def oscillator_f(spec: OscillatorSpec, energy: float) -> float:
    """Closed-form upper bound l log((E + E_0)/(l E_*)) + l for the max entropy."""
    if energy < spec.ground_energy - 1e-12:
        raise EnergyDomainError(f"energy {energy} below ground energy {spec.ground_energy}")
    l = spec.modes
    return l * math.log((energy + spec.ground_energy) / (l * spec.geometric_energy)) + l


def oscillator_f_bar(spec: OscillatorSpec, e_bar: float) -> float:
    """Shifted closed form: l log((E + 2 E_0)/(l E_*)) + l, E >= 0."""
    if e_bar < -1e-12:
        raise EnergyDomainError(f"shifted energy {e_bar} must be >= 0")
    l = spec.modes
    return l * math.log((max(e_bar, 0.0) + 2 * spec.ground_energy) / (l * spec.geometric_energy)) + l


def oscillator_gamma_hat_domain_min(spec: OscillatorSpec) -> int:
    """Smallest integer d in the closed-form gamma-hat domain (d > e^{f_bar(0)})."""
    threshold = math.exp(oscillator_f_bar(spec, 0.0))
    d = int(math.floor(threshold)) + 1
    while oscillator_gamma_hat_unchecked(spec, d) <= 0.0:
        d += 1
    return d


def oscillator_gamma_hat_unchecked(spec: OscillatorSpec, d: int) -> float:
    l = spec.modes
    return (l / math.e) * spec.geometric_energy * d ** (1.0 / l) - 2 * spec.ground_energy


def oscillator_gamma_hat(spec: OscillatorSpec, d: int) -> float:
    """Closed-form inverse (l/e) E_* d^(1/l) - 2 E_0; requires d > e^{f_bar(0)}."""
    value = oscillator_gamma_hat_unchecked(spec, int(d))
    if value <= 0.0:
        raise EnergyDomainError(
            f"d = {d} outside the closed-form domain (needs d > e^(f_bar(0)))"
        )
    return value


def check_s_flag(handle, grid: Optional[Sequence[float]] = None) -> int:
    """0 when f_bar(E)/sqrt(E) is non-increasing on the grid, else 1.

    Oscillator closed forms are always 0 (x log(a/x^2 + b) is increasing for
    b >= e/2, which 2 E_0 >= E_* guarantees); finite spectra are decided on
    the supplied grid.
    """
    if isinstance(handle, OscillatorSpec):
        return 0
    h: Hamiltonian = handle
    if grid is None:
        top = max(h.uniform_energy - h.ground_energy, 1e-6)
        grid = np.linspace(top * 1e-3, top, 60)
    values = np.array([f_bar(h, e) / math.sqrt(e) for e in grid if e > 0])
    return 0 if np.all(np.diff(values) <= 1e-12) else 1


def _schmidt(psi: PureState, a_label: str):
    layout = psi.layout
    pos = layout.position(a_label)
    dims = layout.dims
    tensor = psi.amplitudes.reshape(dims)
    tensor = np.moveaxis(tensor, pos, 0)
    d_a = dims[pos]
    mat = tensor.reshape(d_a, -1)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    return u, s, vh, pos, dims


def truncate_pure_state(
    psi: PureState, a_label: str, h: Hamiltonian, energy: float, d: int
) -> PureState:
    """Rank-d truncation of the A-side Schmidt decomposition.

    Schmidt terms are reordered so the A-side mean shifted energies are
    nondecreasing (ties broken toward larger Schmidt weight), the first d
    terms are kept, and the vector is renormalized.  The output has
    rank <= d on A, energy <= E, and trace distance <= sqrt(E_bar/gamma(d)).
    """
    layout = psi.layout
    if layout.dim(a_label) != h.dim:
        raise QStateError("Hamiltonian dimension does not match the A factor")
    d = int(d)
    if d < 1:
        raise QStateError(f"target rank {d} must be >= 1")
    h_bar = h.to_matrix(shift=h.ground_energy)
    u, s, vh, pos, dims = _schmidt(psi, a_label)
    p = s**2
    rho_a_energy = float(np.real(np.einsum("ak,ab,bk,k->", u.conj(), h_bar, u, p)))
    e_bar = energy - h.ground_energy
    if rho_a_energy > e_bar + 1e-9:
        raise EnergyDomainError(
            f"state energy {rho_a_energy + h.ground_energy} exceeds the cap {energy}"
        )
    if e_bar > gamma(h, d) + 1e-9:
        raise EnergyDomainError(
            f"E - E_0 = {e_bar} exceeds gamma({d}) = {gamma(h, d)}: rank-{d} truncation is not certified"
        )
    site_energy = np.real(np.einsum("ak,ab,bk->k", u.conj(), h_bar, u))
    order = sorted(range(s.size), key=lambda k: (site_energy[k], -p[k], k))
    kept = order[:d]
    delta = float(p[order[d:]].sum()) if len(order) > d else 0.0
    scale = 1.0 / math.sqrt(1.0 - delta)
    mat = (u[:, kept] * (s[kept] * scale)) @ vh[kept, :]
    tensor = mat.reshape((dims[pos],) + tuple(dm for i, dm in enumerate(dims) if i != pos))
    tensor = np.moveaxis(tensor, 0, pos)
    vec = tensor.reshape(-1)
    vec = vec / np.linalg.norm(vec)
    return PureState(layout, vec)
