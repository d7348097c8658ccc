"""Seeded instance generators for verification campaigns.

Per-trial streams are derived as SeedSequence((campaign_seed, trial_index)),
so trial results are deterministic and independent of scheduling order.
"""

from __future__ import annotations

import numpy as np

from ..channels import StinespringChannel, random_channel
from ..energy import Hamiltonian
from ..entropic import Ensemble
from ..qstate import DensityMatrix, PureState, QStateError, SystemLayout


def trial_rng(campaign_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((int(campaign_seed), int(trial))))


class Generators:
    """Random states, ensembles, channels, and energy-feasible variants."""

    def __init__(self, rng):
        if isinstance(rng, np.random.Generator):
            self.rng = rng
        else:
            self.rng = np.random.default_rng(rng)

    @classmethod
    def for_trial(cls, campaign_seed: int, trial: int) -> "Generators":
        return cls(trial_rng(campaign_seed, trial))

    def _gaussian(self, shape) -> np.ndarray:
        return self.rng.standard_normal(shape) + 1j * self.rng.standard_normal(shape)

    def density(self, layout: SystemLayout) -> DensityMatrix:
        """Wishart-style G G* normalized to unit trace."""
        d = layout.total_dim
        gmat = self._gaussian((d, d))
        w = gmat @ gmat.conj().T
        return DensityMatrix(layout, w / np.trace(w).real)

    def pure(self, layout: SystemLayout) -> PureState:
        vec = self._gaussian(layout.total_dim)
        return PureState(layout, vec / np.linalg.norm(vec))

    def probabilities(self, m: int) -> np.ndarray:
        return self.rng.dirichlet(np.ones(m))

    def ensemble(self, layout: SystemLayout, m: int) -> Ensemble:
        probs = self.probabilities(m)
        return Ensemble([(p, self.density(layout)) for p in probs])

    def channel(
        self, d_a: int, d_b: int, d_e: int,
        input_label: str = "A", output_label: str = "B", env_label: str = "E",
    ) -> StinespringChannel:
        return random_channel(d_a, d_b, d_e, self.rng, input_label, output_label, env_label)

    def unitary(self, d: int) -> np.ndarray:
        q, r = np.linalg.qr(self._gaussian((d, d)))
        phases = np.diagonal(r).copy()
        phases = np.where(np.abs(phases) > 0, phases / np.abs(phases), 1.0)
        return q * phases.conj()

    def energy_feasible_density(
        self, layout: SystemLayout, a_label: str, h: Hamiltonian, energy: float
    ) -> DensityMatrix:
        """Random state mixed toward the A-side ground state until feasible.

        The mean energy is affine in the mixing weight, so the minimal
        feasible weight is exact.
        """
        rho = self.density(layout)
        h_op = _embedded_hamiltonian(layout, a_label, h)
        e_rho = float(np.real(np.trace(h_op @ rho.entries)))
        if e_rho <= energy:
            return rho
        target = _ground_product(layout, a_label, h)
        e_g = h.ground_energy
        if e_rho - e_g <= 0:
            raise QStateError(f"energy cap {energy} below the ground energy {e_g}")
        t = (e_rho - energy) / (e_rho - e_g)
        return DensityMatrix(layout, (1.0 - t) * rho.entries + t * target)

    def energy_feasible_pure(
        self, layout: SystemLayout, a_label: str, h: Hamiltonian, energy: float
    ) -> PureState:
        """Random pure state blended toward a ground product vector until feasible."""
        psi = self.pure(layout)
        h_op = _embedded_hamiltonian(layout, a_label, h)

        def e_of(vec: np.ndarray) -> float:
            return float(np.real(vec.conj() @ h_op @ vec))

        if e_of(psi.amplitudes) <= energy:
            return psi
        ground = _ground_product_vector(layout, a_label, h)

        def blend(t: float) -> np.ndarray:
            vec = (1.0 - t) * psi.amplitudes + t * ground
            return vec / np.linalg.norm(vec)

        lo, hi = 0.0, 1.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if e_of(blend(mid)) > energy:
                lo = mid
            else:
                hi = mid
        return PureState(layout, blend(hi))


def _embedded_hamiltonian(layout: SystemLayout, a_label: str, h: Hamiltonian) -> np.ndarray:
    """H acting on the named factor, identity elsewhere, in layout order."""
    if layout.dim(a_label) != h.dim:
        raise QStateError("Hamiltonian dimension does not match the labeled factor")
    op = np.ones((1, 1), dtype=np.complex128)
    for lbl, dim in layout.factors:
        block = h.to_matrix() if lbl == a_label else np.eye(dim)
        op = np.kron(op, block)
    return op


def _ground_product(layout: SystemLayout, a_label: str, h: Hamiltonian) -> np.ndarray:
    """Ground-space uniform mixture on A, maximally mixed elsewhere."""
    d0 = h.ground_multiplicity
    ground = np.zeros((h.dim, h.dim), dtype=np.complex128)
    if h.eigenbasis is None:
        ground[np.arange(d0), np.arange(d0)] = 1.0 / d0
    else:
        u = h.eigenbasis[:, :d0]
        ground = u @ u.conj().T / d0
    op = np.ones((1, 1), dtype=np.complex128)
    for lbl, dim in layout.factors:
        block = ground if lbl == a_label else np.eye(dim) / dim
        op = np.kron(op, block)
    return op


def _ground_product_vector(layout: SystemLayout, a_label: str, h: Hamiltonian) -> np.ndarray:
    gvec = np.zeros(h.dim, dtype=np.complex128)
    gvec[0] = 1.0
    if h.eigenbasis is not None:
        gvec = h.eigenbasis[:, 0]
    vec = np.ones(1, dtype=np.complex128)
    for lbl, dim in layout.factors:
        if lbl == a_label:
            block = gvec
        else:
            block = np.zeros(dim, dtype=np.complex128)
            block[0] = 1.0
        vec = np.kron(vec, block)
    return vec
