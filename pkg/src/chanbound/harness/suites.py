"""Verification campaigns: one suite per statement family.

Each suite draws seeded random instances, computes the left-hand side
exactly, brackets (or computes) epsilon, and classifies the inequality
with the three-way verdict logic.  Same config and seed give identical
results independent of scheduling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import bounds as bnd
from ..channels import StinespringChannel, apply, tensor_power_apply
from ..energy import (
    Hamiltonian,
    OscillatorSpec,
    TruncationTailWarning,
    check_s_flag,
    f_bar,
    f_h,
    gamma,
    oscillator_f,
    truncate_pure_state,
)
from ..entropic import (
    Ensemble,
    conditional_mutual_information,
    g,
    h2,
    holevo_quantity,
    mutual_information,
    qc_state,
)
from ..metrics import (
    EnergyConstraint,
    bures_state_distance,
    bures_sup_bruteforce,
    channel_bures_bracket,
    diamond_bracket,
    ensemble_d0,
    ensemble_dk,
)
from ..qstate import (
    DensityMatrix,
    HermitianOperator,
    PureState,
    SystemLayout,
    jordan_parts,
    partial_trace,
    partial_trace_hermitian,
    trace_norm,
)
from .generators import Generators, _embedded_hamiltonian
from .verdict import BoundVerdict, DEFAULT_TOL, summarize

SUITE_NAMES = (
    "lemma4",
    "prop2",
    "prop3",
    "prop4",
    "prop5",
    "prop6",
    "prop7",
    "prop8",
    "thm1",
    "thm2",
    "identities",
    "metrics",
)


@dataclass
class CampaignConfig:
    suite: str
    trials: int = 100
    seed: int = 7
    dims: dict = field(default_factory=dict)
    energy: Optional[dict] = None
    budgets: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.suite not in SUITE_NAMES:
            raise ValueError(f"unknown suite {self.suite!r}; expected one of {SUITE_NAMES}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        self.seed = int(self.seed)

    def budget(self, key: str, default):
        return self.budgets.get(key, default)

    def dim(self, key: str, default: int) -> int:
        return int(self.dims.get(key, default))

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "dims": dict(self.dims),
            "energy": dict(self.energy) if self.energy else None,
            "budgets": dict(self.budgets),
        }


def config_from_dict(doc: dict) -> CampaignConfig:
    known = {"suite", "trials", "seed", "dims", "energy", "budgets"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return CampaignConfig(
        suite=str(doc["suite"]),
        trials=int(doc.get("trials", 100)),
        seed=int(doc.get("seed", 7)),
        dims=dict(doc.get("dims", {})),
        energy=doc.get("energy"),
        budgets=dict(doc.get("budgets", {})),
    )


def parse_energy(doc: dict):
    """Energy config -> (Hamiltonian or OscillatorSpec, E)."""
    kind = doc.get("kind", "oscillator")
    e = float(doc["E"])
    if kind == "oscillator":
        spec = OscillatorSpec(
            modes=int(doc.get("modes", 1)),
            frequencies=tuple(doc.get("frequencies", [1.0] * int(doc.get("modes", 1)))),
            hbar=float(doc.get("hbar", 1.0)),
            truncation=int(doc.get("truncation", 40)),
        )
        return spec, e
    if kind == "spectrum":
        return Hamiltonian(np.asarray(doc["eigenvalues"], dtype=float)), e
    raise ValueError(f"unknown energy kind {kind!r}")


@dataclass(frozen=True)
class CampaignReport:
    suite: str
    seed: int
    config: dict
    verdicts: tuple
    summary: dict


def run_suite(config: CampaignConfig) -> CampaignReport:
    fn = _SUITES[config.suite]
    verdicts = fn(config)
    return CampaignReport(
        suite=config.suite,
        seed=config.seed,
        config=config.to_dict(),
        verdicts=tuple(verdicts),
        summary=summarize(verdicts),
    )


# ---------------------------------------------------------------------------
# lemma4: CMI continuity on five qubits, exact epsilon
# ---------------------------------------------------------------------------

def _qubits(labels: str) -> SystemLayout:
    return SystemLayout([(lbl, 2) for lbl in labels])


def _half_trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    return 0.5 * trace_norm(rho.entries - sigma.entries)


def _cmi_abcd(state: DensityMatrix) -> float:
    reduced = partial_trace(state, ("A", "B", "C"))
    return conditional_mutual_information(reduced, ("A",), ("B",), ("C",))


def suite_lemma4(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    out: list[BoundVerdict] = []
    layout = _qubits("ABCDR")
    layout_adf = SystemLayout([("A", 2), ("D", 2), ("B", 2), ("C", 2), ("R", 2)])
    h_star = np.kron(np.diag(np.arange(4.0)), np.eye(8)).astype(np.complex128)
    ground_vec = np.zeros(32, dtype=np.complex128)
    ground_vec[0] = 1.0
    e_cap = float(config.budget("lemma4_energy", 1.0))
    ham_star = Hamiltonian(np.arange(4.0))
    f_handle = lambda e: f_h(ham_star, e)
    d_ad = 4

    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)
        kind = trial % 4
        if kind == 0:
            rho = gen.density(layout)
            sigma = gen.density(layout)
            eps = _half_trace_distance(rho, sigma)
            lhs = abs(_cmi_abcd(rho) - _cmi_abcd(sigma))
            out.append(BoundVerdict.exact(
                "lemma4", trial, "lemma4_finite", lhs, eps,
                bnd.lemma4_bound("finite", eps, d=d_ad), tol,
            ))
        elif kind == 1:
            rho = _random_qc_state(gen, layout_adf)
            sigma = _random_qc_state(gen, layout_adf)
            eps = _half_trace_distance(rho, sigma)
            lhs = abs(_cmi_abcd(rho) - _cmi_abcd(sigma))
            out.append(BoundVerdict.exact(
                "lemma4", trial, "lemma4_finite", lhs, eps,
                bnd.lemma4_bound("finite", eps, d=d_ad), tol,
            ))
            out.append(BoundVerdict.exact(
                "lemma4", trial, "lemma4_qc", lhs, eps,
                bnd.lemma4_bound("qc", eps, d=d_ad), tol,
            ))
        elif kind == 2:
            rho = gen.density(layout)
            sigma = _twist_outside_bc(gen, rho)
            eps = _half_trace_distance(rho, sigma)
            lhs = abs(_cmi_abcd(rho) - _cmi_abcd(sigma))
            out.append(BoundVerdict.exact(
                "lemma4", trial, "lemma4_finite", lhs, eps,
                bnd.lemma4_bound("finite", eps, d=d_ad), tol,
            ))
            out.append(BoundVerdict.exact(
                "lemma4", trial, "lemma4_finite_equal_bc", lhs, eps,
                bnd.lemma4_bound("finite", eps, d=d_ad, part_c=True), tol,
            ))
        else:
            psi = _feasible_pure(gen, layout_adf, h_star, ground_vec, e_cap)
            phi = _feasible_pure(gen, layout_adf, h_star, ground_vec, e_cap)
            rho, sigma = psi.to_density(), phi.to_density()
            eps = _half_trace_distance(rho, sigma)
            lhs = abs(_cmi_abcd(rho) - _cmi_abcd(sigma))
            out.append(BoundVerdict.exact(
                "lemma4", trial, "lemma4_energy", lhs, eps,
                bnd.lemma4_bound("energy", eps, f_handle=f_handle, energy=e_cap), tol,
            ))
            out.append(BoundVerdict.exact(
                "lemma4", trial, "lemma4_pure", lhs, eps,
                bnd.lemma4_bound("pure", eps, f_handle=f_handle, energy=e_cap), tol,
            ))
    return out


def _random_qc_state(gen: Generators, layout_adf: SystemLayout) -> DensityMatrix:
    """qc-state over the (AD):(BCR) cut in the fixed computational basis."""
    probs = gen.probabilities(8)
    ad = SystemLayout([("A", 2), ("D", 2)])
    out = np.zeros((32, 32), dtype=np.complex128)
    for i, p in enumerate(probs):
        tau = gen.density(ad).entries
        out[i::8, i::8] = p * tau
    return DensityMatrix(layout_adf, out)


def _twist_outside_bc(gen: Generators, rho: DensityMatrix) -> DensityMatrix:
    """Conjugate by a product unitary on A, D, R: the BC marginal is untouched."""
    blocks = {lbl: gen.unitary(2) if lbl in "ADR" else np.eye(2) for lbl, _ in rho.layout.factors}
    u = np.ones((1, 1), dtype=np.complex128)
    for lbl, _ in rho.layout.factors:
        u = np.kron(u, blocks[lbl])
    return DensityMatrix(rho.layout, u @ rho.entries @ u.conj().T)


def _feasible_pure(gen, layout, h_full, ground_vec, e_cap) -> PureState:
    psi = gen.pure(layout)

    def e_of(vec):
        return float(np.real(vec.conj() @ h_full @ vec))

    if e_of(psi.amplitudes) <= e_cap:
        return psi
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        vec = (1 - mid) * psi.amplitudes + mid * ground_vec
        vec = vec / np.linalg.norm(vec)
        if e_of(vec) > e_cap:
            lo = mid
        else:
            hi = mid
    vec = (1 - hi) * psi.amplitudes + hi * ground_vec
    return PureState(layout, vec / np.linalg.norm(vec))


# ---------------------------------------------------------------------------
# prop2: output CMI under joint channel/state variation
# ---------------------------------------------------------------------------

def _output_cmi(channel: StinespringChannel, rho: DensityMatrix) -> float:
    out = apply(channel, rho)
    return conditional_mutual_information(out, (channel.output_label,), ("D",), ("C",))


def suite_prop2(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    budget = config.budget("bracket_budget", 500)
    br_tol = config.budget("bracket_tol", 1e-6)
    d_a = config.dim("d_a", 2)
    layout = SystemLayout([("A", d_a), ("C", 2), ("D", 2)])
    out: list[BoundVerdict] = []
    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)
        kind = trial % 3
        phi = gen.channel(d_a, config.dim("d_b", 2), config.dim("d_e", 2))
        psi = phi if kind == 1 else gen.channel(d_a, config.dim("d_b", 2), config.dim("d_e", 2))
        rho = gen.density(layout)
        sigma = rho if kind == 2 else gen.density(layout)
        state_eps = 0.0 if kind == 2 else _half_trace_distance(rho, sigma)
        if kind == 1:
            eps_lo = eps_hi = state_eps
            certs = {"epsilon_kind": "exact_trace_distance"}
        else:
            br = channel_bures_bracket(phi, psi, budget=budget, tol=br_tol, seed=trial)
            eps_lo, eps_hi = state_eps + br.lower, state_eps + br.upper
            certs = {"epsilon_kind": "trace_distance_plus_bures_bracket",
                     "beta_lower": br.lower, "beta_upper": br.upper, "converged": br.converged}
        lhs = abs(_output_cmi(phi, rho) - _output_cmi(psi, sigma))
        out.append(BoundVerdict.check(
            "prop2", trial, "prop2",
            lhs, eps_lo, eps_hi,
            bnd.prop2_bound(eps_lo, d_a, kind == 1, kind == 2),
            bnd.prop2_bound(eps_hi, d_a, kind == 1, kind == 2),
            tol, certs,
        ))
    return out


# ---------------------------------------------------------------------------
# prop3: output CMI under state variation with an input energy cap
# ---------------------------------------------------------------------------

def suite_prop3(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    d_a = config.dim("d_a", 4)
    h, e_cap = parse_energy(config.energy or {"kind": "spectrum", "eigenvalues": list(range(d_a)), "E": 1.0})
    if isinstance(h, OscillatorSpec):
        ham = h.to_hamiltonian()
        fbar = lambda e: oscillator_f(h, e + h.ground_energy)
    else:
        ham = h
        fbar = lambda e: f_bar(ham, e)
    if ham.dim != d_a:
        d_a = ham.dim
    e_bar = e_cap - ham.ground_energy
    layout = SystemLayout([("A", d_a), ("C", 2), ("D", 2)])
    channel = Generators.for_trial(config.seed, 10**9).channel(d_a, config.dim("d_b", 3), config.dim("d_e", 2))
    h_full = _embedded_hamiltonian(layout, "A", ham)
    gvec = _ground_product_vec(layout, "A", ham)
    out: list[BoundVerdict] = []
    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)
        pure = trial % 2 == 1
        if pure:
            rho = _feasible_pure(gen, layout, h_full, gvec, e_cap).to_density()
            sigma = _feasible_pure(gen, layout, h_full, gvec, e_cap).to_density()
        else:
            rho = gen.energy_feasible_density(layout, "A", ham, e_cap)
            sigma = gen.energy_feasible_density(layout, "A", ham, e_cap)
        eps = _half_trace_distance(rho, sigma)
        lhs = abs(_output_cmi(channel, rho) - _output_cmi(channel, sigma))
        rhs = bnd.prop3_bound(eps, fbar, e_bar, pure=pure)
        name = "prop3_pure" if pure else "prop3"
        out.append(BoundVerdict.exact("prop3", trial, name, lhs, eps, rhs, tol,
                                      {"epsilon_kind": "exact_trace_distance"}))
    return out


def _ground_product_vec(layout: SystemLayout, a_label: str, h: Hamiltonian) -> np.ndarray:
    from .generators import _ground_product_vector

    return _ground_product_vector(layout, a_label, h)


# ---------------------------------------------------------------------------
# prop4: n-copy output CMI under channel variation
# ---------------------------------------------------------------------------

def _n_copy_cmi(channel: StinespringChannel, n: int, rho: DensityMatrix) -> float:
    labels = [f"A{k}" for k in range(1, n + 1)]
    out = tensor_power_apply(channel, n, rho, labels)
    b_labels = tuple(f"{channel.output_label}{k}" for k in range(1, n + 1))
    return conditional_mutual_information(out, b_labels, ("D",), ("C",))


def suite_prop4(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    budget = config.budget("bracket_budget", 500)
    br_tol = config.budget("bracket_tol", 1e-6)
    d_a = config.dim("d_a", 2)
    n_fixed = config.dims.get("n")
    out: list[BoundVerdict] = []
    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)
        n = int(n_fixed) if n_fixed is not None else (1 if trial % 2 == 0 else 2)
        layout = SystemLayout([(f"A{k}", d_a) for k in range(1, n + 1)] + [("C", 2), ("D", 2)])
        phi = gen.channel(d_a, config.dim("d_b", 2), config.dim("d_e", 2))
        psi = gen.channel(d_a, config.dim("d_b", 2), config.dim("d_e", 2))
        rho = gen.density(layout)
        br = channel_bures_bracket(phi, psi, budget=budget, tol=br_tol, seed=trial)
        lhs = abs(_n_copy_cmi(phi, n, rho) - _n_copy_cmi(psi, n, rho))
        out.append(BoundVerdict.check(
            "prop4", trial, f"prop4_n{n}",
            lhs, br.lower, br.upper,
            bnd.prop4_bound(br.lower, d_a, n),
            bnd.prop4_bound(br.upper, d_a, n),
            tol,
            {"epsilon_kind": "bures_bracket", "converged": br.converged, "width": br.width},
        ))
    return out


# ---------------------------------------------------------------------------
# prop5: n-copy output CMI with energy-constrained channel distance
# ---------------------------------------------------------------------------

def suite_prop5(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    budget = config.budget("bracket_budget", 500)
    br_tol = config.budget("bracket_tol", 1e-6)
    energy_doc = config.energy or {
        "kind": "oscillator", "modes": 1, "frequencies": [1.0], "truncation": 6, "E": 1.2,
    }
    spec, e_cap = parse_energy(energy_doc)
    if not isinstance(spec, OscillatorSpec):
        raise ValueError("prop5 runs on oscillator input systems")
    ham = spec.to_hamiltonian()
    d_a = ham.dim
    constraint = EnergyConstraint(ham, e_cap)
    gamma_fn, d_max = bnd.gamma_fn_from_oscillator(spec)
    e_bar = e_cap - spec.ground_energy
    d_b, d_e = config.dim("d_b", 3), config.dim("d_e", 2)
    out: list[BoundVerdict] = []
    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)
        n = 1 if trial % 2 == 0 else 2
        per_copy = trial % 4 < 2
        labels = [f"A{k}" for k in range(1, n + 1)]
        layout = SystemLayout([(lbl, d_a) for lbl in labels] + [("C", 2), ("D", 2)])
        rho = _prop5_state(gen, layout, labels, ham, e_cap, n, per_copy)
        energies = [
            float(np.real(np.trace(ham.to_matrix() @ partial_trace(rho, (lbl,)).entries)))
            for lbl in labels
        ]
        t_flag = 0 if all(e <= e_cap + 1e-9 for e in energies) else 1
        phi = gen.channel(d_a, d_b, d_e)
        psi = gen.channel(d_a, d_b, d_e)
        br = channel_bures_bracket(
            phi, psi, constraint, budget=budget, tol=br_tol, seed=trial
        )
        lhs = abs(_n_copy_cmi(phi, n, rho) - _n_copy_cmi(psi, n, rho))

        def rhs_at(eps: float) -> float:
            t_val = bnd.t_st(eps, e_bar, gamma_fn, s=0, t=t_flag, d_max=d_max).value
            return n * (t_val + g(eps) + 2.0 * eps * math.log(2.0))

        out.append(BoundVerdict.check(
            "prop5", trial, f"prop5_n{n}_t{t_flag}",
            lhs, br.lower, br.upper, rhs_at(br.lower), rhs_at(br.upper),
            tol,
            {"epsilon_kind": "energy_constrained_bures_bracket",
             "converged": br.converged, "per_copy_energies": energies,
             "truncation": spec.truncation},
        ))
    return out


def _prop5_state(gen, layout, labels, ham, e_cap, n, per_copy) -> DensityMatrix:
    rho = gen.density(layout)
    h_mat = ham.to_matrix()
    ground = np.zeros((ham.dim, ham.dim), dtype=np.complex128)
    d0 = ham.ground_multiplicity
    ground[np.arange(d0), np.arange(d0)] = 1.0 / d0
    target = np.ones((1, 1), dtype=np.complex128)
    for lbl, dim in layout.factors:
        target = np.kron(target, ground if lbl in labels else np.eye(dim) / dim)
    energies = [
        float(np.real(np.trace(h_mat @ partial_trace(rho, (lbl,)).entries))) for lbl in labels
    ]
    e0 = ham.ground_energy
    if per_copy:
        t_needed = max(max((e - e_cap) / (e - e0) for e in energies), 0.0)
    else:
        total = sum(energies)
        t_needed = max((total - n * e_cap) / (total - n * e0), 0.0)
    if t_needed <= 0:
        return rho
    return DensityMatrix(layout, (1 - t_needed) * rho.entries + t_needed * target)


# ---------------------------------------------------------------------------
# prop6: output Holevo quantity under joint channel/ensemble variation
# ---------------------------------------------------------------------------

def _pushed_ensemble(channel: StinespringChannel, ens: Ensemble) -> Ensemble:
    return Ensemble([(p, apply(channel, state)) for p, state in ens.items])


def suite_prop6(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    budget = config.budget("bracket_budget", 500)
    br_tol = config.budget("bracket_tol", 1e-6)
    d_a = config.dim("d_a", 3)
    m = config.dim("ensemble_size", 3)
    layout = SystemLayout([("A", d_a)])
    out: list[BoundVerdict] = []
    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)
        kind = trial % 3
        phi = gen.channel(d_a, config.dim("d_b", 3), config.dim("d_e", 2))
        psi = phi if kind == 1 else gen.channel(d_a, config.dim("d_b", 3), config.dim("d_e", 2))
        mu = gen.ensemble(layout, m)
        nu = mu if kind == 2 else gen.ensemble(layout, m)
        metric_eps = 0.0 if kind == 2 else min(ensemble_d0(mu, nu), ensemble_dk(mu, nu))
        if kind == 1:
            eps_lo = eps_hi = metric_eps
            certs = {"epsilon_kind": "min_d0_dk"}
        else:
            br = channel_bures_bracket(phi, psi, budget=budget, tol=br_tol, seed=trial)
            eps_lo, eps_hi = metric_eps + br.lower, metric_eps + br.upper
            certs = {"epsilon_kind": "min_d0_dk_plus_bures_bracket", "converged": br.converged}
        lhs = abs(holevo_quantity(_pushed_ensemble(phi, mu)) - holevo_quantity(_pushed_ensemble(psi, nu)))
        out.append(BoundVerdict.check(
            "prop6", trial, "prop6",
            lhs, eps_lo, eps_hi,
            bnd.prop6_bound(eps_lo, d_a, kind == 1, kind == 2),
            bnd.prop6_bound(eps_hi, d_a, kind == 1, kind == 2),
            tol, certs,
        ))
    return out


# ---------------------------------------------------------------------------
# prop7: output Holevo quantity under ensemble variation with average-energy cap
# ---------------------------------------------------------------------------

def _feasible_ensemble(gen: Generators, layout, m, ham, e_cap) -> Ensemble:
    ens = gen.ensemble(layout, m)
    avg = ens.average_state()
    h_mat = ham.to_matrix()
    e_avg = float(np.real(np.trace(h_mat @ avg.entries)))
    if e_avg <= e_cap:
        return ens
    d0 = ham.ground_multiplicity
    ground = np.zeros((ham.dim, ham.dim), dtype=np.complex128)
    ground[np.arange(d0), np.arange(d0)] = 1.0 / d0
    t = (e_avg - e_cap) / (e_avg - ham.ground_energy)
    items = [
        (p, DensityMatrix(layout, (1 - t) * state.entries + t * ground))
        for p, state in ens.items
    ]
    return Ensemble(items)


def suite_prop7(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    energy_doc = config.energy or {"kind": "spectrum", "eigenvalues": [0, 1, 2, 3], "E": 1.0}
    handle, e_cap = parse_energy(energy_doc)
    if isinstance(handle, OscillatorSpec):
        ham = handle.to_hamiltonian()
        fbar = lambda e: oscillator_f(handle, e + handle.ground_energy)
    else:
        ham = handle
        fbar = lambda e: f_bar(ham, e)
    d_a = ham.dim
    e_bar = e_cap - ham.ground_energy
    m = config.dim("ensemble_size", 3)
    layout = SystemLayout([("A", d_a)])
    channel = Generators.for_trial(config.seed, 10**9).channel(d_a, config.dim("d_b", 3), config.dim("d_e", 2))
    out: list[BoundVerdict] = []
    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)
        mu = _feasible_ensemble(gen, layout, m, ham, e_cap)
        nu = _feasible_ensemble(gen, layout, m, ham, e_cap)
        eps = ensemble_dk(mu, nu)
        lhs = abs(holevo_quantity(_pushed_ensemble(channel, mu)) - holevo_quantity(_pushed_ensemble(channel, nu)))
        rhs = bnd.prop7_bound(eps, fbar, e_bar) if eps > 0 else 0.0
        out.append(BoundVerdict.exact("prop7", trial, "prop7", lhs, eps, rhs, tol,
                                      {"epsilon_kind": "kantorovich_exact"}))
    return out


# ---------------------------------------------------------------------------
# prop8: output Holevo quantity under channel variation with energy cap
# ---------------------------------------------------------------------------

def suite_prop8(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    budget = config.budget("bracket_budget", 500)
    br_tol = config.budget("bracket_tol", 1e-6)
    energy_doc = config.energy or {"kind": "spectrum", "eigenvalues": [0, 1, 2, 3], "E": 0.6}
    handle, e_cap = parse_energy(energy_doc)
    if isinstance(handle, OscillatorSpec):
        ham = handle.to_hamiltonian()
        spec_r = float(config.budget("p_r", 0.5))

        def t_handle(eps: float) -> float:
            return bnd.p_r(handle, e_cap, eps, spec_r)

    else:
        ham = handle
        gamma_fn, d_max = bnd.gamma_fn_from_hamiltonian(ham)
        s_flag = check_s_flag(ham)
        e_bar = e_cap - ham.ground_energy

        def t_handle(eps: float) -> float:
            return bnd.t_st(eps, e_bar, gamma_fn, s=s_flag, t=0, d_max=d_max).value

    d_a = ham.dim
    m = config.dim("ensemble_size", 3)
    layout = SystemLayout([("A", d_a)])
    mu = _feasible_ensemble(Generators.for_trial(config.seed, 10**9), layout, m, ham, e_cap)
    constraint = EnergyConstraint(ham, e_cap)
    out: list[BoundVerdict] = []
    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)
        phi = gen.channel(d_a, config.dim("d_b", 3), config.dim("d_e", 2))
        psi = gen.channel(d_a, config.dim("d_b", 3), config.dim("d_e", 2))
        br = channel_bures_bracket(phi, psi, constraint, budget=budget, tol=br_tol, seed=trial)
        lhs = abs(holevo_quantity(_pushed_ensemble(phi, mu)) - holevo_quantity(_pushed_ensemble(psi, mu)))
        out.append(BoundVerdict.check(
            "prop8", trial, "prop8",
            lhs, br.lower, br.upper,
            bnd.prop8_bound(br.lower, t_handle),
            bnd.prop8_bound(br.upper, t_handle),
            tol,
            {"epsilon_kind": "energy_constrained_bures_bracket", "converged": br.converged},
        ))
    return out


# ---------------------------------------------------------------------------
# thm1 / thm2: closed-form capacity verification on the erasure family
# ---------------------------------------------------------------------------

def suite_thm1(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    d_values = config.dims.get("d_grid", list(range(2, 65)))
    x_values = config.dims.get("x_grid", [0.01, 0.05])
    out: list[BoundVerdict] = []
    trial = 0
    for d in d_values:
        for x in x_values:
            eps = bnd.erasure_isometry_gap(x)
            for cap in bnd.CAPACITIES:
                lhs = bnd.erasure_delta(cap, x, math.log(d))
                rhs = bnd.theorem1_bound(cap, eps, d_a=int(d))
                out.append(BoundVerdict.exact(
                    "thm1", trial, f"thm1_{cap}", lhs, eps, rhs, tol,
                    {"epsilon_kind": "isometry_gap_closed_form", "d": int(d), "x": float(x)},
                ))
                trial += 1
    return out


def suite_thm2(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    energy_doc = config.energy or {
        "kind": "oscillator", "modes": 1, "frequencies": [1.0], "truncation": 40, "E": 5.0,
    }
    spec, _ = parse_energy(energy_doc)
    if not isinstance(spec, OscillatorSpec):
        raise ValueError("thm2 runs on oscillator input systems")
    ham = spec.to_hamiltonian()
    e_values = config.dims.get("e_grid", [2.0, 5.0, 10.0])
    x_values = config.dims.get("x_grid", [0.01, 0.05])
    out: list[BoundVerdict] = []
    trial = 0
    for e_cap in e_values:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", TruncationTailWarning)
            m_scale = f_h(ham, e_cap)
        tail_warned = any(issubclass(w.category, TruncationTailWarning) for w in caught)
        r_values = config.dims.get("r_grid", [1.0, 0.3, 1.0 / oscillator_f(spec, e_cap)])
        for x in x_values:
            eps = bnd.erasure_isometry_gap(x)
            for r in r_values:
                def t_fn(t: int, e: float, _r=r) -> float:
                    return bnd.p_r(spec, e_cap, e, _r)

                for cap in bnd.CAPACITIES:
                    lhs = bnd.erasure_delta(cap, x, m_scale)
                    rhs = bnd.theorem2_bound(cap, eps, t_fn)
                    out.append(BoundVerdict.exact(
                        "thm2", trial, f"thm2_{cap}", lhs, eps, rhs, tol,
                        {"epsilon_kind": "isometry_gap_closed_form",
                         "E": float(e_cap), "x": float(x), "r": float(r),
                         "M": m_scale, "tail_warned": tail_warned},
                    ))
                    trial += 1
    return out


# ---------------------------------------------------------------------------
# identities: equalities and auxiliary inequalities used by the proofs
# ---------------------------------------------------------------------------

def suite_identities(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    eq_tol = config.budget("identity_tol", 1e-9)
    out: list[BoundVerdict] = []
    ham8 = Hamiltonian(np.arange(8.0))
    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)

        # Holevo quantity equals the qc-state mutual information
        layout_a = SystemLayout([("A", 3)])
        ens = gen.ensemble(layout_a, 4)
        qc = qc_state(ens, "X")
        lhs = abs(holevo_quantity(ens) - mutual_information(qc, ("A",), ("X",)))
        out.append(BoundVerdict.exact("identities", trial, "chi_equals_qc_mi", lhs, 0.0, eq_tol, tol))

        # chain rule on four qubits (the two-body term lives on the marginal)
        lay4 = _qubits("XYZC")
        rho4 = gen.density(lay4)
        full = conditional_mutual_information(rho4, ("X",), ("Y", "Z"), ("C",))
        split = conditional_mutual_information(
            partial_trace(rho4, ("X", "Y", "C")), ("X",), ("Y",), ("C",)
        ) + conditional_mutual_information(rho4, ("X",), ("Z",), ("Y", "C"))
        out.append(BoundVerdict.exact(
            "identities", trial, "chain_rule", abs(full - split), 0.0,
            config.budget("chain_tol", 1e-8), tol,
        ))

        # almost-affinity of the CMI in the mixing weight
        lay3 = _qubits("ABC")
        r1, r2 = gen.density(lay3), gen.density(lay3)
        p = 0.1 + 0.8 * float(gen.rng.random())
        mix = DensityMatrix(lay3, p * r1.entries + (1 - p) * r2.entries)
        dev = abs(
            p * conditional_mutual_information(r1, ("A",), ("B",), ("C",))
            + (1 - p) * conditional_mutual_information(r2, ("A",), ("B",), ("C",))
            - conditional_mutual_information(mix, ("A",), ("B",), ("C",))
        )
        out.append(BoundVerdict.exact("identities", trial, "almost_affinity", dev, 0.0, h2(p) + eq_tol, tol))

        # isometry perturbation inequalities
        u_iso = gen.unitary(4)[:, :2]
        v_iso = gen.unitary(4)[:, :2]
        rho2 = gen.density(_qubits("Q"))
        mid = trace_norm(u_iso @ rho2.entries @ u_iso.conj().T - v_iso @ rho2.entries @ v_iso.conj().T)
        step1 = 2.0 * trace_norm((u_iso - v_iso) @ rho2.entries)
        step2 = 2.0 * float(np.linalg.norm(u_iso - v_iso, 2))
        out.append(BoundVerdict.exact("identities", trial, "isometry_state_step", mid, 0.0, step1 + eq_tol, tol))
        out.append(BoundVerdict.exact("identities", trial, "isometry_norm_step", step1, 0.0, step2 + eq_tol, tol))

        # scaling inequality x f(z/x) <= y f(z/y) for concave nonnegative f
        x_val = 0.05 + float(gen.rng.random())
        y_val = x_val + 0.05 + float(gen.rng.random())
        z_val = 2.0 * float(gen.rng.random())
        for fname, fn in (("concave_scaling_g", g), ("concave_scaling_sqrt", math.sqrt)):
            out.append(BoundVerdict.exact(
                "identities", trial, fname,
                x_val * fn(z_val / x_val), 0.0, y_val * fn(z_val / y_val) + eq_tol, tol,
            ))

        # scaled-argument monotonicity: x log(a/x^2 + b) increasing for b >= e/2
        a_val = 0.1 + 2.0 * float(gen.rng.random())
        b_val = math.e / 2.0 + 2.0 * float(gen.rng.random())
        grid = np.linspace(0.05, 3.0, 24)
        vals = grid * np.log(a_val / grid**2 + b_val)
        out.append(BoundVerdict.exact(
            "identities", trial, "xlog_monotone",
            float(np.max(-np.diff(vals))), 0.0, eq_tol, tol,
        ))

        # rank-truncation claims on an 8x4 bipartite pure state
        out.extend(_truncation_verdicts(config, gen, trial, ham8, tol))
    return out


def _truncation_verdicts(config, gen, trial, ham, tol) -> list[BoundVerdict]:
    eq_tol = config.budget("identity_tol", 1e-9)
    layout = SystemLayout([("A", ham.dim), ("B", 4)])
    e_cap = float(config.budget("truncation_energy", 1.2))
    d_keep = 2 if trial % 2 == 0 else 4
    if gamma(ham, d_keep) < e_cap - ham.ground_energy:
        e_cap = ham.ground_energy + 0.9 * gamma(ham, d_keep)
    h_full = _embedded_hamiltonian(layout, "A", ham)
    gvec = _ground_product_vec(layout, "A", ham)
    psi = _feasible_pure(gen, layout, h_full, gvec, e_cap)
    sigma = truncate_pure_state(psi, "A", ham, e_cap, d_keep)
    rho_m, sig_m = psi.to_density(), sigma.to_density()
    e_bar = e_cap - ham.ground_energy
    gam = gamma(ham, d_keep)

    rank = int(np.sum(np.linalg.eigvalsh(partial_trace(sig_m, ("A",)).entries) > 1e-10))
    energy_a = float(np.real(np.trace(ham.to_matrix() @ partial_trace(sig_m, ("A",)).entries)))
    dist = _half_trace_distance(rho_m, sig_m)
    diff = HermitianOperator.difference(rho_m, sig_m)
    pos, neg = jordan_parts(diff)
    tn = trace_norm(diff.entries)
    h_bar_a = ham.to_matrix(shift=ham.ground_energy)
    j_bounds = []
    for part in (pos, neg):
        part_a = partial_trace_hermitian(part, ("A",))
        j_bounds.append(tn * float(np.real(np.trace(h_bar_a @ part_a.entries))))
    out = [
        BoundVerdict.exact("identities", trial, "trunc_rank", float(rank), 0.0, float(d_keep), tol),
        BoundVerdict.exact("identities", trial, "trunc_energy", energy_a, 0.0, e_cap + eq_tol, tol),
        BoundVerdict.exact(
            "identities", trial, "trunc_distance", dist, 0.0,
            math.sqrt(e_bar / gam) + eq_tol if gam > 0 else math.inf, tol,
        ),
        BoundVerdict.exact("identities", trial, "trunc_jordan_pos", j_bounds[0], 0.0, 2 * e_bar + eq_tol, tol),
        BoundVerdict.exact("identities", trial, "trunc_jordan_neg", j_bounds[1], 0.0, 2 * e_bar + eq_tol, tol),
    ]
    return out


# ---------------------------------------------------------------------------
# metrics: sandwich relations and see-saw certification
# ---------------------------------------------------------------------------

def suite_metrics(config: CampaignConfig) -> list[BoundVerdict]:
    tol = config.budget("verdict_tol", DEFAULT_TOL)
    eq_tol = config.budget("identity_tol", 1e-9)
    budget = config.budget("bracket_budget", 500)
    br_tol = config.budget("bracket_tol", 1e-6)
    brute_samples = config.budget("brute_samples", 4000)
    out: list[BoundVerdict] = []
    lay = SystemLayout([("A", 3)])
    for trial in range(config.trials):
        gen = Generators.for_trial(config.seed, trial)
        rho, sigma, tau = gen.density(lay), gen.density(lay), gen.density(lay)
        beta = bures_state_distance(rho, sigma)
        half_tn = _half_trace_distance(rho, sigma)
        out.append(BoundVerdict.exact("metrics", trial, "bures_lower_sandwich", half_tn, 0.0, beta + eq_tol, tol))
        out.append(BoundVerdict.exact(
            "metrics", trial, "bures_upper_sandwich", beta, 0.0, math.sqrt(2 * half_tn) + eq_tol, tol,
        ))
        out.append(BoundVerdict.exact(
            "metrics", trial, "bures_triangle",
            bures_state_distance(rho, sigma), 0.0,
            bures_state_distance(rho, tau) + bures_state_distance(tau, sigma) + eq_tol, tol,
        ))

        # D_K <= D_0 holds for shared probability vectors (diagonal coupling);
        # with independent probabilities the two metrics are not ordered
        mu = gen.ensemble(lay, 3)
        nu = Ensemble([(p, gen.density(lay)) for p, _ in mu.items])
        out.append(BoundVerdict.exact(
            "metrics", trial, "dk_le_d0_matched",
            ensemble_dk(mu, nu), 0.0, ensemble_d0(mu, nu) + eq_tol, tol,
        ))

        if trial % 5 == 0:
            phi = gen.channel(2, 2, 2)
            psi = gen.channel(2, 2, 2)
            br = channel_bures_bracket(phi, psi, budget=budget, tol=br_tol, seed=trial)
            dia = diamond_bracket(phi, psi, budget=budget, tol=br_tol, seed=trial)
            out.append(BoundVerdict.exact(
                "metrics", trial, "half_diamond_le_beta", 0.5 * dia.lower, 0.0, br.upper + 1e-6, tol,
            ))
            out.append(BoundVerdict.exact(
                "metrics", trial, "beta_le_sqrt_diamond", br.lower, 0.0,
                math.sqrt(dia.upper) + 1e-6, tol,
            ))
            brute = bures_sup_bruteforce(phi, psi, samples=brute_samples, seed=trial)
            out.append(BoundVerdict.exact(
                "metrics", trial, "brute_le_upper", brute, 0.0, br.upper + 1e-4, tol,
            ))
    return out


_SUITES = {
    "lemma4": suite_lemma4,
    "prop2": suite_prop2,
    "prop3": suite_prop3,
    "prop4": suite_prop4,
    "prop5": suite_prop5,
    "prop6": suite_prop6,
    "prop7": suite_prop7,
    "prop8": suite_prop8,
    "thm1": suite_thm1,
    "thm2": suite_thm2,
    "identities": suite_identities,
    "metrics": suite_metrics,
}
