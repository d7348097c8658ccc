"""Evaluators for the continuity-bound formulas and erasure closed forms.

Every evaluator is in nats and is monotone nondecreasing in its epsilon
argument, which is what makes bracket-based verdicts sound: evaluating at
a certified lower/upper end of epsilon brackets the true right-hand side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .energy import Hamiltonian, OscillatorSpec, f_h, gamma, oscillator_f, oscillator_gamma_hat_domain_min, oscillator_gamma_hat_unchecked
from .entropic import eta, g
from .metrics import EnergyConstraint, _constrained_minimum
from .qstate import QStateError

LOG2 = math.log(2.0)

LEMMA4_VARIANTS = ("finite", "qc", "energy", "pure")
CAPACITIES = ("chi", "c", "q", "pbar", "p")

_T1_MAIN = {"chi": 1.0, "c": 2.0, "q": 2.0, "pbar": 2.0, "p": 4.0}
_T1_G = {"chi": 1.0, "c": 1.0, "q": 1.0, "pbar": 2.0, "p": 2.0}
_T2_MULT = {"chi": 1.0, "c": 1.0, "q": 1.0, "pbar": 2.0, "p": 2.0}
_T2_TFLAG = {"chi": 0, "c": 0, "q": 1, "pbar": 0, "p": 1}


def _check_eps(epsilon: float, hi: float = 1.0) -> float:
    eps = float(epsilon)
    if not 0.0 <= eps <= hi + 1e-12:
        raise ValueError(f"epsilon {eps} outside [0, {hi}]")
    return eps


def lemma4_bound(
    variant: str,
    epsilon: float,
    d: Optional[int] = None,
    f_handle: Optional[Callable[[float], float]] = None,
    energy: Optional[float] = None,
    part_c: bool = False,
) -> float:
    """Conditional-mutual-information continuity bound, by variant.

    finite : 2 eps log d + 2 g(eps)
    qc     : eps log d + 2 g(eps)
    energy : 2 sqrt(2 eps) F(E/eps) + 2 g(sqrt(2 eps))
    pure   : the energy formula with eps replaced by eps^2/2
    The part_c flag (equal BC marginals) halves the g-term coefficient.
    """
    if variant not in LEMMA4_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {LEMMA4_VARIANTS}")
    eps = _check_eps(epsilon)
    if eps == 0.0:
        return 0.0
    g_coef = 1.0 if part_c else 2.0
    if variant in ("finite", "qc"):
        if d is None or d < 1:
            raise ValueError("finite variants need the support dimension d >= 1")
        main_coef = 2.0 if variant == "finite" else 1.0
        return main_coef * eps * math.log(d) + g_coef * g(eps)
    if f_handle is None or energy is None:
        raise ValueError("energy variants need an entropy handle and an energy cap")
    eff = eps * eps / 2.0 if variant == "pure" else eps
    root = math.sqrt(2.0 * eff)
    return 2.0 * root * f_handle(energy / eff) + g_coef * g(root)


def prop2_bound(
    epsilon: float, d_a: int, same_channel: bool = False, same_state: bool = False
) -> float:
    """Output-CMI bound 2 eps log d_A + 2 eps log 2 + 2 g(eps).

    same_channel drops the 2 eps log 2 term; same_state halves the g term.
    """
    eps = float(epsilon)
    if eps < 0:
        raise ValueError(f"epsilon {eps} must be >= 0")
    if eps == 0.0:
        return 0.0
    value = 2.0 * eps * math.log(d_a)
    if not same_channel:
        value += 2.0 * eps * LOG2
    value += (1.0 if same_state else 2.0) * g(eps)
    return value


def prop3_bound(
    epsilon: float,
    f_bar_handle: Callable[[float], float],
    e_bar: float,
    pure: bool = False,
) -> float:
    """Energy-constrained output-CMI bound 2 sqrt(2 eps) Fbar(Ebar/eps) + 2 g(sqrt(2 eps))."""
    eps = _check_eps(epsilon)
    if eps == 0.0:
        return 0.0
    eff = eps * eps / 2.0 if pure else eps
    root = math.sqrt(2.0 * eff)
    return 2.0 * root * f_bar_handle(e_bar / eff) + 2.0 * g(root)


def prop4_bound(epsilon: float, d_a: int, n: int) -> float:
    """n-copy bound n (2 eps log(2 d_A) + g(eps)) for eps = channel Bures distance."""
    eps = _check_eps(epsilon, hi=math.sqrt(2.0))
    if n < 1:
        raise ValueError(f"n = {n} must be >= 1")
    if eps == 0.0:
        return 0.0
    return n * (2.0 * eps * math.log(2.0 * d_a) + g(eps))


@dataclass(frozen=True)
class TstResult:
    value: float
    d_star: int
    scanned: int


def gamma_fn_from_hamiltonian(h: Hamiltonian) -> tuple[Callable[[int], Optional[float]], int]:
    """Numeric gamma(d) handle for the T functional plus its largest valid d."""

    def fn(d: int) -> Optional[float]:
        if d < h.ground_multiplicity:
            return None
        return gamma(h, d)

    return fn, h.dim


def gamma_fn_from_oscillator(spec: OscillatorSpec) -> tuple[Callable[[int], Optional[float]], Optional[int]]:
    """Closed-form gamma-hat handle; valid for every d above its domain floor."""
    floor = oscillator_gamma_hat_domain_min(spec)

    def fn(d: int) -> Optional[float]:
        if d < floor:
            return None
        return oscillator_gamma_hat_unchecked(spec, d)

    l = spec.modes
    scale = (l / math.e) * spec.geometric_energy
    shift = 2 * spec.ground_energy

    def batch(ds: np.ndarray) -> np.ndarray:
        vals = scale * ds.astype(float) ** (1.0 / l) - shift
        vals[ds < floor] = np.nan
        return vals

    fn.batch = batch
    return fn, None


def t_st(
    epsilon: float,
    e_bar: float,
    gamma_fn: Callable[[int], Optional[float]],
    s: int,
    t: int,
    d_cap: int = 10**6,
    d_max: Optional[int] = None,
    patience: int = 50,
) -> TstResult:
    """T_{s,t}(E, eps): minimum over integers d with gamma(d) >= 2 Ebar of

        (4 sqrt(2^s Ebar/gamma(d)) + 4 s t Ebar/gamma(d) + 2 eps) log d
        + 4 g(sqrt(2^s Ebar/gamma(d))).

    The scan runs upward from the smallest feasible d and stops once the
    objective has increased for `patience` consecutive d past the incumbent
    (the objective is not proven unimodal) or at the cap.
    """
    eps = float(epsilon)
    if eps < 0:
        raise ValueError(f"epsilon {eps} must be >= 0")
    if e_bar < -1e-12:
        raise ValueError(f"E - E_0 = {e_bar} must be >= 0")
    e_bar = max(e_bar, 0.0)
    if s not in (0, 1) or t not in (0, 1):
        raise ValueError("s and t are binary flags")
    hi = d_cap if d_max is None else min(d_cap, d_max)
    best = math.inf
    best_d = 0
    scanned = 0
    rise_run = 0
    prev_obj = None
    d = 1
    stop = False
    while d <= hi and not stop:
        block_end = min(d + 65536, hi + 1)
        ds = np.arange(d, block_end)
        if hasattr(gamma_fn, "batch"):
            gams = gamma_fn.batch(ds)
        else:
            gams = np.array(
                [g_val if (g_val := gamma_fn(int(dd))) is not None else np.nan for dd in ds]
            )
        with np.errstate(invalid="ignore"):
            feasible = ~np.isnan(gams)
            feasible &= np.where(feasible, gams, -1.0) >= 2.0 * e_bar
            if e_bar > 0.0:
                feasible &= np.where(feasible, gams, -1.0) > 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(feasible & (gams > 0), (2.0**s) * e_bar / gams, 0.0)
        root = np.sqrt(ratio)
        g_vals = (root + 1.0) * np.log(root + 1.0) - np.where(
            root > 0, root * np.log(np.where(root > 0, root, 1.0)), 0.0
        )
        obj = (4.0 * root + 4.0 * s * t * ratio + 2.0 * eps) * np.log(ds) + 4.0 * g_vals
        for i in range(ds.size):
            if not feasible[i]:
                continue
            scanned += 1
            o = float(obj[i])
            if o < best:
                best, best_d = o, int(ds[i])
                rise_run = 0
            elif prev_obj is not None and o >= prev_obj:
                rise_run += 1
                if rise_run >= patience:
                    stop = True
                    break
            else:
                rise_run = 0
            prev_obj = o
        d = block_end
    if best_d == 0:
        raise QStateError(
            f"no feasible d <= {hi} with gamma(d) >= 2(E - E_0) = {2 * e_bar}"
        )
    return TstResult(value=best, d_star=best_d, scanned=scanned)


def p_r(spec: OscillatorSpec, energy: float, epsilon: float, r: float) -> float:
    """Oscillator closed form replacing the T functional:

        2 eps (1 + 2r) F(E) + 4 l (2 + 1/r) eta(eps r) + 4 g(eps r) + 6 eps e^{-l}.
    """
    eps = float(epsilon)
    if eps < 0:
        raise ValueError(f"epsilon {eps} must be >= 0")
    if not 0.0 < r <= 1.0:
        raise ValueError(f"r = {r} outside (0, 1]")
    if eps * r > 1.0 + 1e-12:
        raise ValueError(f"eps * r = {eps * r} > 1: outside the formula's domain")
    if eps == 0.0:
        return 0.0
    l = spec.modes
    return (
        2.0 * eps * (1.0 + 2.0 * r) * oscillator_f(spec, energy)
        + 4.0 * l * (2.0 + 1.0 / r) * eta(eps * r)
        + 4.0 * g(eps * r)
        + 6.0 * eps * math.exp(-l)
    )


def prop6_bound(
    epsilon: float, d_a: int, same_channel: bool = False, same_ensemble: bool = False
) -> float:
    """Output-Holevo bound eps log d_A + eps log 2 + 2 g(eps).

    same_channel drops the eps log 2 term; same_ensemble halves the g term.
    """
    eps = float(epsilon)
    if eps < 0:
        raise ValueError(f"epsilon {eps} must be >= 0")
    if eps == 0.0:
        return 0.0
    value = eps * math.log(d_a)
    if not same_channel:
        value += eps * LOG2
    value += (1.0 if same_ensemble else 2.0) * g(eps)
    return value


def prop7_bound(epsilon: float, f_bar_handle: Callable[[float], float], e_bar: float) -> float:
    """Energy-constrained ensemble-Holevo bound; same shape as prop3 without the pure option."""
    return prop3_bound(epsilon, f_bar_handle, e_bar, pure=False)


def prop8_bound(epsilon: float, t_handle: Callable[[float], float]) -> float:
    """Composite T(eps) + g(eps) + 2 eps log 2 for the channel-side Holevo variation."""
    eps = float(epsilon)
    if eps < 0:
        raise ValueError(f"epsilon {eps} must be >= 0")
    if eps == 0.0:
        return 0.0
    return t_handle(eps) + g(eps) + 2.0 * eps * LOG2


def theorem1_bound(
    capacity: str,
    epsilon: float,
    d_a: Optional[int] = None,
    log_d_a: Optional[float] = None,
) -> float:
    """Input-dimension capacity bounds: a (eps log d_A + eps log 2) + b g(eps).

    Coefficients (a, b) per capacity: chi (1,1), c (2,1), q (2,1),
    pbar (2,2), p (4,2).  `log_d_a` supports closed-form sweeps at
    dimensions far beyond dense simulation.
    """
    if capacity not in CAPACITIES:
        raise ValueError(f"unknown capacity {capacity!r}; expected one of {CAPACITIES}")
    eps = _check_eps(epsilon, hi=math.sqrt(2.0))
    if (d_a is None) == (log_d_a is None):
        raise ValueError("give exactly one of d_a and log_d_a")
    ld = math.log(d_a) if d_a is not None else float(log_d_a)
    if eps == 0.0:
        return 0.0
    return _T1_MAIN[capacity] * eps * (ld + LOG2) + _T1_G[capacity] * g(eps)


def theorem2_bound(
    capacity: str, epsilon: float, t_fn: Callable[[int, float], float]
) -> float:
    """Input-energy capacity bounds m (T_t(eps) + g(eps) + 2 eps log 2).

    m = 1 for chi/c/q and 2 for pbar/p; the t flag is 1 for q and p, else 0.
    `t_fn(t, eps)` supplies T_{s,t}(E, eps) or its oscillator replacement
    P_r (which is t-independent).
    """
    if capacity not in CAPACITIES:
        raise ValueError(f"unknown capacity {capacity!r}; expected one of {CAPACITIES}")
    eps = float(epsilon)
    if eps < 0:
        raise ValueError(f"epsilon {eps} must be >= 0")
    if eps == 0.0:
        return 0.0
    m = _T2_MULT[capacity]
    t = _T2_TFLAG[capacity]
    return m * (t_fn(t, eps) + g(eps) + 2.0 * eps * LOG2)


@dataclass(frozen=True)
class ErasureCapacities:
    c_chi: float
    c: float
    q: float
    c_p: float
    c_p_bar: float

    def by_name(self, capacity: str) -> float:
        return {
            "chi": self.c_chi,
            "c": self.c,
            "q": self.q,
            "p": self.c_p,
            "pbar": self.c_p_bar,
        }[capacity]


def erasure_capacities(
    d: int, p: float, energy: Optional[tuple[Hamiltonian, float]] = None
) -> ErasureCapacities:
    """Closed-form erasure capacities: (1-p) M and max{(1-2p) M, 0}.

    M = log d unconstrained; with an energy cap (H, E), M = F_H(E).
    """
    if d < 2:
        raise ValueError(f"erasure input dimension {d} must be >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    if energy is None:
        m = math.log(d)
    else:
        h, e = energy
        m = f_h(h, e)
    classical = (1.0 - p) * m
    quantum = max((1.0 - 2.0 * p) * m, 0.0)
    return ErasureCapacities(c_chi=classical, c=classical, q=quantum, c_p=quantum, c_p_bar=quantum)


def erasure_delta(capacity: str, x: float, m: float) -> float:
    """C_*(erase(1/2 - x)) - C_*(erase(1/2)) from the closed forms: x M or 2 x M."""
    if capacity not in CAPACITIES:
        raise ValueError(f"unknown capacity {capacity!r}")
    if not 0.0 <= x <= 0.5:
        raise ValueError(f"x = {x} outside [0, 1/2]")
    return x * m if capacity in ("chi", "c") else 2.0 * x * m


def erasure_isometry_gap(x: float) -> float:
    """Closed-form operator norm of V_(1/2-x) - V_(1/2): sqrt(2 - sqrt(1-2x) - sqrt(1+2x))."""
    if not 0.0 <= x <= 0.5:
        raise ValueError(f"x = {x} outside [0, 1/2]")
    return math.sqrt(max(0.0, 2.0 - math.sqrt(1.0 - 2.0 * x) - math.sqrt(1.0 + 2.0 * x)))


@dataclass(frozen=True)
class OneShotMaxima:
    """Multistart-ascent lower bounds; never claimed to be the exact maxima."""

    q_bar_lower: float
    c_ea_lower: float
    converged: bool
    iterations: int


def _entropy_spectrum(mat: np.ndarray) -> float:
    w = np.clip(np.linalg.eigvalsh(mat), 0.0, None)
    return float(np.sum(eta(w)))


def _safe_log(mat: np.ndarray, floor: float = 1e-14) -> np.ndarray:
    w, u = np.linalg.eigh(mat)
    return (u * np.log(np.clip(w, floor, None))) @ u.conj().T


def one_shot_maxima(
    channel,
    constraint: Optional[EnergyConstraint] = None,
    budget: int = 120,
    starts: int = 4,
    seed: int = 0,
    gap_tol: float = 1e-6,
) -> OneShotMaxima:
    """Frank-Wolfe ascent lower bounds for the one-shot coherent information
    maximum and the channel mutual-information maximum.

    Both objectives are evaluated exactly at every iterate, so the returned
    values are always achievable lower bounds.
    """
    from scipy.optimize import minimize_scalar

    d_a, d_b, d_e = channel.d_a, channel.d_b, channel.d_e
    v = channel.isometry
    h_mat = e_cap = None
    if constraint is not None:
        h_mat = constraint.hamiltonian.to_matrix()
        e_cap = float(constraint.bound)

    def apply_both(rho):
        y = (v @ rho @ v.conj().T).reshape(d_b, d_e, d_b, d_e)
        main = np.einsum("beBe->bB", y)
        env = np.einsum("bebE->eE", y)
        return main, env

    def objective(rho, with_input_entropy: bool) -> float:
        main, env = apply_both(rho)
        val = _entropy_spectrum(main) - _entropy_spectrum(env)
        if with_input_entropy:
            val += _entropy_spectrum(rho)
        return val

    def gradient(rho, with_input_entropy: bool) -> np.ndarray:
        main, env = apply_both(rho)
        vt = v.reshape(d_b, d_e, d_a)
        log_main = _safe_log(main)
        log_env = _safe_log(env)
        g1 = np.einsum("bea,bB,BeA->aA", vt.conj(), log_main, vt)
        g2 = np.einsum("bea,eE,bEA->aA", vt.conj(), log_env, vt)
        grad = -g1 + g2
        if with_input_entropy:
            grad = grad - _safe_log(rho)
        return (grad + grad.conj().T) / 2.0

    from .energy import gibbs_state
    from .metrics import _feasible_mix

    rng = np.random.default_rng(seed)
    start_list = [np.eye(d_a, dtype=np.complex128) / d_a]
    if constraint is not None:
        try:
            start_list.append(gibbs_state(constraint.hamiltonian, e_cap).entries)
        except QStateError:
            pass
    for _ in range(max(starts - len(start_list), 0)):
        gmat = rng.standard_normal((d_a, d_a)) + 1j * rng.standard_normal((d_a, d_a))
        w = gmat @ gmat.conj().T
        start_list.append(w / np.trace(w).real)
    if constraint is not None:
        start_list = [_feasible_mix(s, h_mat, e_cap) for s in start_list]

    results = {}
    iterations = 0
    all_converged = True
    for with_h, key in ((False, "q_bar"), (True, "c_ea")):
        best = -math.inf
        converged = False
        for rho0 in start_list:
            rho = rho0
            for _ in range(budget):
                iterations += 1
                val = objective(rho, with_h)
                best = max(best, val)
                grad = gradient(rho, with_h)
                tau, _, _ = _constrained_minimum(-grad, h_mat, e_cap)
                gap = float(np.real(np.trace(grad @ (tau - rho))))
                if gap <= gap_tol:
                    converged = True
                    break

                def line(tt: float) -> float:
                    return -objective((1 - tt) * rho + tt * tau, with_h)

                res = minimize_scalar(
                    line, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-6}
                )
                t_opt = float(res.x)
                if t_opt < 1e-12:
                    break
                rho = (1 - t_opt) * rho + t_opt * tau
            best = max(best, objective(rho, with_h))
        results[key] = best
        all_converged = all_converged and converged
    return OneShotMaxima(
        q_bar_lower=results["q_bar"],
        c_ea_lower=results["c_ea"],
        converged=all_converged,
        iterations=iterations,
    )
