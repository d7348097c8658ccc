import math

import numpy as np
import pytest

from chanbound.bounds import (
    CAPACITIES,
    erasure_capacities,
    erasure_delta,
    erasure_isometry_gap,
    gamma_fn_from_hamiltonian,
    gamma_fn_from_oscillator,
    lemma4_bound,
    one_shot_maxima,
    p_r,
    prop2_bound,
    prop3_bound,
    prop4_bound,
    prop6_bound,
    prop7_bound,
    prop8_bound,
    t_st,
    theorem1_bound,
    theorem2_bound,
)
from chanbound.channels import ErasureSpec, erasure_channel, identity_channel, random_channel
from chanbound.energy import Hamiltonian, OscillatorSpec, f_h, oscillator_f, oscillator_f_bar
from chanbound.metrics import EnergyConstraint

LOG2 = math.log(2.0)


def g_oracle(x):
    return 0.0 if x <= 0 else (x + 1.0) * math.log(x + 1.0) - x * math.log(x)


def eta_oracle(x):
    return 0.0 if x <= 0 else -x * math.log(x)


EPS_GRID = np.linspace(0.004, 0.8, 20)


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class TestLemma4Evaluator:
    def test_zero_epsilon(self):
        for variant, kw in (
            ("finite", dict(d=4)),
            ("qc", dict(d=4)),
            ("energy", dict(f_handle=lambda e: 1.0, energy=1.0)),
            ("pure", dict(f_handle=lambda e: 1.0, energy=1.0)),
        ):
            assert lemma4_bound(variant, 0.0, **kw) == 0.0

    def test_finite_oracle_grid(self):
        for eps in EPS_GRID:
            for d in (2, 4, 16):
                oracle = 2 * eps * math.log(d) + 2 * g_oracle(eps)
                assert rel_err(lemma4_bound("finite", eps, d=d), oracle) < 1e-12

    def test_qc_is_finite_minus_half_main(self):
        for eps in EPS_GRID:
            diff = lemma4_bound("finite", eps, d=8) - lemma4_bound("qc", eps, d=8)
            assert abs(diff - eps * math.log(8)) < 1e-12

    def test_part_c_halves_g_term(self):
        for eps in EPS_GRID:
            diff = lemma4_bound("finite", eps, d=4) - lemma4_bound("finite", eps, d=4, part_c=True)
            assert abs(diff - g_oracle(eps)) < 1e-12

    def test_energy_oracle(self):
        spec = OscillatorSpec(1, (1.0,))
        handle = lambda e: oscillator_f(spec, e)
        for eps in EPS_GRID:
            if eps > 1:
                continue
            root = math.sqrt(2 * eps)
            oracle = 2 * root * (math.log((1.5 / eps + 0.5) / 1.0) + 1.0) + 2 * g_oracle(root)
            got = lemma4_bound("energy", eps, f_handle=handle, energy=1.5)
            assert rel_err(got, oracle) < 1e-12

    def test_pure_substitutes_eps_squared_half(self):
        handle = lambda e: 3.0
        for eps in EPS_GRID:
            expect = lemma4_bound("energy", eps * eps / 2.0, f_handle=handle, energy=1.0)
            assert rel_err(lemma4_bound("pure", eps, f_handle=handle, energy=1.0), expect) < 1e-12

    def test_domain_rejections(self):
        with pytest.raises(ValueError):
            lemma4_bound("finite", 1.2, d=2)
        with pytest.raises(ValueError):
            lemma4_bound("bogus", 0.1, d=2)


class TestPropositionEvaluators:
    def test_prop2_oracle(self):
        for eps in EPS_GRID:
            for d_a in (2, 8):
                oracle = 2 * eps * math.log(d_a) + 2 * eps * LOG2 + 2 * g_oracle(eps)
                assert rel_err(prop2_bound(eps, d_a), oracle) < 1e-12

    def test_prop2_flags(self):
        for eps in EPS_GRID:
            assert abs(prop2_bound(eps, 2) - prop2_bound(eps, 2, same_channel=True) - 2 * eps * LOG2) < 1e-12
            assert abs(prop2_bound(eps, 2) - prop2_bound(eps, 2, same_state=True) - g_oracle(eps)) < 1e-12

    def test_prop3_oracle_and_monotone(self):
        spec = OscillatorSpec(1, (1.0,))
        fbar = lambda e: oscillator_f_bar(spec, e)
        vals = []
        for eps in EPS_GRID:
            root = math.sqrt(2 * eps)
            oracle = 2 * root * (math.log((4.5 / eps + 1.0)) + 1.0) + 2 * g_oracle(root)
            got = prop3_bound(eps, fbar, 4.5)
            assert rel_err(got, oracle) < 1e-12
            vals.append(got)
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_prop3_pure_tightens(self):
        spec = OscillatorSpec(1, (1.0,))
        fbar = lambda e: oscillator_f_bar(spec, e)
        for eps in (0.05, 0.2, 0.6, 1.0):
            assert prop3_bound(eps, fbar, 4.5, pure=True) < prop3_bound(eps, fbar, 4.5)

    def test_prop3_domain(self):
        with pytest.raises(ValueError):
            prop3_bound(1.2, lambda e: 1.0, 1.0)
        assert prop3_bound(0.0, lambda e: 1.0, 1.0) == 0.0

    def test_prop4_oracle(self):
        for eps in EPS_GRID:
            for n in (1, 2, 3):
                oracle = n * (2 * eps * math.log(4.0) + g_oracle(eps))
                assert rel_err(prop4_bound(eps, 2, n), oracle) < 1e-12

    def test_prop4_linear_in_n(self):
        assert abs(prop4_bound(0.1, 2, 3) - 3 * prop4_bound(0.1, 2, 1)) < 1e-12

    def test_prop6_oracle_and_flags(self):
        for eps in EPS_GRID:
            oracle = eps * math.log(4) + eps * LOG2 + 2 * g_oracle(eps)
            assert rel_err(prop6_bound(eps, 4), oracle) < 1e-12
            assert abs(prop6_bound(eps, 4) - prop6_bound(eps, 4, same_channel=True) - eps * LOG2) < 1e-12
            assert abs(prop6_bound(eps, 4) - prop6_bound(eps, 4, same_ensemble=True) - g_oracle(eps)) < 1e-12

    def test_prop7_matches_prop3_shape(self):
        fbar = lambda e: 2.0 + 0.1 * e
        for eps in (0.05, 0.3, 0.9):
            assert prop7_bound(eps, fbar, 1.0) == prop3_bound(eps, fbar, 1.0)

    def test_prop8_composite_structure(self):
        t_handle = lambda e: 1.5 + e
        for eps in EPS_GRID:
            oracle = (1.5 + eps) + g_oracle(eps) + 2 * eps * LOG2
            assert rel_err(prop8_bound(eps, t_handle), oracle) < 1e-12
        assert prop8_bound(0.0, t_handle) == 0.0


class TestTFunctional:
    def setup_method(self):
        self.spec = OscillatorSpec(1, (1.0,), truncation=40)
        self.gamma_fn, self.d_max = gamma_fn_from_oscillator(self.spec)

    def test_matches_direct_scan_oracle_exactly(self):
        eps, e_bar = 0.01, 4.5
        got = t_st(eps, e_bar, self.gamma_fn, s=0, t=0)
        best_val, best_d = math.inf, 0
        for d in range(3, 10**6 + 1):
            gam = (1.0 / math.e) * 1.0 * float(d) ** 1.0 - 1.0
            if gam <= 0 or gam < 2 * e_bar:
                continue
            ratio = 1.0 * e_bar / gam
            r = math.sqrt(ratio)
            obj = (4.0 * r + 2.0 * eps) * math.log(d) + 4.0 * (
                (r + 1.0) * math.log(r + 1.0) - r * math.log(r)
            )
            if obj < best_val:
                best_val, best_d = obj, d
        assert got.value == best_val
        assert got.d_star == best_d

    def test_monotone_in_epsilon(self):
        vals = [t_st(e, 1.5, self.gamma_fn, s=0, t=0).value for e in (0.0, 0.05, 0.2, 0.5)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_epsilon_zero_floor(self):
        res = t_st(0.0, 1.5, self.gamma_fn, s=0, t=0)
        assert res.value >= 0.0
        # equals the d-minimum of the eps-free expression by construction
        probe = t_st(0.0, 1.5, self.gamma_fn, s=0, t=1)
        assert res.value == probe.value  # s=0 kills the st term

    def test_decreasing_toward_zero_grid(self):
        vals = [t_st(e, 4.5, self.gamma_fn, s=0, t=0).value for e in (1e-2, 1e-3, 1e-4, 1e-5)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_s1_t1_term(self):
        v00 = t_st(0.1, 1.5, self.gamma_fn, s=1, t=0).value
        v11 = t_st(0.1, 1.5, self.gamma_fn, s=1, t=1).value
        assert v11 >= v00

    def test_numeric_handle_infeasible_rejected(self):
        h = Hamiltonian(np.array([0.0, 1.0]))
        gamma_fn, d_max = gamma_fn_from_hamiltonian(h)
        from chanbound.qstate import QStateError

        with pytest.raises(QStateError):
            t_st(0.1, 5.0, gamma_fn, s=0, t=0, d_max=d_max)

    def test_numeric_handle_small_spectrum(self):
        h = Hamiltonian(np.array([0.0, 1.0, 2.0, 3.0]))
        gamma_fn, d_max = gamma_fn_from_hamiltonian(h)
        res = t_st(0.2, 0.6, gamma_fn, s=1, t=0, d_max=d_max)
        assert res.d_star <= 4
        assert res.value > 0


class TestPR:
    def setup_method(self):
        self.spec = OscillatorSpec(1, (1.0,), truncation=40)

    def test_oracle_grid(self):
        for eps in EPS_GRID:
            for r in (0.3, 1.0):
                f_val = math.log((5.0 + 0.5) / 1.0) + 1.0
                oracle = (
                    2 * eps * (1 + 2 * r) * f_val
                    + 4 * 1 * (2 + 1 / r) * eta_oracle(eps * r)
                    + 4 * g_oracle(eps * r)
                    + 6 * eps * math.exp(-1.0)
                )
                assert rel_err(p_r(self.spec, 5.0, eps, r), oracle) < 1e-12

    def test_zero_epsilon(self):
        assert p_r(self.spec, 5.0, 0.0, 1.0) == 0.0

    def test_domain(self):
        with pytest.raises(ValueError):
            p_r(self.spec, 5.0, 1.5, 1.0)  # eps * r > 1
        with pytest.raises(ValueError):
            p_r(self.spec, 5.0, 0.1, 0.0)

    def test_near_optimal_r_asymptotics(self):
        # with r ~ 1/F(E) the excess of the bound over the main term
        # 2 eps F(E) is o(F(E)): the normalized excess falls along an E grid
        eps = 1e-3
        excess_per_f = []
        for e in (50.0, 200.0, 1000.0, 5000.0):
            f_val = oscillator_f(self.spec, e)
            excess = p_r(self.spec, e, eps, 1.0 / f_val) - 2 * eps * f_val
            assert excess > 0
            excess_per_f.append(excess / f_val)
        assert all(a > b for a, b in zip(excess_per_f, excess_per_f[1:]))
        assert excess_per_f[-1] < 0.5 * excess_per_f[0]


class TestTheoremEvaluators:
    def test_thm1_coefficient_table(self):
        eps, d_a = 0.05, 1024
        main = {"chi": 1, "c": 2, "q": 2, "pbar": 2, "p": 4}
        gcoef = {"chi": 1, "c": 1, "q": 1, "pbar": 2, "p": 2}
        for cap in CAPACITIES:
            oracle = main[cap] * eps * (math.log(d_a) + LOG2) + gcoef[cap] * g_oracle(eps)
            assert rel_err(theorem1_bound(cap, eps, d_a=d_a), oracle) < 1e-12

    def test_thm1_zero(self):
        for cap in CAPACITIES:
            assert theorem1_bound(cap, 0.0, d_a=2) == 0.0

    def test_thm1_log_dim_variant(self):
        val_a = theorem1_bound("q", 0.01, d_a=64)
        val_b = theorem1_bound("q", 0.01, log_d_a=math.log(64))
        assert rel_err(val_a, val_b) < 1e-12

    def test_thm2_structure(self):
        t_fn = lambda t, e: (2.0 if t else 1.0) + e
        for eps in (0.05, 0.2):
            assert rel_err(
                theorem2_bound("chi", eps, t_fn), (1.0 + eps) + g_oracle(eps) + 2 * eps * LOG2
            ) < 1e-12
            assert rel_err(
                theorem2_bound("q", eps, t_fn), (2.0 + eps) + g_oracle(eps) + 2 * eps * LOG2
            ) < 1e-12
            assert rel_err(
                theorem2_bound("pbar", eps, t_fn),
                2 * ((1.0 + eps) + g_oracle(eps) + 2 * eps * LOG2),
            ) < 1e-12
            assert rel_err(
                theorem2_bound("p", eps, t_fn),
                2 * ((2.0 + eps) + g_oracle(eps) + 2 * eps * LOG2),
            ) < 1e-12


class TestErasureClosedForms:
    def test_half_erasure_kills_quantum(self):
        caps = erasure_capacities(4, 0.5)
        assert caps.q == 0.0 and caps.c_p == 0.0 and caps.c_p_bar == 0.0
        assert abs(caps.c_chi - 0.5 * math.log(4)) < 1e-12

    def test_quarter_erasure(self):
        caps = erasure_capacities(2, 0.25)
        assert abs(caps.c_chi - 0.75 * math.log(2)) < 1e-12
        assert abs(caps.q - 0.5 * math.log(2)) < 1e-12

    def test_energy_constrained_scale(self):
        spec = OscillatorSpec(1, (1.0,), truncation=40)
        h = spec.to_hamiltonian()
        caps = erasure_capacities(h.dim, 0.25, energy=(h, 5.0))
        m = f_h(h, 5.0)
        assert abs(caps.c_chi - 0.75 * m) < 1e-12
        assert abs(caps.q - 0.5 * m) < 1e-12

    def test_delta_formulas(self):
        assert abs(erasure_delta("chi", 0.05, math.log(8)) - 0.05 * math.log(8)) < 1e-15
        assert abs(erasure_delta("q", 0.05, math.log(8)) - 0.1 * math.log(8)) < 1e-15

    def test_isometry_gap_formula_vs_matrices(self):
        from chanbound.qstate import operator_norm

        for d in (2, 3, 8):
            for x in (0.01, 0.05, 0.1, 0.2):
                va = erasure_channel(ErasureSpec(d, 0.5 - x)).isometry
                vb = erasure_channel(ErasureSpec(d, 0.5)).isometry
                assert abs(operator_norm(va - vb) - erasure_isometry_gap(x)) <= 1e-10


class TestOneShotMaxima:
    def test_identity_channel_reaches_log_d(self):
        res = one_shot_maxima(identity_channel(3), seed=0)
        assert res.q_bar_lower >= math.log(3) - 1e-4

    def test_erasure_reaches_closed_form(self):
        for p in (0.1, 0.3):
            res = one_shot_maxima(erasure_channel(ErasureSpec(2, p)), seed=1)
            assert res.q_bar_lower >= (1 - 2 * p) * math.log(2) - 1e-3

    def test_c_ea_dominates_q_bar(self):
        for k in range(3):
            ch = random_channel(2, 2, 2, seed=600 + k)
            res = one_shot_maxima(ch, seed=k)
            assert res.c_ea_lower >= res.q_bar_lower - 1e-12

    def test_constrained_stays_below_unconstrained(self):
        h = Hamiltonian(np.arange(3.0))
        ch = random_channel(3, 2, 3, seed=60)
        free = one_shot_maxima(ch, seed=2)
        capped = one_shot_maxima(ch, EnergyConstraint(h, 0.7), seed=2)
        assert capped.q_bar_lower <= free.q_bar_lower + 1e-6
        assert capped.c_ea_lower <= free.c_ea_lower + 1e-6


class TestOscillatorSubstitution:
    def test_prop3_closed_form_dominates_numeric(self):
        # the oscillator closed form upper-bounds the realized max entropy,
        # so substituting it can only loosen (never break) the bound
        from chanbound.energy import f_bar, oscillator_f_bar

        spec = OscillatorSpec(1, (1.0,), truncation=60)
        h = spec.to_hamiltonian()
        for eps in (0.05, 0.2, 0.6):
            loose = prop3_bound(eps, lambda e: oscillator_f_bar(spec, e), 4.5)
            tight = prop3_bound(eps, lambda e: f_bar(h, e), 4.5)
            assert loose >= tight - 1e-12
