import math
import warnings

import numpy as np
import pytest

from chanbound.energy import (
    EnergyDomainError,
    Hamiltonian,
    OscillatorSpec,
    TruncationTailWarning,
    check_s_flag,
    f_bar,
    f_bar_inverse,
    f_h,
    gamma,
    gibbs_lambda,
    gibbs_state,
    oscillator_f,
    oscillator_gamma_hat,
    oscillator_gamma_hat_domain_min,
    truncate_pure_state,
)
from chanbound.entropic import g, von_neumann_entropy
from chanbound.harness.generators import _embedded_hamiltonian, _ground_product_vector
from chanbound.harness.suites import _feasible_pure
from chanbound.qstate import (
    HermitianOperator,
    QStateError,
    SystemLayout,
    jordan_parts,
    partial_trace,
    partial_trace_hermitian,
    trace_norm,
)


@pytest.fixture
def osc60():
    return OscillatorSpec(1, (1.0,), truncation=60)


class TestHamiltonian:
    def test_ordering_enforced(self):
        with pytest.raises(QStateError):
            Hamiltonian(np.array([1.0, 0.0]))

    def test_ground_data(self):
        h = Hamiltonian(np.array([0.5, 0.5, 1.0, 2.0]))
        assert h.ground_energy == 0.5
        assert h.ground_multiplicity == 2
        assert h.max_energy == 2.0

    def test_negative_ground_rejected(self):
        with pytest.raises(QStateError):
            Hamiltonian(np.array([-0.5, 1.0]))


class TestGibbs:
    def test_qubit_half_energy(self):
        h = Hamiltonian(np.array([0.0, 1.0]))
        assert np.allclose(gibbs_state(h, 0.5).entries, np.eye(2) / 2, atol=1e-10)

    def test_ground_energy_returns_ground_mixture(self):
        h = Hamiltonian(np.array([0.0, 0.0, 1.0]))
        rho = gibbs_state(h, 0.0)
        assert np.allclose(rho.entries, np.diag([0.5, 0.5, 0.0]), atol=1e-12)
        assert abs(f_h(h, 0.0) - math.log(2)) < 1e-12

    def test_energy_solved_to_tolerance(self, osc60):
        h = osc60.to_hamiltonian()
        for e in (1.0, 2.5, 7.0):
            rho = gibbs_state(h, e)
            got = float(np.real(np.trace(h.to_matrix() @ rho.entries)))
            assert abs(got - e) <= 1e-9

    def test_out_of_range_rejected(self):
        h = Hamiltonian(np.array([0.0, 1.0]))
        with pytest.raises(EnergyDomainError):
            gibbs_state(h, 1.5)
        with pytest.raises(EnergyDomainError):
            gibbs_state(h, -0.1)

    def test_lambda_strictly_decreasing(self, osc60):
        h = osc60.to_hamiltonian()
        grid = [0.8, 1.5, 3.0, 6.0, 12.0]
        lams = [gibbs_lambda(h, e) for e in grid]
        assert all(a > b for a, b in zip(lams, lams[1:]))

    def test_entropy_maximizer(self, gen):
        h = Hamiltonian(np.arange(4.0))
        e_cap = 1.1
        lay = SystemLayout([("A", 4)])
        best = f_h(h, e_cap)
        for _ in range(100):
            rho = gen.energy_feasible_density(lay, "A", h, e_cap)
            assert von_neumann_entropy(rho) <= best + 1e-8

    def test_tail_warning_on_truncated_spectra(self):
        spec = OscillatorSpec(1, (1.0,), truncation=8)
        h = spec.to_hamiltonian()
        with pytest.warns(TruncationTailWarning):
            gibbs_state(h, 5.0)
        # untruncated finite spectra stay silent
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            gibbs_state(Hamiltonian(np.arange(8.0)), 5.0)


class TestMaxEntropyFunctions:
    def test_f_at_ground_is_log_multiplicity(self):
        h = Hamiltonian(np.array([0.0, 0.0, 0.0, 1.0]))
        assert abs(f_h(h, 0.0) - math.log(3)) < 1e-12

    def test_strictly_increasing_then_concave(self, osc60):
        h = osc60.to_hamiltonian()
        grid = np.linspace(0.6, 10.0, 12)
        vals = [f_h(h, e) for e in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        # midpoint concavity on the grid
        for a, b, c in zip(vals, vals[1:], vals[2:]):
            assert b >= (a + c) / 2 - 1e-9

    def test_oscillator_closed_form_matches_gibbs_entropy(self, osc60):
        h = osc60.to_hamiltonian()
        assert abs(f_h(h, 2.0) - g(2.0 - 0.5)) < 1e-6

    def test_f_bar_inverse_round_trip(self, osc60):
        h = osc60.to_hamiltonian()
        for e_bar in (0.4, 1.3, 4.0):
            assert abs(f_bar_inverse(h, f_bar(h, e_bar)) - e_bar) < 1e-8

    def test_inverse_domain_checks(self):
        h = Hamiltonian(np.array([0.0, 0.0, 1.0]))
        with pytest.raises(EnergyDomainError):
            f_bar_inverse(h, math.log(2) - 0.1)
        with pytest.raises(EnergyDomainError):
            f_bar_inverse(h, math.log(3) + 0.1)

    def test_gamma_nondecreasing(self, osc60):
        h = osc60.to_hamiltonian()
        vals = [gamma(h, d) for d in range(1, 30)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        assert gamma(h, 1) == 0.0

    def test_gamma_memoized_identity(self, osc60):
        h = osc60.to_hamiltonian()
        assert gamma(h, 7) == gamma(h, 7)


class TestOscillatorClosedForms:
    def test_f_formula_instance(self):
        spec = OscillatorSpec(1, (1.0,))
        assert abs(oscillator_f(spec, 5.0) - (math.log(5.5) + 1.0)) < 1e-14

    def test_ground_and_geometric_energy(self):
        spec = OscillatorSpec(2, (1.0, 4.0), hbar=1.0)
        assert spec.ground_energy == 2.5
        assert abs(spec.geometric_energy - 2.0) < 1e-12

    def test_gamma_hat_below_gamma(self, osc60):
        h = osc60.to_hamiltonian()
        for d in range(3, 21):
            assert oscillator_gamma_hat(osc60, d) <= gamma(h, d) + 1e-9

    def test_gamma_hat_domain(self, osc60):
        dmin = oscillator_gamma_hat_domain_min(osc60)
        assert dmin == 3
        with pytest.raises(EnergyDomainError):
            oscillator_gamma_hat(osc60, 2)

    def test_closed_form_upper_bounds_truncated(self, osc60):
        h = osc60.to_hamiltonian()
        for e in (1.0, 2.0, 5.0, 10.0):
            assert oscillator_f(osc60, e) >= f_h(h, e) - 1e-12

    def test_sharpness_improves_with_energy(self, osc60):
        h = osc60.to_hamiltonian()
        gaps = [oscillator_f(osc60, e) - f_h(h, e) for e in (2.0, 5.0, 10.0)]
        assert all(gap > 0 for gap in gaps)
        assert gaps[0] > gaps[-1]


class TestSFlag:
    def test_oscillator_closed_form_is_zero(self):
        assert check_s_flag(OscillatorSpec(2, (1.0, 2.0))) == 0

    def test_two_level_grid_decision(self):
        assert check_s_flag(Hamiltonian(np.array([0.0, 1.0]))) in (0, 1)

    def test_constant_spectrum(self):
        assert check_s_flag(Hamiltonian(np.zeros(4))) == 0


class TestTruncation:
    def _ham(self):
        return Hamiltonian(np.arange(8.0))

    def test_full_rank_is_identity(self, gen):
        h = self._ham()
        lay = SystemLayout([("A", 8), ("B", 4)])
        h_full = _embedded_hamiltonian(lay, "A", h)
        gvec = _ground_product_vector(lay, "A", h)
        psi = _feasible_pure(gen, lay, h_full, gvec, 1.0)
        out = truncate_pure_state(psi, "A", h, 1.0, 8)
        overlap = abs(np.vdot(out.amplitudes, psi.amplitudes))
        assert overlap > 1 - 1e-10

    def test_all_four_claims(self, gen):
        h = self._ham()
        lay = SystemLayout([("A", 8), ("B", 4)])
        h_full = _embedded_hamiltonian(lay, "A", h)
        gvec = _ground_product_vector(lay, "A", h)
        h_bar = h.to_matrix(shift=h.ground_energy)
        for trial in range(40):
            d = 2 if trial % 2 == 0 else 4
            e_cap = min(0.9 * gamma(h, d), 1.2)
            psi = _feasible_pure(gen, lay, h_full, gvec, e_cap)
            sig = truncate_pure_state(psi, "A", h, e_cap, d)
            rho_m, sig_m = psi.to_density(), sig.to_density()
            sig_a = partial_trace(sig_m, ("A",)).entries
            assert int((np.linalg.eigvalsh(sig_a) > 1e-10).sum()) <= d
            assert float(np.real(np.trace(h.to_matrix() @ sig_a))) <= e_cap + 1e-9
            dist = 0.5 * trace_norm(rho_m.entries - sig_m.entries)
            assert dist <= math.sqrt(e_cap / gamma(h, d)) + 1e-9
            diff = HermitianOperator.difference(rho_m, sig_m)
            tn = trace_norm(diff.entries)
            for part in jordan_parts(diff):
                reduced = partial_trace_hermitian(part, ("A",))
                val = tn * float(np.real(np.trace(h_bar @ reduced.entries)))
                assert val <= 2 * e_cap + 1e-9

    def test_delta_bound_intermediate(self, gen):
        # the dropped Schmidt weight obeys delta_d <= E_bar / gamma(d)
        h = self._ham()
        lay = SystemLayout([("A", 8), ("B", 4)])
        h_full = _embedded_hamiltonian(lay, "A", h)
        gvec = _ground_product_vector(lay, "A", h)
        for _ in range(10):
            d = 4
            e_cap = 0.8 * gamma(h, d)
            psi = _feasible_pure(gen, lay, h_full, gvec, e_cap)
            sig = truncate_pure_state(psi, "A", h, e_cap, d)
            overlap2 = abs(np.vdot(psi.amplitudes, sig.amplitudes)) ** 2
            delta = 1 - overlap2
            assert delta <= e_cap / gamma(h, d) + 1e-9

    def test_preconditions(self, gen):
        h = self._ham()
        lay = SystemLayout([("A", 8), ("B", 4)])
        h_full = _embedded_hamiltonian(lay, "A", h)
        gvec = _ground_product_vector(lay, "A", h)
        psi = _feasible_pure(gen, lay, h_full, gvec, 1.0)
        with pytest.raises(EnergyDomainError):
            truncate_pure_state(psi, "A", h, 1.0, 1)  # gamma(1) = 0 < E_bar
        hot = gen.pure(lay)
        energy = float(np.real(hot.amplitudes.conj() @ h_full @ hot.amplitudes))
        with pytest.raises(EnergyDomainError):
            truncate_pure_state(hot, "A", h, energy - 1.0, 4)
