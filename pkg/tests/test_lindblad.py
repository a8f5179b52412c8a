import math

import numpy as np
import pytest
from scipy.integrate import quad

from twistcav import (
    BathParams,
    CouplingSpectrum,
    DensityMatrix2,
    DomainError,
    DynamicsParams,
    StabilityGuardError,
    ValidityWarning,
    analytic_solution,
    analytic_trajectory,
    bose_occupation,
    cavity_frequencies,
    coupling_constant,
    decay_rate,
    dynamics_from_bath,
    evolve,
    frequency_shift,
    lindblad_rhs,
    steady_state,
)
from twistcav.constants import BOLTZMANN, HBAR
from twistcav.lindblad import SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z


class TestBoseOccupation:
    def test_zero_temperature(self):
        assert bose_occupation(1e12, 0.0) == 0.0

    def test_quartz_room_temperature(self, quartz_cavity):
        delta_omega = cavity_frequencies(quartz_cavity).delta_omega
        n = bose_occupation(delta_omega, 300.0)
        beta_dw = HBAR * delta_omega / (BOLTZMANN * 300.0)
        assert beta_dw == pytest.approx(0.0897, rel=1e-2)
        assert n == pytest.approx(1.0 / math.expm1(beta_dw), rel=1e-14)
        assert n == pytest.approx(10.66, rel=1e-3)

    def test_log_two_gives_unity(self):
        delta_omega = 7.3e11
        temperature = HBAR * delta_omega / (BOLTZMANN * math.log(2.0))
        assert bose_occupation(delta_omega, temperature) == pytest.approx(1.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bose_occupation(0.0, 300.0)
        with pytest.raises(DomainError):
            bose_occupation(-1.0, 300.0)
        with pytest.raises(DomainError):
            bose_occupation(1.0, -5.0)


class TestCouplingSpectrum:
    def test_validation(self):
        with pytest.raises(DomainError):
            CouplingSpectrum.flat(-1.0, 2.0)
        with pytest.raises(DomainError):
            CouplingSpectrum.flat(1.0, 2.0, omega_min=3.0)
        with pytest.raises(DomainError):
            CouplingSpectrum.lorentzian(1.0, 2.0, width=0.1, quality=10)
        with pytest.raises(DomainError):
            CouplingSpectrum.lorentzian(1.0, 2.0)
        with pytest.raises(DomainError):
            CouplingSpectrum.lorentzian(1.0, 2.0, width=-0.1)

    def test_flat_from_coupling(self):
        spectrum = CouplingSpectrum.flat_from_coupling(3.0, omega_max=6.0)
        assert spectrum.g_squared(1.0) == pytest.approx(9.0 / 6.0)

    def test_support_mask(self):
        spectrum = CouplingSpectrum.flat(2.0, omega_max=5.0, omega_min=1.0)
        assert spectrum.g_squared(0.5) == 0.0
        assert spectrum.g_squared(3.0) == 2.0
        assert spectrum.g_squared(5.5) == 0.0
        assert np.array_equal(spectrum.g_squared(np.array([0.5, 3.0])), [0.0, 2.0])

    def test_lorentzian_peak(self):
        spectrum = CouplingSpectrum.lorentzian(2.0, center=10.0, width=0.5)
        assert spectrum.g_squared(10.0) == pytest.approx(4.0 / (math.pi * 0.5), rel=1e-14)
        assert spectrum.g_squared(10.0 + 0.5) == pytest.approx(
            0.5 * spectrum.g_squared(10.0), rel=1e-14
        )

    def test_lorentzian_quality_parameterization(self):
        spectrum = CouplingSpectrum.lorentzian(1.0, center=100.0, quality=50)
        assert spectrum.width == pytest.approx(2.0)
        assert spectrum.omega_max == pytest.approx(100.0 + 40.0)


class TestDecayRate:
    def test_zero_spectrum(self):
        assert decay_rate(CouplingSpectrum.flat(0.0, 10.0), 5.0) == 0.0

    def test_resonant_lorentzian_closed_form(self):
        g, kappa = 0.7, 0.02
        spectrum = CouplingSpectrum.lorentzian(g, center=3.0, width=kappa)
        assert decay_rate(spectrum, 3.0) == pytest.approx(2 * g * g / kappa, rel=1e-14)

    def test_quartz_lorentzian(self, quartz_cavity):
        delta_omega = cavity_frequencies(quartz_cavity).delta_omega
        g = coupling_constant(quartz_cavity)
        spectrum = CouplingSpectrum.lorentzian(g, center=delta_omega, quality=1000)
        gamma = decay_rate(spectrum, delta_omega)
        assert gamma == pytest.approx(2 * g * g * 1000 / delta_omega, rel=1e-12)
        assert gamma == pytest.approx(9.6e11, rel=5e-3)

    def test_outside_support_warns(self):
        spectrum = CouplingSpectrum.flat(1.0, omega_max=5.0, omega_min=1.0)
        with pytest.warns(ValidityWarning):
            assert decay_rate(spectrum, 8.0) == 0.0


class TestBathParams:
    def test_exactly_one_temperature_input(self):
        spectrum = CouplingSpectrum.flat(1.0, 10.0)
        with pytest.raises(DomainError):
            BathParams(spectrum=spectrum)
        with pytest.raises(DomainError):
            BathParams(spectrum=spectrum, temperature=10.0, beta_freq=1.0)

    def test_zero_temperature_occupation(self):
        bath = BathParams(spectrum=CouplingSpectrum.flat(1.0, 10.0), temperature=0.0)
        assert bath.is_zero_temperature
        assert bath.occupation(3.0) == 0.0

    def test_beta_freq_occupation(self):
        delta_omega = 4.0
        bath = BathParams(
            spectrum=CouplingSpectrum.flat(1.0, 10.0),
            beta_freq=math.log(2.0) / delta_omega,
        )
        assert bath.occupation(delta_omega) == pytest.approx(1.0, abs=1e-13)


class TestFrequencyShift:
    def test_flat_zero_temperature_closed_form(self):
        # delta = (value/2) ln(dw / (wmax - dw))
        value, delta_omega, omega_max = 0.8, 1.0, 5.0
        bath = BathParams(
            spectrum=CouplingSpectrum.flat(value, omega_max), temperature=0.0
        )
        shift = frequency_shift(bath, delta_omega)
        expected = (value / 2.0) * math.log(delta_omega / (omega_max - delta_omega))
        assert shift == pytest.approx(expected, rel=1e-6)
        assert shift == pytest.approx(expected, rel=1e-12)

    def test_flat_midpoint_is_odd(self):
        bath = BathParams(spectrum=CouplingSpectrum.flat(0.8, 5.0), temperature=0.0)
        assert abs(frequency_shift(bath, 2.5)) <= 1e-12 * 0.8

    def test_symmetric_lorentzian_cancels(self):
        g, center, kappa = 1.0, 1.0, 0.1
        spectrum = CouplingSpectrum.lorentzian(
            g, center=center, width=kappa, omega_min=0.5, omega_max=1.5
        )
        bath = BathParams(spectrum=spectrum, temperature=0.0)
        assert abs(frequency_shift(bath, center)) <= 1e-12 * g * g

    def test_thermal_against_scipy(self):
        beta = 2.0
        spectrum = CouplingSpectrum.flat(0.5, omega_max=6.0, omega_min=0.3)
        bath = BathParams(spectrum=spectrum, beta_freq=beta)
        delta_omega = 2.0

        # independent: QUADPACK Cauchy rule on the same integrand
        def f(w):
            return 0.5 * (1.0 / math.expm1(beta * w) + 0.5)

        reference, _ = quad(f, 0.3, 6.0, weight="cauchy", wvar=delta_omega, limit=400)
        assert frequency_shift(bath, delta_omega) == pytest.approx(-reference, rel=1e-8)

    def test_thermal_flat_from_zero_refused(self):
        bath = BathParams(spectrum=CouplingSpectrum.flat(1.0, 5.0), temperature=100.0)
        with pytest.raises(DomainError, match="omega_min"):
            frequency_shift(bath, 2.0)

    def test_thermal_lorentzian_from_zero_refused(self):
        spectrum = CouplingSpectrum.lorentzian(1.0, center=2.0, width=0.5, omega_min=0.0)
        bath = BathParams(spectrum=spectrum, temperature=50.0)
        with pytest.raises(DomainError, match="omega_min"):
            frequency_shift(bath, 2.0)

    def test_pole_outside_ceiling_refused(self):
        bath = BathParams(spectrum=CouplingSpectrum.flat(1.0, 5.0), temperature=0.0)
        with pytest.raises(DomainError):
            frequency_shift(bath, 6.0)
        with pytest.raises(DomainError):
            frequency_shift(bath, 0.0)


class TestDynamicsParams:
    def test_validation(self):
        with pytest.raises(DomainError):
            DynamicsParams(delta_omega=1.0, gamma=-0.1, n_bar=0.0)
        with pytest.raises(DomainError):
            DynamicsParams(delta_omega=1.0, gamma=0.1, n_bar=-0.5)

    def test_derived_rates(self):
        dyn = DynamicsParams(delta_omega=2.0, gamma=0.1, n_bar=3.0, delta_shift=0.05)
        assert dyn.rate_down == pytest.approx(0.4)
        assert dyn.rate_up == pytest.approx(0.3)
        assert dyn.total_rate == pytest.approx(0.7)
        assert dyn.effective_frequency == pytest.approx(2.1)


class TestDynamicsFromBath:
    def test_quartz_chain(self, quartz_cavity):
        delta_omega = cavity_frequencies(quartz_cavity).delta_omega
        g = coupling_constant(quartz_cavity)
        spectrum = CouplingSpectrum.lorentzian(g, center=delta_omega, quality=1000)
        bath = BathParams(spectrum=spectrum, temperature=300.0)
        with pytest.warns(ValidityWarning, match="not weak"):
            dyn = dynamics_from_bath(bath, delta_omega)
        assert dyn.n_bar == pytest.approx(10.66, rel=1e-3)
        assert dyn.gamma == pytest.approx(9.6e11, rel=5e-3)
        assert dyn.delta_shift == 0.0

    def test_gamma_override(self):
        bath = BathParams(spectrum=CouplingSpectrum.flat(1.0, 10.0), temperature=0.0)
        dyn = dynamics_from_bath(bath, 5.0, gamma_override=0.01)
        assert dyn.gamma == 0.01
        assert dyn.n_bar == 0.0

    def test_weak_regime_silent(self, recwarn):
        bath = BathParams(spectrum=CouplingSpectrum.flat(1e-4, 10.0), temperature=0.0)
        dynamics_from_bath(bath, 5.0)
        assert not any(issubclass(w.category, ValidityWarning) for w in recwarn.list)


class TestDensityMatrix2:
    def test_diagonal_superposition(self):
        rho = DensityMatrix2.diagonal_superposition()
        assert np.array_equal(rho.matrix, np.full((2, 2), 0.5, dtype=complex))

    def test_component_accessors(self):
        rho = DensityMatrix2.from_components(0.3, 0.1 + 0.2j)
        assert rho.rho_oo == pytest.approx(0.3)
        assert rho.rho_ee == pytest.approx(0.7)
        assert rho.rho_oe == pytest.approx(0.1 + 0.2j)

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            DensityMatrix2([[0.5, 0.1], [0.3, 0.5]])

    def test_rejects_wrong_trace(self):
        with pytest.raises(DomainError):
            DensityMatrix2([[0.6, 0.0], [0.0, 0.6]])

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(DomainError):
            DensityMatrix2([[0.5, 0.6], [0.6, 0.5]])


class TestLindbladRhs:
    def dyn(self, **kw):
        defaults = dict(delta_omega=1.0, gamma=0.2, n_bar=0.5, delta_shift=0.03)
        defaults.update(kw)
        return DynamicsParams(**defaults)

    def test_steady_state_is_fixed_point(self):
        dyn = self.dyn()
        rhs = lindblad_rhs(steady_state(dyn), dyn)
        assert np.max(np.abs(rhs)) <= 1e-12 * dyn.gamma

    def test_pure_decay_at_zero_temperature(self):
        dyn = self.dyn(n_bar=0.0)
        rhs = lindblad_rhs(np.diag([1.0, 0.0]), dyn)
        assert rhs[0, 0].real == pytest.approx(-dyn.gamma, rel=1e-14)
        assert rhs[1, 1].real == pytest.approx(dyn.gamma, rel=1e-14)

    def test_unitary_limit(self):
        dyn = self.dyn(gamma=0.0)
        rho = DensityMatrix2.diagonal_superposition()
        rhs = lindblad_rhs(rho, dyn)
        omega = dyn.effective_frequency
        assert rhs[0, 0] == pytest.approx(0.0, abs=1e-15)
        assert rhs[1, 1] == pytest.approx(0.0, abs=1e-15)
        assert rhs[0, 1] == pytest.approx(-1j * omega * 0.5, rel=1e-14)

    def test_traceless_hermitian_output(self, rng):
        dyn = self.dyn()
        for _ in range(10):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            rho = np.outer(v, v.conj())
            rho /= np.trace(rho).real
            rhs = lindblad_rhs(rho, dyn)
            assert abs(np.trace(rhs)) <= 1e-15 * dyn.gamma + 1e-16
            assert np.max(np.abs(rhs - rhs.conj().T)) <= 1e-14

    def test_against_superoperator_oracle(self, rng):
        # independent vectorized-superoperator construction
        dyn = self.dyn(delta_omega=2.3, gamma=0.7, n_bar=1.2, delta_shift=-0.1)
        h = (0.5 * dyn.delta_omega + dyn.delta_shift) * SIGMA_Z
        eye = np.eye(2)
        sup = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
        for rate, op in ((dyn.rate_down, SIGMA_MINUS), (dyn.rate_up, SIGMA_PLUS)):
            opd_op = op.conj().T @ op
            sup += rate * (
                np.kron(op, op.conj())
                - 0.5 * (np.kron(opd_op, eye) + np.kron(eye, opd_op.T))
            )
        for _ in range(10):
            m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            rho = m @ m.conj().T
            rho /= np.trace(rho).real
            expected = (sup @ rho.reshape(4)).reshape(2, 2)
            assert np.allclose(lindblad_rhs(rho, dyn), expected, atol=1e-13)


class TestEvolve:
    def quartz_dynamics(self, quartz_cavity):
        delta_omega = cavity_frequencies(quartz_cavity).delta_omega
        g = coupling_constant(quartz_cavity)
        spectrum = CouplingSpectrum.lorentzian(g, center=delta_omega, quality=1000)
        bath = BathParams(spectrum=spectrum, temperature=300.0)
        with pytest.warns(ValidityWarning):
            return dynamics_from_bath(bath, delta_omega)

    def test_zero_time_returns_initial(self):
        dyn = DynamicsParams(delta_omega=1.0, gamma=0.1, n_bar=0.0)
        traj = evolve(DensityMatrix2.diagonal_superposition(), dyn, 0.0, 0.01)
        assert len(traj) == 1
        assert np.array_equal(traj.matrices[0], np.full((2, 2), 0.5, dtype=complex))

    def test_stability_guard(self):
        dyn = DynamicsParams(delta_omega=100.0, gamma=0.1, n_bar=0.0)
        with pytest.raises(StabilityGuardError, match="dt"):
            evolve(DensityMatrix2.diagonal_superposition(), dyn, 1.0, 0.1)

    def test_cptp_diagnostics(self, quartz_cavity):
        dyn = self.quartz_dynamics(quartz_cavity)
        total = dyn.total_rate
        traj = evolve(
            DensityMatrix2.diagonal_superposition(), dyn, 20.0 / total, 0.02 / total
        )
        traces = np.trace(traj.matrices, axis1=1, axis2=2)
        assert np.max(np.abs(traces - 1.0)) <= 1e-9
        herm = np.max(np.abs(traj.matrices - np.conj(np.transpose(traj.matrices, (0, 2, 1)))))
        assert herm <= 1e-10
        eigs = np.linalg.eigvalsh(traj.matrices)
        assert np.min(eigs) >= -1e-9

    def test_matches_analytic_quartz(self, quartz_cavity):
        dyn = self.quartz_dynamics(quartz_cavity)
        total = dyn.total_rate
        traj = evolve(
            DensityMatrix2.diagonal_superposition(), dyn, 5.0 / total, 1e-3 / total
        )
        reference = analytic_trajectory(
            DensityMatrix2.diagonal_superposition(), dyn, traj.times
        )
        assert np.max(np.abs(traj.matrices - reference)) <= 1e-8

    def test_rk4_order(self):
        # Omega/Gamma ~ 6 keeps truncation error above roundoff
        dyn = DynamicsParams(delta_omega=1.0, gamma=1.0 / 12.0, n_bar=0.5)
        rho0 = DensityMatrix2.diagonal_superposition()
        total = dyn.total_rate

        def max_error(dt):
            traj = evolve(rho0, dyn, 5.0 / total, dt)
            reference = analytic_trajectory(rho0, dyn, traj.times)
            return np.max(np.abs(traj.matrices - reference))

        ratio = max_error(1e-3 / total) / max_error(5e-4 / total)
        assert 12.0 <= ratio <= 20.0

    def test_deterministic(self):
        dyn = DynamicsParams(delta_omega=1.0, gamma=0.05, n_bar=0.3)
        rho0 = DensityMatrix2.from_components(0.4, 0.2 - 0.1j)
        t1 = evolve(rho0, dyn, 30.0, 0.01, stride=7)
        t2 = evolve(rho0, dyn, 30.0, 0.01, stride=7)
        assert np.array_equal(t1.matrices, t2.matrices)
        assert np.array_equal(t1.times, t2.times)

    def test_stride_and_grid(self):
        dyn = DynamicsParams(delta_omega=1.0, gamma=0.05, n_bar=0.0)
        traj = evolve(DensityMatrix2.diagonal_superposition(), dyn, 10.0, 0.01, stride=10)
        assert traj.times[0] == 0.0
        assert traj.times[-1] == 10.0
        assert len(traj) == 101


class TestAnalyticSolution:
    def test_zero_time(self):
        dyn = DynamicsParams(delta_omega=1.0, gamma=0.1, n_bar=0.7)
        rho0 = DensityMatrix2.from_components(0.6, 0.2 + 0.1j)
        assert np.allclose(analytic_solution(rho0, dyn, 0.0).matrix, rho0.matrix)

    def test_long_time_limit(self, quartz_cavity):
        delta_omega = cavity_frequencies(quartz_cavity).delta_omega
        n = bose_occupation(delta_omega, 300.0)
        dyn = DynamicsParams(delta_omega=delta_omega, gamma=1e11, n_bar=n)
        rho = analytic_solution(
            DensityMatrix2.diagonal_superposition(), dyn, 100.0 / dyn.total_rate
        )
        assert rho.rho_oo == pytest.approx(0.4776, abs=1e-4)
        assert rho.rho_ee == pytest.approx(0.5224, abs=1e-4)
        assert abs(rho.rho_oe) <= 1e-15

    def test_coherence_half_life(self):
        dyn = DynamicsParams(delta_omega=1.0, gamma=0.2, n_bar=1.0)
        rho0 = DensityMatrix2.diagonal_superposition()
        t_half = 2.0 * math.log(2.0) / dyn.total_rate
        first = abs(analytic_solution(rho0, dyn, t_half).rho_oe)
        second = abs(analytic_solution(rho0, dyn, 2 * t_half).rho_oe)
        assert first == pytest.approx(0.25, rel=1e-12)
        assert second == pytest.approx(first / 2.0, rel=1e-12)

    def test_phase_convention_against_unitary_integration(self):
        # gamma = 0: pure rotation; RK4 must agree with exp(-i Omega t)
        dyn = DynamicsParams(delta_omega=1.0, gamma=0.0, n_bar=0.0, delta_shift=0.1)
        rho0 = DensityMatrix2.diagonal_superposition()
        traj = evolve(rho0, dyn, 20.0, 0.01)
        expected = 0.5 * np.exp(-1j * dyn.effective_frequency * traj.times)
        assert np.max(np.abs(traj.matrices[:, 0, 1] - expected)) <= 1e-8
        reference = analytic_trajectory(rho0, dyn, traj.times)
        assert np.max(np.abs(traj.matrices - reference)) <= 1e-8


class TestSteadyState:
    def test_zero_temperature(self):
        dyn = DynamicsParams(delta_omega=1.0, gamma=0.1, n_bar=0.0)
        rho = steady_state(dyn)
        assert rho.rho_oo == 0.0
        assert rho.rho_ee == 1.0

    def test_infinite_temperature_limit(self):
        dyn = DynamicsParams(delta_omega=1.0, gamma=0.1, n_bar=1e9)
        rho = steady_state(dyn)
        assert rho.rho_oo == pytest.approx(0.5, abs=1e-9)

    def test_quartz_values(self, quartz_cavity):
        delta_omega = cavity_frequencies(quartz_cavity).delta_omega
        n = bose_occupation(delta_omega, 300.0)
        rho = steady_state(DynamicsParams(delta_omega=delta_omega, gamma=1.0, n_bar=n))
        assert rho.rho_oo == pytest.approx(0.4776, abs=1e-4)
        assert rho.rho_ee == pytest.approx(0.5224, abs=1e-4)

    def test_detailed_balance(self, quartz_cavity):
        delta_omega = cavity_frequencies(quartz_cavity).delta_omega
        beta_dw = HBAR * delta_omega / (BOLTZMANN * 300.0)
        n = bose_occupation(delta_omega, 300.0)
        rho = steady_state(DynamicsParams(delta_omega=delta_omega, gamma=1.0, n_bar=n))
        assert rho.rho_oo / rho.rho_ee == pytest.approx(math.exp(-beta_dw), rel=1e-10)

    def test_no_unique_fixed_point_without_decay(self):
        with pytest.raises(DomainError):
            steady_state(DynamicsParams(delta_omega=1.0, gamma=0.0, n_bar=0.0))
