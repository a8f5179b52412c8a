"""Lindblad dynamics of the photon polarization qubit.

Tracing the continuum of torsional bath modes out of the twisted-cavity
Hamiltonian (weak coupling, Markov) leaves a 2x2 master equation for
the polarization density matrix:

    d rho/dt = -i [(delta_omega/2 + delta) sigma_z, rho]
               + (n+1) gamma D[sigma_-] rho + n gamma D[sigma_+] rho

with D[A] rho = A rho A^dag - {A^dag A, rho}/2, n the thermal occupation
at the splitting, gamma = 2 pi G(delta_omega)^2 the golden-rule rate and
delta the principal-value (Lamb-type) shift.

Basis convention, fixed everywhere: index 0 = ordinary ray (higher
energy), index 1 = extraordinary ray; sigma_z = |o><o| - |e><e|.  With
this sign the coherence rotates as rho_oe(t) ~ exp(-i Omega t),
Omega = delta_omega + 2 delta (normative phase convention).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import backend
from .constants import BOLTZMANN, HBAR
from .errors import DomainError, StabilityGuardError, ValidityWarning
from .quadrature import PrincipalValueResult, QuadratureSpec, principal_value

__all__ = [
    "DensityMatrix2",
    "Trajectory",
    "CouplingSpectrum",
    "BathParams",
    "DynamicsParams",
    "bose_occupation",
    "decay_rate",
    "frequency_shift",
    "frequency_shift_result",
    "dynamics_from_bath",
    "lindblad_rhs",
    "evolve",
    "analytic_solution",
    "analytic_trajectory",
    "steady_state",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
]

SIGMA_Z = np.diag([1.0, -1.0])
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])  # |o><e|, raises e -> o
SIGMA_MINUS = SIGMA_PLUS.T

#: dt * max(total rate, rotation rate) must stay below this.
STABILITY_LIMIT = 0.1

#: total relaxation rate above this fraction of the splitting voids the
#: weak-coupling (Born-Markov) derivation
WEAK_COUPLING_RATIO = 0.1

_HERM_TOL = 1e-12
_TRACE_TOL = 1e-12
_EIG_FLOOR = -1e-10
_RENORM_TOL = 1e-12


class DensityMatrix2:
    """Validated 2x2 density matrix in the {|o>, |e>} basis."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError(f"density matrix must be 2x2, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > _HERM_TOL:
            raise DomainError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > _TRACE_TOL or abs(np.trace(m).imag) > _TRACE_TOL:
            raise DomainError(f"density matrix trace {np.trace(m)} is not 1 within 1e-12")
        if np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))) < _EIG_FLOOR:
            raise DomainError("density matrix has an eigenvalue below -1e-10")
        m.setflags(write=False)
        self.matrix = m

    @classmethod
    def diagonal_superposition(cls) -> "DensityMatrix2":
        """Equal coherent superposition of |o> and |e> (all entries 1/2)."""
        return cls(np.full((2, 2), 0.5))

    @classmethod
    def from_components(cls, rho_oo: float, rho_oe: complex) -> "DensityMatrix2":
        """Hermitian trace-1 matrix from its independent components."""
        return cls([[rho_oo, rho_oe], [np.conj(rho_oe), 1.0 - rho_oo]])

    @property
    def rho_oo(self) -> float:
        return self.matrix[0, 0].real

    @property
    def rho_ee(self) -> float:
        return self.matrix[1, 1].real

    @property
    def rho_oe(self) -> complex:
        return complex(self.matrix[0, 1])

    def __repr__(self):
        return (
            f"DensityMatrix2(rho_oo={self.rho_oo:.6g}, rho_ee={self.rho_ee:.6g}, "
            f"rho_oe={self.rho_oe:.6g})"
        )


@dataclass(frozen=True)
class Trajectory:
    """Sampled master-equation trajectory."""

    times: np.ndarray
    matrices: np.ndarray
    max_trace_drift: float
    renormalizations: int

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> DensityMatrix2:
        return DensityMatrix2(self.matrices[i])

    @property
    def final(self) -> DensityMatrix2:
        return self.state(len(self) - 1)


@dataclass(frozen=True)
class CouplingSpectrum:
    """Squared bath-coupling density G(omega)^2 with units rad/s.

    The continuum coupling is tied to the single-mode constant g via a
    mode density D: G(omega)^2 = g^2 D(omega).  Profiles:

    - flat: constant ``value`` on [omega_min, omega_max]; building from
      a single-mode coupling uses D = 1/omega_max.
    - lorentzian: g^2 * (kappa/pi) / ((omega - center)^2 + kappa^2),
      the response of a torsional resonance of quality Q = center/kappa.
      Resonant (center = delta_omega) this gives gamma = 2 g^2 / kappa.
    """

    kind: str
    omega_min: float
    omega_max: float
    value: float = 0.0
    center: float = 0.0
    width: float = 0.0
    coupling: float = 0.0

    def __post_init__(self):
        if self.kind not in ("flat", "lorentzian"):
            raise DomainError(f"unknown spectrum kind {self.kind!r}")
        if self.omega_min < 0:
            raise DomainError(f"omega_min must be >= 0, got {self.omega_min}")
        if not (self.omega_max > self.omega_min):
            raise DomainError(
                f"need omega_max > omega_min, got [{self.omega_min}, {self.omega_max}]"
            )
        if self.kind == "flat" and self.value < 0:
            raise DomainError(f"flat spectral value must be >= 0, got {self.value}")
        if self.kind == "lorentzian" and not (self.width > 0):
            raise DomainError(f"lorentzian width must be positive, got {self.width}")

    @classmethod
    def flat(cls, value: float, omega_max: float, omega_min: float = 0.0) -> "CouplingSpectrum":
        return cls(kind="flat", value=value, omega_min=omega_min, omega_max=omega_max)

    @classmethod
    def flat_from_coupling(
        cls, coupling: float, omega_max: float, omega_min: float = 0.0
    ) -> "CouplingSpectrum":
        return cls(
            kind="flat",
            value=coupling * coupling / omega_max,
            coupling=coupling,
            omega_min=omega_min,
            omega_max=omega_max,
        )

    @classmethod
    def lorentzian(
        cls,
        coupling: float,
        center: float,
        width: float | None = None,
        quality: float | None = None,
        omega_max: float | None = None,
        omega_min: float | None = None,
    ) -> "CouplingSpectrum":
        """Lorentzian profile; give either width kappa or quality Q.

        The support window defaults to center +/- 20 kappa (clipped at
        zero from below).
        """
        if (width is None) == (quality is None):
            raise DomainError("give exactly one of width or quality")
        if width is None:
            if not (quality > 0):
                raise DomainError(f"quality factor must be positive, got {quality}")
            width = center / quality
        if omega_max is None:
            omega_max = center + 20.0 * width
        if omega_min is None:
            omega_min = max(0.0, center - 20.0 * width)
        return cls(
            kind="lorentzian",
            center=center,
            width=width,
            coupling=coupling,
            omega_min=omega_min,
            omega_max=omega_max,
        )

    def g_squared(self, omega):
        """G(omega)^2, zero outside the support window."""
        omega = np.asarray(omega, dtype=float)
        if self.kind == "flat":
            vals = np.full(omega.shape, self.value)
        else:
            d = omega - self.center
            vals = (
                self.coupling
                * self.coupling
                * (self.width / math.pi)
                / (d * d + self.width * self.width)
            )
        inside = (omega >= self.omega_min) & (omega <= self.omega_max)
        return np.where(inside, vals, 0.0)[()]


@dataclass(frozen=True)
class BathParams:
    """Thermal torsional bath: spectrum plus temperature.

    Give the temperature in kelvin or directly the inverse temperature
    in frequency units, beta_freq = hbar/(k_B T) in 1/(rad/s).  T = 0
    (or beta_freq = inf) is the zero-temperature bath.  omega_max is the
    integration ceiling for bath integrals and defaults to the spectrum
    support ceiling.
    """

    spectrum: CouplingSpectrum
    temperature: float | None = None
    beta_freq: float | None = None
    omega_max: float | None = None

    def __post_init__(self):
        if (self.temperature is None) == (self.beta_freq is None):
            raise DomainError("give exactly one of temperature or beta_freq")
        if self.temperature is not None and self.temperature < 0:
            raise DomainError(f"temperature must be >= 0 K, got {self.temperature}")
        if self.beta_freq is not None and self.beta_freq <= 0:
            raise DomainError(f"beta_freq must be positive, got {self.beta_freq}")
        if self.omega_max is None:
            object.__setattr__(self, "omega_max", self.spectrum.omega_max)
        if not (self.omega_max > 0):
            raise DomainError(f"omega_max must be positive, got {self.omega_max}")

    @property
    def is_zero_temperature(self) -> bool:
        if self.temperature is not None:
            return self.temperature == 0.0
        return math.isinf(self.beta_freq)

    def inverse_temperature_freq(self) -> float:
        """beta in 1/(rad/s); inf at zero temperature."""
        if self.temperature is not None:
            if self.temperature == 0.0:
                return math.inf
            return HBAR / (BOLTZMANN * self.temperature)
        return self.beta_freq

    def occupation(self, omega):
        """Bose occupation n(omega) for omega > 0 (vectorized)."""
        beta = self.inverse_temperature_freq()
        omega = np.asarray(omega, dtype=float)
        if math.isinf(beta):
            return np.zeros(omega.shape)[()]
        return (1.0 / np.expm1(beta * omega))[()]


@dataclass(frozen=True)
class DynamicsParams:
    """Coefficients of the master equation, all in rad/s.

    gamma is the bare decay coefficient, n_bar the thermal occupation at
    the splitting, delta_shift the bath-induced frequency shift.
    """

    delta_omega: float
    gamma: float
    n_bar: float
    delta_shift: float = 0.0

    def __post_init__(self):
        if self.gamma < 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if self.n_bar < 0:
            raise DomainError(f"n_bar must be >= 0, got {self.n_bar}")

    @property
    def rate_down(self) -> float:
        """Downward (o -> e) dissipator rate (n+1) gamma."""
        return (self.n_bar + 1.0) * self.gamma

    @property
    def rate_up(self) -> float:
        """Upward (e -> o) dissipator rate n gamma."""
        return self.n_bar * self.gamma

    @property
    def total_rate(self) -> float:
        """Population relaxation rate Gamma = (2n+1) gamma."""
        return (2.0 * self.n_bar + 1.0) * self.gamma

    @property
    def effective_frequency(self) -> float:
        """Coherence rotation rate Omega = delta_omega + 2 delta."""
        return self.delta_omega + 2.0 * self.delta_shift


def bose_occupation(delta_omega: float, temperature: float) -> float:
    """Mean thermal boson number 1/(exp(hbar w / k_B T) - 1).

    Exactly 0 at T = 0.  delta_omega must be positive (the Bose factor
    diverges at zero frequency).
    """
    if not (delta_omega > 0):
        raise DomainError(f"delta_omega must be positive, got {delta_omega}")
    if temperature < 0:
        raise DomainError(f"temperature must be >= 0 K, got {temperature}")
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(HBAR * delta_omega / (BOLTZMANN * temperature))


def decay_rate(spectrum: CouplingSpectrum, delta_omega: float) -> float:
    """Golden-rule decay coefficient gamma = 2 pi G(delta_omega)^2.

    Returns 0 with a warning when the splitting lies outside the
    spectrum support (no resonant bath modes).
    """
    if not (spectrum.omega_min < delta_omega < spectrum.omega_max):
        warnings.warn(
            f"delta_omega = {delta_omega:.4g} rad/s lies outside the bath "
            f"support [{spectrum.omega_min:.4g}, {spectrum.omega_max:.4g}]; "
            "no resonant modes, decay rate is 0",
            ValidityWarning,
            stacklevel=2,
        )
        return 0.0
    return 2.0 * math.pi * float(spectrum.g_squared(delta_omega))


def frequency_shift_result(
    bath: BathParams, delta_omega: float, spec: QuadratureSpec | None = None
) -> PrincipalValueResult:
    """Principal-value bath shift with quadrature diagnostics.

    delta = P int_0^omega_max G(w)^2 (n(w) + 1/2) / (delta_omega - w) dw
    """
    if not (0.0 < delta_omega < bath.omega_max):
        raise DomainError(
            f"delta_omega = {delta_omega} must lie strictly inside "
            f"(0, {bath.omega_max})"
        )
    spectrum = bath.spectrum
    a = spectrum.omega_min
    b = min(bath.omega_max, spectrum.omega_max)
    if not (b > a):
        raise DomainError("bath integration window is empty")
    if not bath.is_zero_temperature and a == 0.0 and float(spectrum.g_squared(0.0)) > 0.0:
        raise DomainError(
            "thermal occupation makes the shift integrand ~ 1/omega near "
            "zero, which is not integrable for this spectrum; set "
            "omega_min > 0"
        )

    if bath.is_zero_temperature:

        def integrand(w):
            return 0.5 * spectrum.g_squared(w)

    else:

        def integrand(w):
            return spectrum.g_squared(w) * (bath.occupation(w) + 0.5)

    return principal_value(integrand, delta_omega, a, b, spec)


def frequency_shift(
    bath: BathParams, delta_omega: float, spec: QuadratureSpec | None = None
) -> float:
    """Bath-induced frequency shift delta in rad/s (see frequency_shift_result)."""
    return frequency_shift_result(bath, delta_omega, spec).value


def dynamics_from_bath(
    bath: BathParams,
    delta_omega: float,
    include_shift: bool = False,
    quadrature: QuadratureSpec | None = None,
    gamma_override: float | None = None,
) -> DynamicsParams:
    """Assemble master-equation coefficients from a bath description.

    gamma_override bypasses the spectrum for the decay coefficient (the
    spectrum is still used for the shift when include_shift is set).
    Warns when the resulting relaxation is not weak against the
    splitting.
    """
    if not (delta_omega > 0):
        raise DomainError(f"delta_omega must be positive, got {delta_omega}")
    n_bar = float(bath.occupation(delta_omega))
    if gamma_override is not None:
        if gamma_override < 0:
            raise DomainError(f"gamma_override must be >= 0, got {gamma_override}")
        gamma = gamma_override
    else:
        gamma = decay_rate(bath.spectrum, delta_omega)
    delta = frequency_shift(bath, delta_omega, quadrature) if include_shift else 0.0
    total = (2.0 * n_bar + 1.0) * gamma
    if total > WEAK_COUPLING_RATIO * delta_omega:
        warnings.warn(
            f"relaxation rate (2n+1)gamma = {total:.4g} rad/s is not weak "
            f"against the splitting delta_omega = {delta_omega:.4g} rad/s; "
            "the Born-Markov master equation is outside its validity regime",
            ValidityWarning,
            stacklevel=2,
        )
    return DynamicsParams(
        delta_omega=delta_omega, gamma=gamma, n_bar=n_bar, delta_shift=delta
    )


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix2):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def lindblad_rhs(rho, dyn: DynamicsParams) -> np.ndarray:
    """Right-hand side of the master equation, operator-algebra form.

    Reference implementation; the evolution kernels use the equivalent
    componentwise closed form.  Output is traceless and Hermitian.
    """
    r = _as_matrix(rho)
    h = (0.5 * dyn.delta_omega + dyn.delta_shift) * SIGMA_Z
    out = -1j * (h @ r - r @ h)
    for rate, op in ((dyn.rate_down, SIGMA_MINUS), (dyn.rate_up, SIGMA_PLUS)):
        opd = op.conj().T
        opdop = opd @ op
        out += rate * (op @ r @ opd - 0.5 * (opdop @ r + r @ opdop))
    return out


def evolve(
    rho0,
    dyn: DynamicsParams,
    t_final: float,
    dt: float,
    stride: int = 1,
) -> Trajectory:
    """Fixed-step RK4 integration of the master equation.

    Samples every ``stride`` steps.  The step is shrunk (never grown) so
    that an integer number of steps, a multiple of stride, lands exactly
    on t_final.  Guard: dt * max(Gamma, |Omega|) must not exceed 0.1.
    The trace is renormalized only when its drift exceeds 1e-12; the
    maximum drift seen and the number of renormalizations are recorded
    on the returned Trajectory.
    """
    rho_mat = _as_matrix(rho0)
    if t_final < 0:
        raise DomainError(f"t_final must be >= 0, got {t_final}")
    if stride < 1:
        raise DomainError(f"stride must be >= 1, got {stride}")
    if t_final == 0.0:
        return Trajectory(
            times=np.array([0.0]),
            matrices=rho_mat[None, :, :].copy(),
            max_trace_drift=0.0,
            renormalizations=0,
        )
    if not (dt > 0):
        raise DomainError(f"dt must be positive, got {dt}")

    scale = max(dyn.total_rate, abs(dyn.effective_frequency))
    if dt * scale > STABILITY_LIMIT:
        raise StabilityGuardError(
            f"dt = {dt:.4g} s is too large for rates up to {scale:.4g} rad/s; "
            f"use dt <= {STABILITY_LIMIT / scale:.4g} s"
        )

    n_steps = max(1, math.ceil(t_final / dt - 1e-9))
    n_steps += (-n_steps) % stride
    step = t_final / n_steps

    samples, max_drift, n_renorm = backend.lindblad_rk4(
        rho_mat,
        dyn.effective_frequency,
        dyn.rate_down,
        dyn.rate_up,
        step,
        n_steps,
        stride,
        _RENORM_TOL,
    )
    times = np.linspace(0.0, t_final, n_steps // stride + 1)
    return Trajectory(
        times=times,
        matrices=samples,
        max_trace_drift=max_drift,
        renormalizations=n_renorm,
    )


def analytic_trajectory(rho0, dyn: DynamicsParams, times) -> np.ndarray:
    """Closed-form solution at the given times, shape (len(times), 2, 2).

    rho_ee(t) = rho_ee^inf + (rho_ee(0) - rho_ee^inf) e^{-Gamma t} with
    rho_ee^inf = (n+1)/(2n+1); rho_oo = 1 - rho_ee; and
    rho_oe(t) = rho_oe(0) e^{-Gamma t / 2} e^{-i Omega t}.
    """
    r0 = _as_matrix(rho0)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    total = dyn.total_rate
    ree_inf = (dyn.n_bar + 1.0) / (2.0 * dyn.n_bar + 1.0)
    decay = np.exp(-total * times)
    ree = ree_inf + (r0[1, 1].real - ree_inf) * decay
    roe = r0[0, 1] * np.exp(-0.5 * total * times) * np.exp(
        -1j * dyn.effective_frequency * times
    )
    out = np.zeros((len(times), 2, 2), dtype=complex)
    out[:, 0, 0] = 1.0 - ree
    out[:, 1, 1] = ree
    out[:, 0, 1] = roe
    out[:, 1, 0] = np.conj(roe)
    return out


def analytic_solution(rho0, dyn: DynamicsParams, t: float) -> DensityMatrix2:
    """Closed-form solution at a single time."""
    return DensityMatrix2(analytic_trajectory(rho0, dyn, [t])[0])


def steady_state(dyn: DynamicsParams) -> DensityMatrix2:
    """Unique fixed point diag(n/(2n+1), (n+1)/(2n+1)); requires gamma > 0."""
    if dyn.gamma == 0:
        raise DomainError("gamma = 0 has no unique steady state")
    denom = 2.0 * dyn.n_bar + 1.0
    return DensityMatrix2(np.diag([dyn.n_bar / denom, (dyn.n_bar + 1.0) / denom]))
