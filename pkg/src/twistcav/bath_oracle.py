"""Brute-force validators for the master-equation module.

Two independent checks:

- a uniformly discretized bath evolved exactly in the single-excitation
  sector at zero temperature, whose survival probability must reproduce
  the golden-rule exponential (Wigner-Weisskopf decay);
- exact truncated-Fock evolution of the two-level + boson Hamiltonian,
  whose resonant rotating-wave branch must reproduce the Rabi closed
  form cos^2(|G| t).

Both are deliberately independent of the Lindblad solver they certify.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DomainError, StabilityGuardError, ValidityWarning
from .hamiltonian import TwoLevelParams, build_hamiltonian
from .lindblad import CouplingSpectrum

__all__ = [
    "DiscretizedBath",
    "SurvivalResult",
    "JaynesCummingsCheck",
    "discretize_bath",
    "evolve_single_excitation",
    "jc_rabi_check",
]

#: norm-conservation budget for the exact single-excitation evolution
NORM_TOLERANCE = 1e-10

#: phase-accuracy budget for the survival amplitude
_PHASE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class DiscretizedBath:
    """Midpoint discretization of a coupling spectrum.

    frequencies holds the M mode frequencies, couplings the per-mode
    couplings g_j = G(omega_j) sqrt(spacing).
    """

    frequencies: np.ndarray
    couplings: np.ndarray
    spacing: float
    window: tuple[float, float]

    @property
    def size(self) -> int:
        return len(self.frequencies)

    @property
    def recurrence_time(self) -> float:
        """2 pi / spacing; the discrete bath mimics a continuum only below this."""
        return 2.0 * math.pi / self.spacing

    def binned_decay_rate(self, delta_omega: float) -> float:
        """Golden-rule rate 2 pi g_j^2 / spacing at the mode nearest delta_omega."""
        j = int(np.argmin(np.abs(self.frequencies - delta_omega)))
        return 2.0 * math.pi * float(self.couplings[j]) ** 2 / self.spacing


def discretize_bath(
    spectrum: CouplingSpectrum, m: int, window: tuple[float, float]
) -> DiscretizedBath:
    """Uniform midpoint grid of ``m`` modes over ``window``."""
    lo, hi = window
    if m < 2:
        raise DomainError(f"need at least 2 bath modes, got {m}")
    if not (hi > lo >= 0):
        raise DomainError(f"invalid window [{lo}, {hi}]")
    spacing = (hi - lo) / m
    freqs = lo + (np.arange(m) + 0.5) * spacing
    couplings = np.sqrt(spectrum.g_squared(freqs) * spacing)
    freqs.setflags(write=False)
    couplings.setflags(write=False)
    return DiscretizedBath(
        frequencies=freqs, couplings=couplings, spacing=spacing, window=(lo, hi)
    )


@dataclass(frozen=True)
class SurvivalResult:
    """Excited-state survival probability |c(t)|^2 on a time grid."""

    times: np.ndarray
    survival: np.ndarray
    max_norm_drift: float
    steps_taken: int


def _rk4_step_budget(t_span: float, rate_scale: float) -> float:
    """Largest RK4 step keeping norm drift below NORM_TOLERANCE.

    RK4 on a Hermitian system contracts the norm by ~ (lambda dt)^6/144
    per step and slips the phase by ~ (lambda dt)^5/120 per step; both
    budgets are enforced over the whole span with a safety factor.
    """
    norm_dt = (144.0 * 0.3 * NORM_TOLERANCE / (t_span * rate_scale**6)) ** 0.2
    phase_dt = (120.0 * _PHASE_TOLERANCE / (t_span * rate_scale**5)) ** 0.25
    return min(norm_dt, phase_dt)


def evolve_single_excitation(
    bath: DiscretizedBath, delta_omega: float, t_grid
) -> SurvivalResult:
    """Exact unitary evolution of |excited, vacuum> against the bath.

    Integrates the (M+1)-amplitude Schroedinger equation in the frame
    rotating at delta_omega with fixed-step RK4, stepping finely enough
    to conserve the norm to 1e-10.  Times beyond the grid recurrence
    time are refused.
    """
    times = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if len(times) == 0 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise DomainError("t_grid must be non-empty, non-negative, increasing")
    if times[-1] > bath.recurrence_time:
        raise StabilityGuardError(
            f"requested time {times[-1]:.4g} s exceeds the discrete-bath "
            f"recurrence time 2 pi / spacing = {bath.recurrence_time:.4g} s; "
            "increase the mode count"
        )
    lo, hi = bath.window
    if not (lo < delta_omega < hi):
        warnings.warn(
            f"delta_omega = {delta_omega:.4g} rad/s lies outside the "
            f"discretized window [{lo:.4g}, {hi:.4g}]; decay will not be "
            "resonant",
            ValidityWarning,
            stacklevel=2,
        )

    detunings = bath.frequencies - delta_omega
    rate_scale = float(np.max(np.abs(detunings))) + 2.0 * float(
        np.linalg.norm(bath.couplings)
    )

    grid = times if times[0] == 0.0 else np.concatenate(([0.0], times))
    segments = np.diff(grid)
    if len(segments) == 0:
        return SurvivalResult(
            times=times, survival=np.ones(1), max_norm_drift=0.0, steps_taken=0
        )
    dt_max = _rk4_step_budget(float(grid[-1]), rate_scale)
    steps = np.maximum(1, np.ceil(segments / dt_max)).astype(np.int64)
    dts = segments / steps

    survival, drift = backend.bath_rk4(detunings, bath.couplings, dts, steps)
    if times[0] != 0.0:
        survival = survival[1:]
    return SurvivalResult(
        times=times,
        survival=survival,
        max_norm_drift=drift,
        steps_taken=int(np.sum(steps)),
    )


@dataclass(frozen=True)
class JaynesCummingsCheck:
    """Excited-population series with and without counter-rotating terms."""

    times: np.ndarray
    population_rwa: np.ndarray
    population_full: np.ndarray
    rabi_analytic: np.ndarray | None
    max_rwa_deviation: float | None
    max_counter_rotating_deviation: float


def jc_rabi_check(
    params: TwoLevelParams, fock_cutoff: int, t_grid
) -> JaynesCummingsCheck:
    """Exact evolution from |x, 0> under the quantized Hamiltonian.

    The rotating-wave branch is compared against the resonant Rabi
    closed form cos^2(|G| t) (only when omega_0 = delta_omega); the
    full-Rabi branch quantifies the counter-rotating correction.
    """
    times = np.atleast_1d(np.asarray(t_grid, dtype=float))
    populations = {}
    for rwa in (True, False):
        system = build_hamiltonian(params, fock_cutoff, rwa=rwa)
        psi = system.evolve_state(system.excited_vacuum_state(), times)
        populations[rwa] = system.excited_population(psi)

    resonant = math.isclose(
        params.omega_0, params.delta_omega, rel_tol=1e-12, abs_tol=0.0
    )
    rabi = None
    rwa_dev = None
    if resonant:
        rabi = np.cos(abs(params.coupling) * times) ** 2
        rwa_dev = float(np.max(np.abs(populations[True] - rabi)))
    return JaynesCummingsCheck(
        times=times,
        population_rwa=populations[True],
        population_full=populations[False],
        rabi_analytic=rabi,
        max_rwa_deviation=rwa_dev,
        max_counter_rotating_deviation=float(
            np.max(np.abs(populations[False] - populations[True]))
        ),
    )
