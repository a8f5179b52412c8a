"""Torsional optomechanical coupling and two-level + boson Hamiltonians.

Twisting the birefringent cavity mixes the ordinary and extraordinary
ray modes; quantizing the stored electromagnetic energy together with
the torsional oscillation produces a two-level system (the photon
polarization) coupled to a bosonic mode (the twist quantum).  This
module computes the classical interaction energy, the single-mode
coupling constant, and assembles the truncated-Fock Hamiltonian with or
without the counter-rotating terms.

All Hamiltonian matrix elements are angular frequencies (energy/hbar).
Two-level basis ordering in the quantized system: index 0 is the ground
state |g> (extraordinary photon), index 1 the excited state |x>
(ordinary photon); the boson index runs fastest.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .cavity_modes import CavityConfig, cavity_frequencies
from .constants import SPEED_OF_LIGHT
from .errors import DomainError, ValidityWarning
from .tensor_optics import UniaxialMedium

__all__ = [
    "TwoLevelParams",
    "QuantizedSystem",
    "interaction_energy",
    "coupling_constant",
    "two_level_params",
    "build_hamiltonian",
    "destroy_operator",
    "excitation_number_operator",
]

#: |G|/delta_omega above which the two-level reduction is suspect.
COUPLING_RATIO_LIMIT = 0.1


@dataclass(frozen=True)
class TwoLevelParams:
    """Parameters of the effective two-level + boson model.

    delta_omega is the photon splitting omega_o - omega_e, omega_0 the
    torsional eigenfrequency, coupling the single-mode interaction rate
    (negative for positive uniaxial media).  All rad/s.
    """

    delta_omega: float
    omega_0: float
    coupling: float
    cavity: CavityConfig | None = None

    def __post_init__(self):
        if self.delta_omega < 0:
            raise DomainError(f"delta_omega must be >= 0, got {self.delta_omega}")
        if not (self.omega_0 > 0):
            raise DomainError(f"omega_0 must be positive, got {self.omega_0}")


@dataclass(frozen=True)
class QuantizedSystem:
    """Dense Hamiltonian on {|g>, |x>} x {|0> .. |fock_cutoff>}."""

    matrix: np.ndarray
    fock_cutoff: int
    rwa: bool
    params: TwoLevelParams

    @property
    def dimension(self) -> int:
        return 2 * (self.fock_cutoff + 1)

    def excited_vacuum_state(self) -> np.ndarray:
        """State vector |x, 0>: excited two-level system, boson vacuum."""
        psi = np.zeros(self.dimension, dtype=complex)
        psi[self.fock_cutoff + 1] = 1.0
        return psi

    def evolve_state(self, psi0: np.ndarray, times) -> np.ndarray:
        """Exact evolution exp(-i H t) psi0 via eigendecomposition.

        Returns an array of shape (len(times), dim).
        """
        evals, evecs = np.linalg.eigh(self.matrix)
        coeffs = evecs.conj().T @ np.asarray(psi0, dtype=complex)
        times = np.atleast_1d(np.asarray(times, dtype=float))
        phases = np.exp(-1j * np.outer(times, evals))
        return (phases * coeffs) @ evecs.T

    def excited_population(self, psi: np.ndarray) -> np.ndarray:
        """Total |x, m> population of one or many state vectors."""
        psi = np.atleast_2d(psi)
        return np.sum(np.abs(psi[:, self.fock_cutoff + 1 :]) ** 2, axis=1)


def interaction_energy(
    c_e: complex, c_o: complex, medium: UniaxialMedium, theta_0: float
) -> float:
    """Classical twist-photon interaction energy in erg.

    For field amplitudes C_e, C_o of the two lowest cavity modes and a
    total twist theta_0:

        U = -(1/(16 pi)) (1/n_o^2 - 1/n_e^2) theta_0 (C_e* C_o + C_o* C_e)

    The amplitude combination is manifestly real.
    """
    if not (np.isfinite(c_e) and np.isfinite(c_o) and math.isfinite(theta_0)):
        raise DomainError("amplitudes and twist angle must be finite")
    cross = (np.conj(c_e) * c_o + np.conj(c_o) * c_e).real
    birefringence = 1.0 / medium.eps_o - 1.0 / medium.eps_e
    return -(1.0 / (16.0 * math.pi)) * birefringence * theta_0 * cross


def coupling_constant(config: CavityConfig, zero_point_scale: float = 1.0) -> float:
    """Single-mode torsional coupling G in rad/s.

    G = -(c / (16 L sqrt(2 n_o n_e))) (1/n_o^2 - 1/n_e^2), negative for
    positive uniaxial media.  The hbar of the energy form is divided
    out.  zero_point_scale rescales the twist zero-point amplitude
    relative to the idealized dimensionless oscillator (G is linear in
    it); leave at 1 for the idealized model.
    """
    if not (zero_point_scale > 0):
        raise DomainError(f"zero_point_scale must be positive, got {zero_point_scale}")
    m = config.medium
    birefringence = 1.0 / m.eps_o - 1.0 / m.eps_e
    return (
        -(SPEED_OF_LIGHT / (16.0 * config.length * math.sqrt(2.0 * m.n_o * m.n_e)))
        * birefringence
        * zero_point_scale
    )


def two_level_params(
    config: CavityConfig,
    omega_0: float,
    ratio_threshold: float = COUPLING_RATIO_LIMIT,
    zero_point_scale: float = 1.0,
) -> TwoLevelParams:
    """Bundle splitting, torsional frequency, and coupling for a cavity.

    Warns when |G| is not small against delta_omega (the two-level /
    rotating-wave reduction assumes |G| << delta_omega).
    """
    freqs = cavity_frequencies(config)
    g = coupling_constant(config, zero_point_scale)
    delta_omega = freqs.delta_omega
    if delta_omega <= 0 or abs(g) > ratio_threshold * delta_omega:
        warnings.warn(
            f"|G| = {abs(g):.4g} rad/s is not small against the splitting "
            f"delta_omega = {delta_omega:.4g} rad/s; the two-level reduction "
            "is outside its validity regime",
            ValidityWarning,
            stacklevel=2,
        )
    return TwoLevelParams(delta_omega=delta_omega, omega_0=omega_0, coupling=g, cavity=config)


def destroy_operator(fock_cutoff: int) -> np.ndarray:
    """Truncated boson annihilation operator on |0> .. |fock_cutoff>."""
    n = np.arange(1, fock_cutoff + 1, dtype=float)
    return np.diag(np.sqrt(n), k=1)


def excitation_number_operator(fock_cutoff: int) -> np.ndarray:
    """Total excitation number sigma_+ sigma_- + b^dag b on the product space."""
    dim_b = fock_cutoff + 1
    proj_x = np.diag([0.0, 1.0])
    number = np.diag(np.arange(dim_b, dtype=float))
    return np.kron(proj_x, np.eye(dim_b)) + np.kron(np.eye(2), number)


def build_hamiltonian(
    params: TwoLevelParams, fock_cutoff: int, rwa: bool = True
) -> QuantizedSystem:
    """Assemble the dense two-level + boson Hamiltonian.

    H = (delta_omega/2) sigma_z + omega_0 b^dag b
        + G (sigma_+ b + sigma_- b^dag)            [rwa=True]

    with the counter-rotating terms G (sigma_+ b^dag + sigma_- b) added
    for rwa=False.  sigma_+ maps |g> (extraordinary photon) to |x>
    (ordinary photon).
    """
    if fock_cutoff < 1:
        raise DomainError(f"fock_cutoff must be >= 1, got {fock_cutoff}")
    dim_b = fock_cutoff + 1
    sigma_z = np.diag([-1.0, 1.0])
    sigma_p = np.array([[0.0, 0.0], [1.0, 0.0]])
    sigma_m = sigma_p.T
    b = destroy_operator(fock_cutoff)
    bdag = b.T
    number = bdag @ b

    h = 0.5 * params.delta_omega * np.kron(sigma_z, np.eye(dim_b))
    h += params.omega_0 * np.kron(np.eye(2), number)
    h += params.coupling * (np.kron(sigma_p, b) + np.kron(sigma_m, bdag))
    if not rwa:
        h += params.coupling * (np.kron(sigma_p, bdag) + np.kron(sigma_m, b))
    h = 0.5 * (h + h.T)
    h.setflags(write=False)
    return QuantizedSystem(matrix=h, fock_cutoff=fock_cutoff, rwa=rwa, params=params)
