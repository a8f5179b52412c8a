"""Plane-wave eigenmodes of the uniaxial cavity medium.

The Maxwell curl equations in the untwisted medium reduce, after
multiplying by eps'^{-1/2} on both sides, to a real symmetric eigenvalue
problem for the stretched field eps'^{1/2} E.  Its three eigenpairs are
the longitudinal mode (zero frequency), the ordinary ray, and the
extraordinary ray.  This module solves that problem in closed form, with
a dense numeric eigensolver as an independent cross-check, and derives
the fundamental cavity frequencies.

Basis convention for the cavity: the wavevector points along the cavity
axis u_y, perpendicular to the optic axis u_z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT
from .errors import DomainError, OpticAxisDegeneracyError
from .tensor_optics import UniaxialMedium, permittivity_twisted_frame

__all__ = [
    "WaveVector",
    "EigenMode",
    "EigenModeSet",
    "CavityConfig",
    "CavityFrequencies",
    "mode_matrix",
    "solve_eigenmodes",
    "solve_eigenmodes_numeric",
    "cavity_frequencies",
    "check_orthonormality",
]

#: Relative k'_perp/k' below which the transverse basis is treated as
#: degenerate (wavevector on the optic axis).
_AXIS_TOL = 1e-12

_U_Z = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class WaveVector:
    """Cartesian wavevector in cm^-1."""

    kx: float
    ky: float
    kz: float

    @classmethod
    def from_array(cls, arr) -> "WaveVector":
        ax = np.asarray(arr, dtype=float)
        if ax.shape != (3,):
            raise DomainError(f"wavevector needs 3 components, got shape {ax.shape}")
        return cls(*ax)

    def as_array(self) -> np.ndarray:
        return np.array([self.kx, self.ky, self.kz])

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def stretched(self, medium: UniaxialMedium) -> np.ndarray:
        """k' = eps'^{1/2} k, componentwise (n_o, n_o, n_e) scaling."""
        return np.array([medium.n_o * self.kx, medium.n_o * self.ky, medium.n_e * self.kz])

    def stretched_magnitude(self, medium: UniaxialMedium) -> float:
        return float(np.linalg.norm(self.stretched(medium)))

    def stretched_transverse(self, medium: UniaxialMedium) -> float:
        """Magnitude of the k' component perpendicular to the optic axis."""
        return math.hypot(medium.n_o * self.kx, medium.n_o * self.ky)


@dataclass(frozen=True)
class EigenMode:
    """One cavity eigenmode.

    direction is the E-field polarization vector (1/sqrt(V) factored
    out), normalized so that direction^dag eps' direction = 1;
    eigenvalue is omega^2/c^2 in cm^-2.
    """

    label: str
    direction: np.ndarray
    eigenvalue: float

    @property
    def frequency(self) -> float:
        """Angular frequency omega in rad/s."""
        return SPEED_OF_LIGHT * math.sqrt(max(self.eigenvalue, 0.0))


@dataclass(frozen=True)
class EigenModeSet:
    longitudinal: EigenMode
    ordinary: EigenMode
    extraordinary: EigenMode

    @property
    def modes(self) -> tuple[EigenMode, EigenMode, EigenMode]:
        return (self.longitudinal, self.ordinary, self.extraordinary)


@dataclass(frozen=True)
class CavityConfig:
    """Cavity of length ``length`` cm filled with ``medium``.

    mode_index m > 1 selects higher longitudinal orders k = m*pi/L;
    anything beyond the fundamental is experimental.
    """

    length: float
    medium: UniaxialMedium
    mode_index: int = 1

    def __post_init__(self):
        if not (self.length > 0):
            raise DomainError(f"cavity length must be positive, got {self.length}")
        if self.mode_index < 1:
            raise DomainError(f"mode_index must be >= 1, got {self.mode_index}")

    @property
    def wavevector(self) -> WaveVector:
        return WaveVector(0.0, self.mode_index * math.pi / self.length, 0.0)


def mode_matrix(k: WaveVector, medium: UniaxialMedium) -> np.ndarray:
    """Symmetric matrix eps'^{-1/2} (k^2 - k k^T) eps'^{-1/2}.

    Its eigenvalues are omega^2/c^2 for the three plane-wave modes.
    """
    kv = k.as_array()
    k2 = float(kv @ kv)
    if k2 == 0.0:
        raise DomainError("wavevector must be nonzero")
    inv_sqrt = np.array([1.0 / medium.n_o, 1.0 / medium.n_o, 1.0 / medium.n_e])
    stretched = inv_sqrt * kv
    # diag and outer-product forms keep the matrix symmetric to the bit
    return k2 * np.diag(inv_sqrt * inv_sqrt) - np.outer(stretched, stretched)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component real positive."""
    i = int(np.argmax(np.abs(vec)))
    pivot = vec[i]
    if pivot == 0:
        return vec
    phase = pivot / abs(pivot)
    return vec / phase


def solve_eigenmodes(k: WaveVector, medium: UniaxialMedium) -> EigenModeSet:
    """Closed-form eigenmodes (longitudinal, ordinary, extraordinary).

    Directions are eps'-orthonormal with the global phase fixed by
    making the largest component real positive.  Raises
    OpticAxisDegeneracyError when k is (anti)parallel to the optic axis,
    where the transverse basis is ill-defined.
    """
    kv = k.as_array()
    k2 = float(kv @ kv)
    if k2 == 0.0:
        raise DomainError("wavevector must be nonzero")
    kp = k.stretched(medium)
    kp_norm = float(np.linalg.norm(kp))
    kp_perp = k.stretched_transverse(medium)
    if kp_perp < _AXIS_TOL * kp_norm:
        raise OpticAxisDegeneracyError(
            "wavevector is (anti)parallel to the optic axis; the "
            "ordinary/extraordinary directions are degenerate there"
        )
    inv_sqrt = np.array([1.0 / medium.n_o, 1.0 / medium.n_o, 1.0 / medium.n_e])

    w_long = kp / kp_norm
    cross_o = np.cross(kp, _U_Z)
    w_ord = cross_o / np.linalg.norm(cross_o)
    cross_e = np.cross(kp, cross_o)
    w_ext = cross_e / np.linalg.norm(cross_e)

    lam_ord = k2 / medium.eps_o
    lam_ext = kp_norm * kp_norm / (medium.eps_o * medium.eps_e)

    def mode(label, w, lam):
        direction = _fix_phase((inv_sqrt * w).astype(complex))
        direction.setflags(write=False)
        return EigenMode(label=label, direction=direction, eigenvalue=lam)

    return EigenModeSet(
        longitudinal=mode("longitudinal", w_long, 0.0),
        ordinary=mode("ordinary", w_ord, lam_ord),
        extraordinary=mode("extraordinary", w_ext, lam_ext),
    )


def solve_eigenmodes_numeric(k: WaveVector, medium: UniaxialMedium) -> EigenModeSet:
    """Dense-eigensolver route through mode_matrix.

    Independent of the closed forms; labels are assigned by matching
    eigenvalues against the analytic spectrum.  Used as a cross-check.
    """
    mat = mode_matrix(k, medium)
    evals, evecs = np.linalg.eigh(mat)

    kp_norm = k.stretched_magnitude(medium)
    k2 = k.magnitude ** 2
    targets = {
        "longitudinal": 0.0,
        "ordinary": k2 / medium.eps_o,
        "extraordinary": kp_norm * kp_norm / (medium.eps_o * medium.eps_e),
    }
    inv_sqrt = np.array([1.0 / medium.n_o, 1.0 / medium.n_o, 1.0 / medium.n_e])

    remaining = list(range(3))
    picked = {}
    for label, target in targets.items():
        j = min(remaining, key=lambda i: abs(evals[i] - target))
        remaining.remove(j)
        direction = _fix_phase((inv_sqrt * evecs[:, j]).astype(complex))
        direction.setflags(write=False)
        picked[label] = EigenMode(label=label, direction=direction, eigenvalue=float(evals[j]))
    return EigenModeSet(
        longitudinal=picked["longitudinal"],
        ordinary=picked["ordinary"],
        extraordinary=picked["extraordinary"],
    )


@dataclass(frozen=True)
class CavityFrequencies:
    omega_o: float
    omega_e: float

    @property
    def delta_omega(self) -> float:
        return self.omega_o - self.omega_e


def cavity_frequencies(config: CavityConfig) -> CavityFrequencies:
    """Fundamental ordinary/extraordinary frequencies of the cavity.

    With k = m*pi/L along u_y: omega_o = c k / n_o and
    omega_e = c k' / (n_o n_e) = c k / n_e, so the splitting
    delta_omega = omega_o - omega_e is positive for n_e > n_o.
    """
    medium = config.medium
    k = config.wavevector.magnitude
    kp = config.wavevector.stretched_magnitude(medium)
    omega_o = SPEED_OF_LIGHT * k / medium.n_o
    omega_e = SPEED_OF_LIGHT * kp / (medium.n_o * medium.n_e)
    return CavityFrequencies(omega_o=omega_o, omega_e=omega_e)


def check_orthonormality(modes: EigenModeSet, medium: UniaxialMedium) -> np.ndarray:
    """Gram matrix v_s^dag eps' v_s' of the three mode directions.

    Equals the identity (within numerical noise) for modes produced by
    the solvers; the volume normalization cancels for single plane
    waves.
    """
    eps = permittivity_twisted_frame(medium)
    vecs = np.column_stack([m.direction for m in modes.modes])
    return vecs.conj().T @ eps @ vecs
