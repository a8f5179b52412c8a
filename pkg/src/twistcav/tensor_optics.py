"""Permittivity tensors of a twisted uniaxial medium.

The medium is uniaxial with its optic axis along z in the frame attached
to the (twisted) crystal.  Twisting rotates that frame in the x-z plane
by an angle that grows linearly along the cavity axis y.  This module
builds the permittivity tensor in both frames, exactly and to first
order in the twist angle.

Tensors are plain ``numpy.ndarray`` objects of shape (3, 3); permittivity
tensors are real symmetric by construction.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidityWarning

__all__ = [
    "UniaxialMedium",
    "TwistProfile",
    "LAMBDA4",
    "LAMBDA5",
    "rotation_matrix",
    "permittivity_twisted_frame",
    "permittivity_lab_exact",
    "permittivity_lab_first_order",
    "perturbation_tensor",
]

#: Real off-diagonal generator mixing the x and z axes (the perturbation
#: direction selected by an x-z rotation).
LAMBDA4 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
LAMBDA4.setflags(write=False)

#: Imaginary antisymmetric partner of LAMBDA4; used only to verify the
#: first-order expansion, never in the production path.
LAMBDA5 = np.array([[0.0, 0.0, -1.0j], [0.0, 0.0, 0.0], [1.0j, 0.0, 0.0]])
LAMBDA5.setflags(write=False)

#: Soft validity bound for the small-twist expansion; beyond this the
#: first-order tensor degrades as angle^2.
SMALL_TWIST_LIMIT = 0.1


@dataclass(frozen=True)
class UniaxialMedium:
    """Two principal relative permittivities of a uniaxial crystal.

    Parameters
    ----------
    eps_o, eps_e : float
        Relative permittivity along the ordinary axes and the optic
        (extraordinary) axis.  Both must be positive, and by default the
        medium must be positive uniaxial (eps_e > eps_o).
    strict : bool
        When False, degenerate (eps_e == eps_o) and negative-uniaxial
        media are accepted.  Escape hatch for tests and edge cases; the
        production pipeline assumes positive uniaxial media.
    """

    eps_o: float
    eps_e: float
    strict: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.eps_o) and math.isfinite(self.eps_e)):
            raise DomainError("permittivities must be finite")
        if self.eps_o <= 0 or self.eps_e <= 0:
            raise DomainError(
                f"permittivities must be positive, got eps_o={self.eps_o}, "
                f"eps_e={self.eps_e}"
            )
        if self.strict and self.delta_eps <= 0:
            raise DomainError(
                "medium is not positive uniaxial (eps_e - eps_o = "
                f"{self.delta_eps:g} <= 0); pass strict=False to allow"
            )

    @classmethod
    def from_indices(cls, n_o: float, n_e: float, strict: bool = True) -> "UniaxialMedium":
        """Build from the ordinary/extraordinary refractive indices."""
        return cls(eps_o=n_o * n_o, eps_e=n_e * n_e, strict=strict)

    @property
    def n_o(self) -> float:
        return math.sqrt(self.eps_o)

    @property
    def n_e(self) -> float:
        return math.sqrt(self.eps_e)

    @property
    def delta_eps(self) -> float:
        return self.eps_e - self.eps_o


#: Quartz at optical frequencies; the worked scenario throughout.
QUARTZ = UniaxialMedium.from_indices(1.547, 1.556)


@dataclass(frozen=True)
class TwistProfile:
    """Linear twist along the cavity axis: angle(y) = theta_0 * y / L.

    theta_0 is the total twist at y = L (radians), L the cavity length
    in cm.
    """

    theta_0: float
    length: float

    def __post_init__(self):
        if not math.isfinite(self.theta_0):
            raise DomainError("theta_0 must be finite")
        if not (self.length > 0):
            raise DomainError(f"cavity length must be positive, got {self.length}")
        if abs(self.theta_0) > SMALL_TWIST_LIMIT:
            warnings.warn(
                f"|theta_0| = {abs(self.theta_0):g} exceeds the small-twist "
                f"regime (> {SMALL_TWIST_LIMIT}); first-order tensors degrade "
                "as theta^2",
                ValidityWarning,
                stacklevel=3,
            )

    def angle_at(self, y: float) -> float:
        """Twist angle at position y along the cavity axis."""
        return self.theta_0 * y / self.length


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta):
        raise DomainError(f"twist angle must be finite, got {theta}")
    return theta


def rotation_matrix(theta: float) -> np.ndarray:
    """Rotation of the x-z plane by ``theta`` (y axis fixed).

    Row layout: ((cos, 0, sin), (0, 1, 0), (-sin, 0, cos)).
    """
    theta = _check_angle(theta)
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def permittivity_twisted_frame(medium: UniaxialMedium) -> np.ndarray:
    """Permittivity tensor in the frame attached to the crystal.

    Diagonal: (eps_o, eps_o, eps_e) with the optic axis along z.
    """
    return np.diag([medium.eps_o, medium.eps_o, medium.eps_e])


def permittivity_lab_exact(medium: UniaxialMedium, theta: float) -> np.ndarray:
    """Laboratory-frame permittivity R(theta) eps' R(theta)^T, exact.

    Symmetric positive definite with eigenvalues {eps_o, eps_o, eps_e}
    for every angle.
    """
    rot = rotation_matrix(theta)
    eps = rot @ permittivity_twisted_frame(medium) @ rot.T
    # rounding can leave a ~1e-16 asymmetry from the two matmuls
    return 0.5 * (eps + eps.T)


def permittivity_lab_first_order(medium: UniaxialMedium, theta: float) -> np.ndarray:
    """Laboratory-frame permittivity to first order in the twist angle.

    eps' + delta_eps * theta * LAMBDA4; differs from the exact tensor by
    O(theta^2) in any matrix norm.
    """
    theta = _check_angle(theta)
    return permittivity_twisted_frame(medium) + medium.delta_eps * theta * LAMBDA4


def perturbation_tensor(medium: UniaxialMedium, theta: float) -> np.ndarray:
    """First-order twist perturbation delta_eps * theta * LAMBDA4.

    Only the xz and zx entries are nonzero, both equal to
    delta_eps * theta.
    """
    theta = _check_angle(theta)
    return medium.delta_eps * theta * LAMBDA4
