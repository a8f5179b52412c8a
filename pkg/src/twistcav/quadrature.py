"""Cauchy principal-value quadrature with symmetric pole excision.

Computes P int_a^b f(w) / (pole - w) dw for f smooth on [a, b].  The
excised window [pole - eta, pole + eta] is folded into a single paired
integral

    int_eta^d [f(pole - u) - f(pole + u)] / u du,

which is the symmetric-excision principal value written in a form whose
pairwise cancellation is exact for even f.  Panels are Gauss-Legendre,
laid out geometrically away from the pole; eta is halved until the newly
uncovered band contributes less than the tolerance, and the remaining
tail (linear in eta) is removed by one Richardson step.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = ["QuadratureSpec", "PrincipalValueResult", "principal_value"]

#: Roundoff floor multiplier: convergence is declared relative to
#: max(|value|, floor) with floor = _NOISE_FLOOR * eps * (gross mass), so
#: integrals that cancel to ~0 (even integrands) still converge.
_NOISE_FLOOR = 64.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the principal-value integration.

    eta: initial excision half-width (defaults to half the distance from
    the pole to the nearest endpoint); nodes: Gauss-Legendre nodes per
    panel; rel_tol: relative convergence target for the eta refinement;
    max_refinements: halvings of eta before giving up.
    """

    eta: float | None = None
    nodes: int = 24
    rel_tol: float = 1e-6
    max_refinements: int = 48

    def __post_init__(self):
        if self.eta is not None and not (self.eta > 0):
            raise DomainError(f"eta must be positive, got {self.eta}")
        if self.nodes < 2:
            raise DomainError(f"need at least 2 nodes per panel, got {self.nodes}")
        if not (0 < self.rel_tol < 1):
            raise DomainError(f"rel_tol must be in (0, 1), got {self.rel_tol}")


@dataclass(frozen=True)
class PrincipalValueResult:
    value: float
    eta: float
    refinements: int
    converged: bool
    #: sum of |weight * integrand| over all evaluated nodes; scale used
    #: for the roundoff floor
    gross: float


@lru_cache(maxsize=8)
def _gl_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _geometric_edges(start: float, stop: float) -> np.ndarray:
    """Panel edges start, 2*start, 4*start, ... clipped at stop."""
    edges = [start]
    d = start
    while d < stop:
        d = min(2.0 * d, stop)
        edges.append(d)
    return np.array(edges)


class _PanelIntegrator:
    def __init__(self, func, nodes: int):
        self.func = func
        self.x, self.w = _gl_nodes(nodes)
        self.gross = 0.0

    def __call__(self, a: float, b: float) -> float:
        half = 0.5 * (b - a)
        pts = half * self.x + 0.5 * (b + a)
        vals = self.w * self.func(pts)
        self.gross += half * float(np.sum(np.abs(vals)))
        return half * float(np.sum(vals))

    def over(self, edges: np.ndarray) -> float:
        return sum(self(a, b) for a, b in zip(edges[:-1], edges[1:]))


def principal_value(
    func,
    pole: float,
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> PrincipalValueResult:
    """P int_a^b func(w) / (pole - w) dw.

    ``func`` must accept numpy arrays.  The pole may also lie outside
    [a, b], in which case the integral is regular and no excision is
    performed.
    """
    if spec is None:
        spec = QuadratureSpec()
    if not (b > a):
        raise DomainError(f"empty integration interval [{a}, {b}]")

    regular = _PanelIntegrator(lambda w: func(w) / (pole - w), spec.nodes)

    if not (a < pole < b):
        # no singularity inside the support: plain panel quadrature,
        # geometrically refined toward the endpoint nearest the pole
        near = min(abs(pole - a), abs(pole - b))
        if near == 0.0:
            raise DomainError(
                f"pole at {pole} sits on the integration boundary; the "
                "integral is not defined there"
            )
        near_a = abs(pole - a) <= abs(pole - b)
        width = b - a
        offsets = _geometric_edges(min(0.5 * near, width), width)
        edges = a + offsets if near_a else b - offsets[::-1]
        edges[0], edges[-1] = a, b
        value = regular.over(edges)
        return PrincipalValueResult(
            value=value, eta=0.0, refinements=0, converged=True, gross=regular.gross
        )

    d_left = pole - a
    d_right = b - pole
    d_min = min(d_left, d_right)

    eta = spec.eta if spec.eta is not None else 0.5 * d_min
    if eta >= d_min:
        eta = 0.5 * d_min

    paired = _PanelIntegrator(
        lambda u: (func(pole - u) - func(pole + u)) / u, spec.nodes
    )

    # asymmetric leftover beyond the paired window, on the wider side
    leftover = 0.0
    if d_right > d_min:
        leftover = regular.over(pole + _geometric_edges(d_min, d_right))
    elif d_left > d_min:
        leftover = regular.over(pole - _geometric_edges(d_min, d_left)[::-1])

    total = leftover + paired.over(_geometric_edges(eta, d_min))

    converged = False
    increment = 0.0
    refinements = 0
    previous = total
    for refinements in range(1, spec.max_refinements + 1):
        increment = paired(0.5 * eta, eta)
        eta *= 0.5
        previous = total
        total += increment
        gross = regular.gross + paired.gross
        floor = _NOISE_FLOOR * np.finfo(float).eps * gross
        if abs(increment) <= spec.rel_tol * max(abs(total), floor):
            converged = True
            break

    if not converged:
        raise ConvergenceError(
            f"principal-value refinement did not converge after "
            f"{spec.max_refinements} eta-halvings (last increment "
            f"{increment:.3e} against value {total:.6e})",
            last=total,
            previous=previous,
        )

    # Richardson step: the un-excised tail int_0^eta equals the last
    # increment to leading (linear) order in eta
    total += increment
    return PrincipalValueResult(
        value=total,
        eta=eta,
        refinements=refinements,
        converged=True,
        gross=regular.gross + paired.gross,
    )
