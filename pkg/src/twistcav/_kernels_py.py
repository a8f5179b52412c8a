"""Pure-Python/numpy fallback kernels.

Same call signatures and semantics as the compiled extension
``twistcav._kernels``; selected by :mod:`twistcav.backend` when the
extension is unavailable or disabled.  Both kernels are fixed-step
classical RK4 loops.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def lindblad_rk4(rho0, omega_eff, rate_down, rate_up, dt, n_steps, stride, renorm_tol):
    """RK4 trajectory of the 2x2 polarization master equation.

    Basis index 0 = ordinary, 1 = extraordinary.  Entries evolve under

        d rho_00 = -rate_down rho_00 + rate_up rho_11
        d rho_11 = +rate_down rho_00 - rate_up rho_11
        d rho_01 = (-i omega_eff - Gamma/2) rho_01,   Gamma = rate_down + rate_up
        d rho_10 = (+i omega_eff - Gamma/2) rho_10

    which is the componentwise form of the operator-algebra generator.
    n_steps must be a multiple of stride.  The trace is renormalized
    whenever its drift from 1 exceeds renorm_tol.

    Returns (samples, max_drift, n_renorm) with samples of shape
    (n_steps // stride + 1, 2, 2).
    """
    half_gamma = 0.5 * (rate_down + rate_up)
    lam_01 = -1j * omega_eff - half_gamma
    lam_10 = 1j * omega_eff - half_gamma

    r00 = complex(rho0[0, 0])
    r01 = complex(rho0[0, 1])
    r10 = complex(rho0[1, 0])
    r11 = complex(rho0[1, 1])

    n_samples = n_steps // stride + 1
    out = np.empty((n_samples, 2, 2), dtype=complex)
    out[0] = [[r00, r01], [r10, r11]]

    max_drift = 0.0
    n_renorm = 0
    sixth = dt / 6.0
    half = 0.5 * dt

    for step in range(1, n_steps + 1):
        k1_00 = -rate_down * r00 + rate_up * r11
        k1_11 = rate_down * r00 - rate_up * r11
        k1_01 = lam_01 * r01
        k1_10 = lam_10 * r10

        a00 = r00 + half * k1_00
        a11 = r11 + half * k1_11
        k2_00 = -rate_down * a00 + rate_up * a11
        k2_11 = rate_down * a00 - rate_up * a11
        k2_01 = lam_01 * (r01 + half * k1_01)
        k2_10 = lam_10 * (r10 + half * k1_10)

        a00 = r00 + half * k2_00
        a11 = r11 + half * k2_11
        k3_00 = -rate_down * a00 + rate_up * a11
        k3_11 = rate_down * a00 - rate_up * a11
        k3_01 = lam_01 * (r01 + half * k2_01)
        k3_10 = lam_10 * (r10 + half * k2_10)

        a00 = r00 + dt * k3_00
        a11 = r11 + dt * k3_11
        k4_00 = -rate_down * a00 + rate_up * a11
        k4_11 = rate_down * a00 - rate_up * a11
        k4_01 = lam_01 * (r01 + dt * k3_01)
        k4_10 = lam_10 * (r10 + dt * k3_10)

        r00 += sixth * (k1_00 + 2 * k2_00 + 2 * k3_00 + k4_00)
        r11 += sixth * (k1_11 + 2 * k2_11 + 2 * k3_11 + k4_11)
        r01 += sixth * (k1_01 + 2 * k2_01 + 2 * k3_01 + k4_01)
        r10 += sixth * (k1_10 + 2 * k2_10 + 2 * k3_10 + k4_10)

        drift = abs((r00 + r11).real - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > renorm_tol:
            trace = (r00 + r11).real
            r00 /= trace
            r11 /= trace
            r01 /= trace
            r10 /= trace
            n_renorm += 1

        if step % stride == 0:
            out[step // stride] = [[r00, r01], [r10, r11]]

    return out, max_drift, n_renorm


def bath_rk4(eps, g, dts, steps_per_segment):
    """RK4 evolution of the single-excitation bath problem at T = 0.

    State: excited amplitude c (initially 1) and bath amplitudes c_j
    (initially 0), in the frame rotating at the two-level splitting:

        dc/dt   = -i sum_j g_j c_j
        dc_j/dt = -i (eps_j c_j + g_j c)

    eps are the mode detunings, g the mode couplings.  Segment i of the
    output grid is covered by steps_per_segment[i] steps of size dts[i].

    Returns (survival, max_norm_drift) where survival[0] = 1 and
    survival[i] = |c|^2 after segment i.
    """
    eps = np.asarray(eps, dtype=float)
    g = np.asarray(g, dtype=float)
    c = 1.0 + 0.0j
    cj = np.zeros(eps.shape, dtype=complex)

    n_seg = len(steps_per_segment)
    survival = np.empty(n_seg + 1)
    survival[0] = 1.0
    max_drift = 0.0

    for i, n_steps in enumerate(steps_per_segment):
        dt = float(dts[i])
        sixth = dt / 6.0
        half = 0.5 * dt
        for _ in range(int(n_steps)):
            k1c = -1j * (g @ cj)
            k1j = -1j * (eps * cj + g * c)

            t = cj + half * k1j
            k2c = -1j * (g @ t)
            k2j = -1j * (eps * t + g * (c + half * k1c))

            t = cj + half * k2j
            k3c = -1j * (g @ t)
            k3j = -1j * (eps * t + g * (c + half * k2c))

            t = cj + dt * k3j
            k4c = -1j * (g @ t)
            k4j = -1j * (eps * t + g * (c + dt * k3c))

            c += sixth * (k1c + 2 * k2c + 2 * k3c + k4c)
            cj += sixth * (k1j + 2 * k2j + 2 * k3j + k4j)

        survival[i + 1] = abs(c) ** 2
        drift = abs(survival[i + 1] + float(np.sum(np.abs(cj) ** 2)) - 1.0)
        if drift > max_drift:
            max_drift = drift

    return survival, max_drift
