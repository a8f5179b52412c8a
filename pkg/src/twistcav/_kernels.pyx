# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: fixed-step RK4 loops for the 2x2 master
equation and the single-excitation bath evolution.

Mirror of ``twistcav._kernels_py``; see that module for the contract.
"""

import numpy as np

BACKEND = "compiled"


def lindblad_rk4(rho0, double omega_eff, double rate_down, double rate_up,
                 double dt, long n_steps, long stride, double renorm_tol):
    cdef double complex r00 = rho0[0, 0]
    cdef double complex r01 = rho0[0, 1]
    cdef double complex r10 = rho0[1, 0]
    cdef double complex r11 = rho0[1, 1]

    cdef double half_gamma = 0.5 * (rate_down + rate_up)
    cdef double complex lam01 = -1j * omega_eff - half_gamma
    cdef double complex lam10 = 1j * omega_eff - half_gamma

    cdef long n_samples = n_steps // stride + 1
    out = np.empty((n_samples, 2, 2), dtype=complex)
    cdef double complex[:, :, ::1] ov = out
    ov[0, 0, 0] = r00; ov[0, 0, 1] = r01
    ov[0, 1, 0] = r10; ov[0, 1, 1] = r11

    cdef double max_drift = 0.0, drift, trace
    cdef long n_renorm = 0
    cdef double sixth = dt / 6.0, half = 0.5 * dt
    cdef long step, s
    cdef double complex k1_00, k1_11, k1_01, k1_10
    cdef double complex k2_00, k2_11, k2_01, k2_10
    cdef double complex k3_00, k3_11, k3_01, k3_10
    cdef double complex k4_00, k4_11, k4_01, k4_10
    cdef double complex a00, a11

    for step in range(1, n_steps + 1):
        k1_00 = -rate_down * r00 + rate_up * r11
        k1_11 = rate_down * r00 - rate_up * r11
        k1_01 = lam01 * r01
        k1_10 = lam10 * r10

        a00 = r00 + half * k1_00
        a11 = r11 + half * k1_11
        k2_00 = -rate_down * a00 + rate_up * a11
        k2_11 = rate_down * a00 - rate_up * a11
        k2_01 = lam01 * (r01 + half * k1_01)
        k2_10 = lam10 * (r10 + half * k1_10)

        a00 = r00 + half * k2_00
        a11 = r11 + half * k2_11
        k3_00 = -rate_down * a00 + rate_up * a11
        k3_11 = rate_down * a00 - rate_up * a11
        k3_01 = lam01 * (r01 + half * k2_01)
        k3_10 = lam10 * (r10 + half * k2_10)

        a00 = r00 + dt * k3_00
        a11 = r11 + dt * k3_11
        k4_00 = -rate_down * a00 + rate_up * a11
        k4_11 = rate_down * a00 - rate_up * a11
        k4_01 = lam01 * (r01 + dt * k3_01)
        k4_10 = lam10 * (r10 + dt * k3_10)

        r00 = r00 + sixth * (k1_00 + 2 * k2_00 + 2 * k3_00 + k4_00)
        r11 = r11 + sixth * (k1_11 + 2 * k2_11 + 2 * k3_11 + k4_11)
        r01 = r01 + sixth * (k1_01 + 2 * k2_01 + 2 * k3_01 + k4_01)
        r10 = r10 + sixth * (k1_10 + 2 * k2_10 + 2 * k3_10 + k4_10)

        drift = abs((r00 + r11).real - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > renorm_tol:
            trace = (r00 + r11).real
            r00 = r00 / trace
            r11 = r11 / trace
            r01 = r01 / trace
            r10 = r10 / trace
            n_renorm += 1

        if step % stride == 0:
            s = step // stride
            ov[s, 0, 0] = r00; ov[s, 0, 1] = r01
            ov[s, 1, 0] = r10; ov[s, 1, 1] = r11

    return out, max_drift, n_renorm


def bath_rk4(eps_in, g_in, dts_in, steps_per_segment):
    # split real/imaginary state so the inner loops are pure real
    # arithmetic: -i (x + i y) has real part y and imaginary part -x
    eps_arr = np.ascontiguousarray(eps_in, dtype=float)
    g_arr = np.ascontiguousarray(g_in, dtype=float)
    dts_arr = np.ascontiguousarray(dts_in, dtype=float)
    steps_arr = np.ascontiguousarray(steps_per_segment, dtype=np.int64)

    cdef const double[::1] eps = eps_arr
    cdef const double[::1] g = g_arr
    cdef const double[::1] dts = dts_arr
    cdef const long long[::1] segs = steps_arr
    cdef Py_ssize_t m = eps.shape[0], j
    cdef long n_seg = segs.shape[0], i, step

    work = np.zeros((12, m))
    cdef double[:, ::1] w = work
    cdef double[::1] ar = w[0], ai = w[1]          # bath amplitudes
    cdef double[::1] k1r = w[2], k1i = w[3]
    cdef double[::1] k2r = w[4], k2i = w[5]
    cdef double[::1] k3r = w[6], k3i = w[7]
    cdef double[::1] k4r = w[8], k4i = w[9]
    cdef double[::1] tr = w[10], ti = w[11]

    survival = np.empty(n_seg + 1)
    cdef double[::1] sv = survival
    sv[0] = 1.0

    cdef double cr = 1.0, ci = 0.0
    cdef double k1cr, k1ci, k2cr, k2ci, k3cr, k3ci, k4cr, k4ci
    cdef double sr, si, csr, csi
    cdef double dt, sixth, half
    cdef double max_drift = 0.0, norm, drift

    for i in range(n_seg):
        dt = dts[i]
        sixth = dt / 6.0
        half = 0.5 * dt
        for step in range(segs[i]):
            sr = 0.0; si = 0.0
            for j in range(m):
                sr += g[j] * ar[j]
                si += g[j] * ai[j]
            k1cr = si; k1ci = -sr
            for j in range(m):
                k1r[j] = eps[j] * ai[j] + g[j] * ci
                k1i[j] = -(eps[j] * ar[j] + g[j] * cr)

            sr = 0.0; si = 0.0
            for j in range(m):
                tr[j] = ar[j] + half * k1r[j]
                ti[j] = ai[j] + half * k1i[j]
                sr += g[j] * tr[j]
                si += g[j] * ti[j]
            k2cr = si; k2ci = -sr
            csr = cr + half * k1cr; csi = ci + half * k1ci
            for j in range(m):
                k2r[j] = eps[j] * ti[j] + g[j] * csi
                k2i[j] = -(eps[j] * tr[j] + g[j] * csr)

            sr = 0.0; si = 0.0
            for j in range(m):
                tr[j] = ar[j] + half * k2r[j]
                ti[j] = ai[j] + half * k2i[j]
                sr += g[j] * tr[j]
                si += g[j] * ti[j]
            k3cr = si; k3ci = -sr
            csr = cr + half * k2cr; csi = ci + half * k2ci
            for j in range(m):
                k3r[j] = eps[j] * ti[j] + g[j] * csi
                k3i[j] = -(eps[j] * tr[j] + g[j] * csr)

            sr = 0.0; si = 0.0
            for j in range(m):
                tr[j] = ar[j] + dt * k3r[j]
                ti[j] = ai[j] + dt * k3i[j]
                sr += g[j] * tr[j]
                si += g[j] * ti[j]
            k4cr = si; k4ci = -sr
            csr = cr + dt * k3cr; csi = ci + dt * k3ci
            for j in range(m):
                k4r[j] = eps[j] * ti[j] + g[j] * csi
                k4i[j] = -(eps[j] * tr[j] + g[j] * csr)

            cr += sixth * (k1cr + 2 * k2cr + 2 * k3cr + k4cr)
            ci += sixth * (k1ci + 2 * k2ci + 2 * k3ci + k4ci)
            for j in range(m):
                ar[j] += sixth * (k1r[j] + 2 * k2r[j] + 2 * k3r[j] + k4r[j])
                ai[j] += sixth * (k1i[j] + 2 * k2i[j] + 2 * k3i[j] + k4i[j])

        sv[i + 1] = cr * cr + ci * ci
        norm = sv[i + 1]
        for j in range(m):
            norm += ar[j] * ar[j] + ai[j] * ai[j]
        drift = abs(norm - 1.0)
        if drift > max_drift:
            max_drift = drift

    return survival, max_drift
