# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernel for the classical torque equations of the spin chain.

dS_m/dt = 2 (dH_C/dS_m) x S_m with the charging Hamiltonian (no Zeeman
term); the work series is evaluated against the static energy (with the
Zeeman term).  Same contract as spinbatt._chain_rk4_py.
"""

import numpy as np

from libc.math cimport sqrt, fabs


cdef void _deriv(double[:, ::1] g, double alpha, double omega,
                 double[:, ::1] s, double[:, ::1] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t m, j
    cdef double fx, fy, fz, gmj
    for m in range(n):
        fx = omega
        fy = 0.0
        fz = 0.0
        for j in range(n):
            gmj = g[m, j]
            if gmj != 0.0:
                fx -= alpha * gmj * s[j, 0]
                fy -= alpha * gmj * s[j, 1]
                fz -= gmj * s[j, 2]
        # 2 F x S
        out[m, 0] = 2.0 * (fy * s[m, 2] - fz * s[m, 1])
        out[m, 1] = 2.0 * (fz * s[m, 0] - fx * s[m, 2])
        out[m, 2] = 2.0 * (fx * s[m, 1] - fy * s[m, 0])


cdef double _pair_energy(double[:, ::1] g, double alpha,
                         double[:, ::1] s, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t m, j
    cdef double pair = 0.0, gmj
    for m in range(n):
        for j in range(n):
            gmj = g[m, j]
            if gmj != 0.0:
                pair += gmj * (s[m, 2] * s[j, 2]
                               + alpha * (s[m, 0] * s[j, 0] + s[m, 1] * s[j, 1]))
    return -0.5 * pair


cdef double _static_energy(double[:, ::1] g, double alpha, double b,
                           double[:, ::1] s, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t m
    cdef double e = _pair_energy(g, alpha, s, n)
    for m in range(n):
        e += b * s[m, 2]
    return e


cdef double _charging_energy(double[:, ::1] g, double alpha, double omega,
                             double[:, ::1] s, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t m
    cdef double e = _pair_energy(g, alpha, s, n)
    for m in range(n):
        e += omega * s[m, 0]
    return e


def integrate_chain_rk4(double[:, ::1] gmat, double alpha, double b, double omega,
                        double[:, ::1] s_init, double dt, Py_ssize_t n_steps):
    """Fixed-step RK4 from s_init; no per-step renormalization.

    Returns (times, work, charging_energy, mean_spins, final_spins,
    max_norm_drift).
    """
    cdef Py_ssize_t n = s_init.shape[0]
    cdef Py_ssize_t step, m, k

    times_np = np.empty(n_steps + 1)
    work_np = np.empty(n_steps + 1)
    echg_np = np.empty(n_steps + 1)
    mean_np = np.empty((n_steps + 1, 3))
    s_np = np.array(s_init, dtype=np.float64, copy=True)

    k1_np = np.empty((n, 3)); k2_np = np.empty((n, 3))
    k3_np = np.empty((n, 3)); k4_np = np.empty((n, 3))
    tmp_np = np.empty((n, 3))

    cdef double[::1] times = times_np
    cdef double[::1] work = work_np
    cdef double[::1] echg = echg_np
    cdef double[:, ::1] mean = mean_np
    cdef double[:, ::1] s = s_np
    cdef double[:, ::1] k1 = k1_np, k2 = k2_np, k3 = k3_np, k4 = k4_np, tmp = tmp_np

    cdef double e0 = _static_energy(gmat, alpha, b, s, n)
    cdef double drift = 0.0, norm, h6 = dt / 6.0, h2 = dt / 2.0
    cdef double mx, my, mz

    with nogil:
        for step in range(n_steps + 1):
            times[step] = step * dt
            work[step] = _static_energy(gmat, alpha, b, s, n) - e0
            echg[step] = _charging_energy(gmat, alpha, omega, s, n)
            mx = 0.0; my = 0.0; mz = 0.0
            for m in range(n):
                mx += s[m, 0]; my += s[m, 1]; mz += s[m, 2]
                norm = sqrt(s[m, 0] ** 2 + s[m, 1] ** 2 + s[m, 2] ** 2)
                if fabs(norm - 1.0) > drift:
                    drift = fabs(norm - 1.0)
            mean[step, 0] = mx / n; mean[step, 1] = my / n; mean[step, 2] = mz / n
            if step == n_steps:
                break

            _deriv(gmat, alpha, omega, s, k1, n)
            for m in range(n):
                for k in range(3):
                    tmp[m, k] = s[m, k] + h2 * k1[m, k]
            _deriv(gmat, alpha, omega, tmp, k2, n)
            for m in range(n):
                for k in range(3):
                    tmp[m, k] = s[m, k] + h2 * k2[m, k]
            _deriv(gmat, alpha, omega, tmp, k3, n)
            for m in range(n):
                for k in range(3):
                    tmp[m, k] = s[m, k] + dt * k3[m, k]
            _deriv(gmat, alpha, omega, tmp, k4, n)
            for m in range(n):
                for k in range(3):
                    s[m, k] += h6 * (k1[m, k] + 2.0 * k2[m, k] + 2.0 * k3[m, k] + k4[m, k])

    return times_np, work_np, echg_np, mean_np, s_np, drift
