"""Pure-numpy fallback for the compiled RK4 chain kernel.

Same contract as spinbatt._chain_rk4.integrate_chain_rk4; used when the
Cython extension is not built, and as the reference in kernel tests and
the benchmark.
"""

from __future__ import annotations

import numpy as np


def _deriv(gmat, alpha, omega, s):
    field = np.empty_like(s)
    field[:, 0] = omega - alpha * (gmat @ s[:, 0])
    field[:, 1] = -alpha * (gmat @ s[:, 1])
    field[:, 2] = -(gmat @ s[:, 2])
    return 2.0 * np.cross(field, s)


def _pair_energy(gmat, alpha, s):
    pair = (s[:, 2] @ gmat @ s[:, 2]
            + alpha * (s[:, 0] @ gmat @ s[:, 0] + s[:, 1] @ gmat @ s[:, 1]))
    return -0.5 * pair


def _static_energy(gmat, alpha, b, s):
    return b * s[:, 2].sum() + _pair_energy(gmat, alpha, s)


def _charging_energy(gmat, alpha, omega, s):
    return omega * s[:, 0].sum() + _pair_energy(gmat, alpha, s)


def integrate_chain_rk4(gmat, alpha, b, omega, s_init, dt, n_steps):
    """Fixed-step RK4 from s_init; no per-step renormalization.

    Returns (times, work, charging_energy, mean_spins, final_spins,
    max_norm_drift).
    """
    n = s_init.shape[0]
    times = np.arange(n_steps + 1) * dt
    work = np.empty(n_steps + 1)
    echg = np.empty(n_steps + 1)
    mean = np.empty((n_steps + 1, 3))
    s = np.array(s_init, dtype=float, copy=True)
    e0 = _static_energy(gmat, alpha, b, s)
    drift = 0.0
    for step in range(n_steps + 1):
        work[step] = _static_energy(gmat, alpha, b, s) - e0
        echg[step] = _charging_energy(gmat, alpha, omega, s)
        mean[step] = s.mean(axis=0)
        drift = max(drift, float(np.abs(np.linalg.norm(s, axis=1) - 1.0).max()))
        if step == n_steps:
            break
        k1 = _deriv(gmat, alpha, omega, s)
        k2 = _deriv(gmat, alpha, omega, s + 0.5 * dt * k1)
        k3 = _deriv(gmat, alpha, omega, s + 0.5 * dt * k2)
        k4 = _deriv(gmat, alpha, omega, s + dt * k3)
        s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return times, work, echg, mean, s, drift
