"""Correlation-free dynamics: classical Bloch-vector chain and the
collective spin of the infinite-range model.

Each spin is a unit 3-vector precessing in the instantaneous field of the
rest of the chain (no quantum back action).  The flow Hamiltonian is the
classical counterpart of H = H_g + V; the work functional uses the static
counterpart of H_0 = H_B + H_g, mirroring the quantum protocol.

The per-step RK4 loop is the only hot pure-Python-level loop in the
package, so it lives in a compiled Cython kernel when available, with a
numpy fallback selected at import time.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import RegimeError

try:
    from ._chain_rk4 import integrate_chain_rk4 as _rk4_kernel
    KERNEL_BACKEND = "cython"
except ImportError:  # extension not built; pure-numpy fallback
    from ._chain_rk4_py import integrate_chain_rk4 as _rk4_kernel
    KERNEL_BACKEND = "python"

# RK4 keeps |S_m| = 1 only approximately; beyond this the step is too big.
_MAX_NORM_DRIFT = 1e-6


def kernel_backend() -> str:
    """Which RK4 kernel was selected at import ("cython" or "python")."""
    return KERNEL_BACKEND


def all_down_chain(n_spins: int) -> np.ndarray:
    """(N, 3) array of Bloch vectors (0, 0, -1), mirroring the quantum rho_down."""
    s = np.zeros((n_spins, 3))
    s[:, 2] = -1.0
    return s


def classical_energy(spec: model.BatterySpec, state: np.ndarray,
                     charging: bool) -> float:
    """Classical Hamiltonian with sigma -> S substitution.

    charging=False: B sum S_z + interactions (counterpart of H_0);
    charging=True: interactions + omega sum S_x (counterpart of H = H_g + V).
    """
    g = model.build_coupling(spec).matrix
    sx, sy, sz = state[:, 0], state[:, 1], state[:, 2]
    pair = sz @ g @ sz + spec.alpha * (sx @ g @ sx + sy @ g @ sy)
    e = -0.5 * pair
    if charging:
        e += spec.omega * sx.sum()
    else:
        e += spec.field_b * sz.sum()
    return float(e)


def torque_field(spec: model.BatterySpec, state: np.ndarray, m: int) -> np.ndarray:
    """Gradient of the charging classical Hamiltonian w.r.t. spin m (0-based).

    The Zeeman term is absent during charging, so B does not appear; it
    enters only through the work functional.
    """
    g = model.build_coupling(spec).matrix[m]
    return np.array([
        spec.omega - spec.alpha * (g @ state[:, 0]),
        -spec.alpha * (g @ state[:, 1]),
        -(g @ state[:, 2]),
    ])


@dataclass(frozen=True)
class ChainTrace:
    """Classical work trace with the mean Bloch vector and drift diagnostic."""

    times: np.ndarray
    work: np.ndarray
    power: np.ndarray
    charging_energy: np.ndarray  # H_C of the flow, conserved up to RK4 error
    mean_spins: np.ndarray       # (steps+1, 3)
    final_spins: np.ndarray      # (N, 3)
    max_norm_drift: float
    max_work: tuple
    max_power: tuple


def _grid_peak(times: np.ndarray, values: np.ndarray, skip_zero: bool = False):
    """Earliest grid maximum (within 1e-9 of the global one), parabolic refine."""
    v = values.copy()
    if skip_zero:
        v[0] = -np.inf
    top = v.max()
    i = int(np.argmax(v))
    for j in range(1, len(v)):
        left = v[j] >= v[j - 1]
        right = v[j] >= v[j + 1] if j + 1 < len(v) else True
        if left and right and v[j] >= top - 1e-9:
            i = j
            break
    if 0 < i < len(v) - 1:
        # vertex of the parabola through the three samples around the max
        y0, y1, y2 = values[i - 1], values[i], values[i + 1]
        denom = y0 - 2 * y1 + y2
        if denom < 0:
            delta = 0.5 * (y0 - y2) / denom
            h = times[1] - times[0]
            return float(times[i] + delta * h), float(y1 - 0.25 * (y0 - y2) * delta)
    return float(times[i]), float(values[i])


def _check_step(spec: model.BatterySpec, dt: float) -> None:
    rate = max(spec.omega, spec.g_strength * spec.n_spins, spec.field_b)
    if dt * rate > 0.05:
        warnings.warn(
            f"dt * max rate = {dt * rate:.3g} > 0.05; RK4 accuracy degrades",
            stacklevel=3,
        )


def integrate_chain(spec: model.BatterySpec, t_max: float, dt: float) -> ChainTrace:
    """RK4 integration of the coupled torque equations from the all-down state."""
    _check_step(spec, dt)
    n_steps = max(int(round(t_max / dt)), 1)
    g = np.ascontiguousarray(model.build_coupling(spec).matrix)
    times, work, echg, mean, final, drift = _rk4_kernel(
        g, spec.alpha, spec.field_b, spec.omega, all_down_chain(spec.n_spins),
        dt, n_steps,
    )
    if drift > _MAX_NORM_DRIFT:
        raise RegimeError(
            f"Bloch-vector norm drift {drift:.3g} exceeds {_MAX_NORM_DRIFT:g}; "
            "reduce dt"
        )
    power = np.zeros_like(work)
    power[1:] = work[1:] / times[1:]
    return ChainTrace(
        times=times, work=work, power=power, charging_energy=echg,
        mean_spins=mean, final_spins=final, max_norm_drift=float(drift),
        max_work=_grid_peak(times, work),
        max_power=_grid_peak(times, power, skip_zero=True),
    )


@dataclass(frozen=True)
class CollectiveTrace:
    """Work trace of the single collective spin of the p = 0 chain."""

    times: np.ndarray
    work: np.ndarray
    power: np.ndarray
    spins: np.ndarray           # (steps+1, 3) collective Bloch vector
    max_work: tuple
    max_power: tuple


def integrate_collective(spec: model.BatterySpec, t_max: float, dt: float) -> CollectiveTrace:
    """Equations of motion of the average spin for uniform infinite range.

    ds_x/dt =  2 g N (1-alpha) s_y s_z
    ds_y/dt = -2 omega s_z - 2 g N (1-alpha) s_x s_z
    ds_z/dt =  2 omega s_y
    (symmetrized operator products read as commuting classical products).
    Work = per-spin Zeeman energy x N plus the collective interaction energy.
    """
    if spec.coupling != "lr" or spec.p != 0:
        raise ValueError("collective-spin dynamics requires coupling='lr' with p=0")
    _check_step(spec, dt)
    n = spec.n_spins
    gn = spec.g_strength * n * (1 - spec.alpha)
    omega = spec.omega

    def deriv(s):
        return np.array([
            2 * gn * s[1] * s[2],
            -2 * omega * s[2] - 2 * gn * s[0] * s[2],
            2 * omega * s[1],
        ])

    n_steps = max(int(round(t_max / dt)), 1)
    times = np.arange(n_steps + 1) * dt
    traj = np.empty((n_steps + 1, 3))
    s = np.array([0.0, 0.0, -1.0])
    traj[0] = s
    for step in range(n_steps):
        k1 = deriv(s)
        k2 = deriv(s + 0.5 * dt * k1)
        k3 = deriv(s + 0.5 * dt * k2)
        k4 = deriv(s + dt * k3)
        s = s + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        traj[step + 1] = s

    def static_energy(sv):
        return (spec.field_b * n * sv[:, 2]
                - 0.5 * spec.g_strength * n**2
                * (sv[:, 2] ** 2 + spec.alpha * (sv[:, 0] ** 2 + sv[:, 1] ** 2)))

    work = static_energy(traj) - static_energy(traj[:1])
    power = np.zeros_like(work)
    power[1:] = work[1:] / times[1:]
    return CollectiveTrace(
        times=times, work=work, power=power, spins=traj,
        max_work=_grid_peak(times, work),
        max_power=_grid_peak(times, power, skip_zero=True),
    )


@dataclass(frozen=True)
class CollectiveSpinCheck:
    """Operator-level diagnostics of the average spin s_k = (1/N) sum sigma_i^k."""

    n_spins: int
    commutator_residual: float   # || [s_x, s_y] - (2i/N) s_z ||
    commutator_norm: float       # || [s_x, s_y] ||, should scale as 1/N
    casimir_commutator: float    # max_k || [s^2, s_k] ||
    casimir_expectation: float   # <s^2> in the all-down state, = 1 + 2/N


def commutator_scaling_check(n_spins: int) -> CollectiveSpinCheck:
    """Build the average-spin operators densely and measure their algebra."""
    if n_spins > 10:
        raise ValueError("dense operator check limited to 10 spins")
    ops = {ax: model.pauli_sum(ax, n_spins) / n_spins for ax in "xyz"}
    comm = ops["x"] @ ops["y"] - ops["y"] @ ops["x"]
    residual = np.linalg.norm(comm - (2j / n_spins) * ops["z"], 2)
    s2 = sum(ops[ax] @ ops[ax] for ax in "xyz")
    casimir_comm = max(
        np.linalg.norm(s2 @ ops[ax] - ops[ax] @ s2, 2) for ax in "xyz"
    )
    down = -1  # all-down basis index (last)
    return CollectiveSpinCheck(
        n_spins=n_spins,
        commutator_residual=float(residual),
        commutator_norm=float(np.linalg.norm(comm, 2)),
        casimir_commutator=float(casimir_comm),
        casimir_expectation=float(s2[down, down].real),
    )
