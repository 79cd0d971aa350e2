"""Closed-form charging results used as references and oracles.

Covers: the single-spin drive, the first-order weak-coupling work and its
extrema, the strong-coupling fast/slow oscillations for two and three
spins, and the growth class of the total coupling G with chain length.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from . import model


def single_spin_work(b: float, omega: float, t: float) -> float:
    """W for one driven spin: 2 B sin^2(omega t).  Max 2B at omega t = pi/2."""
    return 2 * b * np.sin(omega * t) ** 2


def single_spin_power_optimum(b: float, omega: float):
    """(T*, P*) maximizing 2 B sin^2(omega T) / T.

    The maximizer solves tan(x) = 2x with x = omega T, x* ~ 1.1656, giving
    P* ~ 1.449 omega B; no closed form, so refine numerically.
    """
    res = minimize_scalar(
        lambda x: -2 * b * np.sin(x) ** 2 / x,
        bracket=(0.8, 1.1656, 1.5), method="golden", options={"xtol": 1e-13},
    )
    return float(res.x / omega), float(-res.fun * omega)


def weak_coupling_work(spec: model.BatterySpec, t) -> float | np.ndarray:
    """First-order work 2BN sin^2(wt) + (1-alpha) G sin^2(2wt).

    Also the exact work when the interactions are frozen during charging,
    for any coupling strength.
    """
    g_total = model.build_coupling(spec).total
    wt = spec.omega * np.asarray(t, dtype=float)
    out = (2 * spec.field_b * spec.n_spins * np.sin(wt) ** 2
           + (1 - spec.alpha) * g_total * np.sin(2 * wt) ** 2)
    return float(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class WeakCouplingPrediction:
    """Extrema of the first-order work curve.

    t_max2/w_max2 exist only when 2(1-alpha)G/BN > 1, i.e. when the
    interaction bonus pushes the true maximum off the independent-spin one.
    """

    b: float
    n_spins: int
    omega: float
    alpha: float
    g_total: float
    t_max1: float
    w_max1: float
    t_max2: float | None
    w_max2: float | None
    t_p_max: float
    p_max: float


def weak_coupling_extrema(spec: model.BatterySpec) -> WeakCouplingPrediction:
    b, n, omega, alpha = spec.field_b, spec.n_spins, spec.omega, spec.alpha
    g_total = model.build_coupling(spec).total
    t_max1 = np.pi / (2 * omega)
    w_max1 = 2 * b * n
    t_max2 = w_max2 = None
    bonus = (1 - alpha) * g_total
    if bonus > 0 and 2 * bonus / (b * n) > 1:
        # cos(2 w T) at the shifted maximum; principal arccos gives the
        # earliest positive maximizer
        c = -b * n / (2 * bonus)
        t_max2 = float(np.arccos(c) / (2 * omega))
        w_max2 = float(b**2 * n**2 * (1 + 2 * bonus / (b * n)) ** 2 / (4 * bonus))

    def neg_power(t):
        wt = omega * t
        return -(4 * omega * (b * n / 2 + bonus * np.cos(wt) ** 2)
                 * np.sin(wt) ** 2 / wt)

    # no closed-form maximizer; coarse grid on (0, pi/omega] then refine
    ts = np.linspace(1e-6, np.pi / omega, 800)
    i = int(np.argmin([neg_power(t) for t in ts]))
    res = minimize_scalar(neg_power, bracket=(ts[max(i - 1, 0)], ts[i], ts[min(i + 1, len(ts) - 1)]),
                          method="golden", options={"xtol": 1e-13})
    return WeakCouplingPrediction(
        b=b, n_spins=n, omega=omega, alpha=alpha, g_total=g_total,
        t_max1=float(t_max1), w_max1=float(w_max1),
        t_max2=t_max2, w_max2=w_max2,
        t_p_max=float(res.x), p_max=float(-res.fun),
    )


def strong_coupling_fast(omega: float, g: float, t) -> float | np.ndarray:
    """Fast work oscillations (4 omega^2 / g) sin^2(g t), valid t << g/omega^2."""
    out = 4 * omega**2 / g * np.sin(g * np.asarray(t, dtype=float)) ** 2
    return float(out) if np.isscalar(t) else out


def strong_coupling_slow(b: float, omega: float, g: float, n_spins: int, t):
    """Slow (emergent N-body) work oscillations for two or three spins.

    N = 2: 2 omega^2/g + 4B sin^2(omega^2 t / g); the offset is the
    averaged-out fast oscillation.  N = 3 (uniform coupling):
    6B sin^2(3 omega^3 t / 8 g^2), no offset in the stated form.  Valid for
    t >> 1/g.  The general-N coefficient depends on the interaction range,
    so other sizes are unsupported.
    """
    tt = np.asarray(t, dtype=float)
    if n_spins == 2:
        out = 2 * omega**2 / g + 4 * b * np.sin(omega**2 * tt / g) ** 2
    elif n_spins == 3:
        out = 6 * b * np.sin(3 * omega**3 * tt / (8 * g**2)) ** 2
    else:
        raise ValueError(f"slow-oscillation closed form only known for 2 or 3 spins, got {n_spins}")
    return float(out) if np.isscalar(t) else out


@dataclass(frozen=True)
class StrongCouplingPrediction:
    """Amplitudes and frequencies of the two strong-coupling regimes."""

    fast_amplitude: float   # 4 omega^2 / g, for t << g / omega^2
    fast_frequency: float   # g
    slow_offset: float      # 2 omega^2 / g (N=2); absent in the N=3 form
    slow_amplitude: float   # 4B (N=2) or 6B (N=3)
    slow_frequency: float   # omega^2/g (N=2) or 3 omega^3 / 8 g^2 (N=3)


def strong_coupling_prediction(b: float, omega: float, g: float,
                               n_spins: int) -> StrongCouplingPrediction:
    if n_spins == 2:
        return StrongCouplingPrediction(
            fast_amplitude=4 * omega**2 / g, fast_frequency=g,
            slow_offset=2 * omega**2 / g, slow_amplitude=4 * b,
            slow_frequency=omega**2 / g,
        )
    if n_spins == 3:
        return StrongCouplingPrediction(
            fast_amplitude=4 * omega**2 / g, fast_frequency=g,
            slow_offset=0.0, slow_amplitude=6 * b,
            slow_frequency=3 * omega**3 / (8 * g**2),
        )
    raise ValueError(f"strong-coupling prediction only known for 2 or 3 spins, got {n_spins}")


class GrowthClass(enum.Enum):
    CONSTANT = "constant"
    LOG_N = "log N"
    LINEAR = "N"
    N_LOG_N = "N log N"
    QUADRATIC = "N^2"


class GScaling(NamedTuple):
    """Growth class of G = sum g_ij, and of the power enhancement G/N."""

    total: GrowthClass
    enhancement: GrowthClass


def g_scaling_class(coupling: str, p: float = 0.0) -> GScaling:
    """How the total coupling grows with chain length.

    Finite range (NN, or long range decaying faster than 1/r) gives G ~ N
    and only a constant power boost; 1/r gives G ~ N log N; uniform
    infinite range gives G ~ N^2 and an O(N) boost.  Sub-linear decay
    0 < p < 1 (G ~ N^(2-p)) is lumped into the super-extensive polynomial
    class.
    """
    if coupling == "none":
        return GScaling(GrowthClass.CONSTANT, GrowthClass.CONSTANT)
    if coupling == "nn" or (coupling == "lr" and p > 1):
        return GScaling(GrowthClass.LINEAR, GrowthClass.CONSTANT)
    if coupling == "lr" and p == 1:
        return GScaling(GrowthClass.N_LOG_N, GrowthClass.LOG_N)
    if coupling == "lr":
        return GScaling(GrowthClass.QUADRATIC, GrowthClass.LINEAR)
    raise ValueError(f"unknown coupling scheme {coupling!r}")
