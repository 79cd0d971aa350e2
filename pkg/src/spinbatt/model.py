"""Battery specification and dense Hamiltonian assembly for the XXZ chain.

Conventions:
    * Computational (sigma^z) basis. Site 0 is the most significant bit of
      the basis index; bit value 0 means up (+1 eigenvalue of sigma^z),
      bit value 1 means down (-1).
    * The all-down product state therefore sits at basis index 2^N - 1.
    * Energies are measured in units of the Zeeman splitting B; hbar,
      magnetic moment and lattice spacing are all 1.
    * The chain is open (no wrap-around bond).

The transverse part of the exchange, sigma^x sigma^x + sigma^y sigma^y, is
assembled as the real flip-flop matrix 2(|ud><du| + |du><ud|), so every
operator built here is real symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapacityError

# Dense 2^N x 2^N assembly; beyond this eigendecomposition stops being a
# desk-scale computation.
MAX_SPINS = 14

COUPLING_SCHEMES = ("none", "nn", "lr")


@dataclass(frozen=True)
class BatterySpec:
    """Full physical parameter set of one battery instance.

    coupling is one of "none", "nn" (nearest neighbor), "lr" (long range,
    pair strength g / |i-j|**p).  p is only meaningful for "lr"; p = 0
    reproduces the uniform infinite-range case g_ij = g.
    """

    n_spins: int
    field_b: float = 1.0
    omega: float = 0.0
    g_strength: float = 0.0
    alpha: float = 0.0
    coupling: str = "none"
    p: float = 0.0

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError(f"n_spins must be >= 1, got {self.n_spins}")
        if self.field_b < 0:
            raise ValueError(f"field_b must be >= 0, got {self.field_b}")
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        if self.g_strength < 0:
            raise ValueError(f"g_strength must be >= 0 (attractive), got {self.g_strength}")
        if abs(self.alpha) > 1:
            raise ValueError(f"|alpha| must be <= 1, got {self.alpha}")
        if self.coupling not in COUPLING_SCHEMES:
            raise ValueError(f"coupling must be one of {COUPLING_SCHEMES}, got {self.coupling!r}")
        if self.p < 0:
            raise ValueError(f"p must be >= 0, got {self.p}")

    @property
    def dim(self) -> int:
        return 2**self.n_spins


def ensure_dense_capacity(n_spins: int) -> None:
    """Dense 2^N assembly is rejected beyond MAX_SPINS.

    Only quantum operators are capped; the mean-field chain scales as N
    and has no such limit.
    """
    if n_spins > MAX_SPINS:
        raise CapacityError(
            f"n_spins = {n_spins} exceeds the dense-assembly limit of "
            f"{MAX_SPINS} spins (2^{n_spins}-dimensional matrices)"
        )


@dataclass(frozen=True)
class CouplingMatrix:
    """Symmetric pair-coupling matrix g_ij with zero diagonal and its sum G."""

    matrix: np.ndarray  # (N, N), symmetric, zero diagonal
    total: float        # G = sum_{i<j} g_ij


@dataclass(frozen=True)
class PauliTerm:
    """One product of single-site Pauli factors with a real coefficient.

    factors: tuple of (site, axis) with distinct 0-based sites, axis in
    {"x", "y", "z"}.  Sparse intermediate used for cross-checking the real
    assembly against the textbook tensor-product construction.
    """

    coefficient: float
    factors: tuple

    def __post_init__(self):
        sites = [s for s, _ in self.factors]
        if len(set(sites)) != len(sites):
            raise ValueError("PauliTerm factors must act on distinct sites")
        for _, ax in self.factors:
            if ax not in ("x", "y", "z"):
                raise ValueError(f"unknown Pauli axis {ax!r}")


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_term_matrix(term: PauliTerm, n_spins: int) -> np.ndarray:
    """Dense complex matrix of one PauliTerm via explicit tensor products."""
    factors = dict(term.factors)
    op = np.array([[term.coefficient]], dtype=complex)
    for site in range(n_spins):
        op = np.kron(op, _PAULI[factors[site]] if site in factors else np.eye(2))
    return op


def z_signs(n_spins: int) -> np.ndarray:
    """(2^N, N) array of sigma^z eigenvalues (+-1) per basis state and site."""
    idx = np.arange(2**n_spins)
    bits = (idx[:, None] >> (n_spins - 1 - np.arange(n_spins))) & 1
    return 1 - 2 * bits


def build_coupling(spec: BatterySpec) -> CouplingMatrix:
    """Pair couplings g_ij for the chosen scheme, plus G = sum_{i<j} g_ij."""
    n = spec.n_spins
    g = np.zeros((n, n))
    if spec.coupling == "nn" and spec.g_strength:
        for i in range(n - 1):
            g[i, i + 1] = g[i + 1, i] = spec.g_strength
    elif spec.coupling == "lr" and spec.g_strength:
        for i, j in combinations(range(n), 2):
            gij = spec.g_strength / abs(i - j) ** spec.p
            g[i, j] = g[j, i] = gij
    return CouplingMatrix(matrix=g, total=float(np.triu(g).sum()))


def build_h_b(spec: BatterySpec) -> np.ndarray:
    """Zeeman term H_B = B sum_i sigma_i^z (diagonal)."""
    ensure_dense_capacity(spec.n_spins)
    return np.diag(spec.field_b * z_signs(spec.n_spins).sum(axis=1).astype(float))


def build_h_g(spec: BatterySpec, coupling: CouplingMatrix | None = None) -> np.ndarray:
    """Exchange term -sum_{i<j} g_ij [z z + alpha (x x + y y)], real symmetric."""
    ensure_dense_capacity(spec.n_spins)
    if coupling is None:
        coupling = build_coupling(spec)
    n, g = spec.n_spins, coupling.matrix
    s = z_signs(n)
    # zz part: diagonal, sum over ordered pairs = half the symmetric double sum
    h = np.diag(-0.5 * np.einsum("ki,ij,kj->k", s, g, s))
    if spec.alpha:
        idx = np.arange(2**n)
        for i, j in combinations(range(n), 2):
            if not g[i, j]:
                continue
            # flip-flop connects |...u...d...> <-> |...d...u...>
            mask = (1 << (n - 1 - i)) | (1 << (n - 1 - j))
            rows = idx[s[:, i] != s[:, j]]
            h[rows, rows ^ mask] += -2.0 * spec.alpha * g[i, j]
    return h


def build_v(spec: BatterySpec) -> np.ndarray:
    """Charging field V = omega sum_i sigma_i^x, real symmetric, zero diagonal."""
    ensure_dense_capacity(spec.n_spins)
    n = spec.n_spins
    v = np.zeros((2**n, 2**n))
    idx = np.arange(2**n)
    for i in range(n):
        v[idx, idx ^ (1 << (n - 1 - i))] += spec.omega
    return v


def pauli_sum(axis: str, n_spins: int) -> np.ndarray:
    """Dense sum_i sigma_i^axis (complex for axis="y")."""
    n = n_spins
    idx = np.arange(2**n)
    if axis == "z":
        return np.diag(z_signs(n).sum(axis=1)).astype(complex)
    op = np.zeros((2**n, 2**n), dtype=complex)
    s = z_signs(n)
    for i in range(n):
        flipped = idx ^ (1 << (n - 1 - i))
        if axis == "x":
            op[idx, flipped] += 1.0
        else:  # y: <u|sy|d> = -i, <d|sy|u> = +i
            op[idx, flipped] += np.where(s[:, i] == 1, -1j, 1j)
    return op


def assemble(spec: BatterySpec):
    """Static and charging Hamiltonians (H_0 = H_B + H_g, H = H_g + V).

    H deliberately carries no Zeeman term: during charging the splitting
    field is replaced by the transverse drive.
    """
    coupling = build_coupling(spec)
    h_g = build_h_g(spec, coupling)
    h_0 = build_h_b(spec) + h_g
    h = h_g + build_v(spec)
    return h_0, h


def all_down_index(spec: BatterySpec) -> int:
    return spec.dim - 1
