"""Disordered two-stroke spin-chain model.

Builds the dense operators for an open chain of N spin-1/2 sites driven by
two alternating Hamiltonians: a field stroke H_z = (1/2) sum_i h_i sigma_i^z
and a coupling stroke H_x = sum_{i<N} J_i sigma_i^x sigma_{i+1}^x, with the
fields and couplings drawn from uniform disorder windows.  Also provides the
collective magnetization S_x, the bath coupling operator V, and the all-up-x
initial state.  Units: hbar = k_B = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .seeds import rng_from_seed

_ID = np.eye(2, dtype=complex)
_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli(n_spins: int, site: int, axis: str) -> np.ndarray:
    """Dense Pauli operator sigma_site^axis on the full 2^N space.

    Site indexing is 0-based; site 0 occupies the most significant qubit of
    the computational-basis index.
    """
    if not 0 <= site < n_spins:
        raise ValueError(f"site {site} out of range for {n_spins} spins")
    ops = [_ID] * n_spins
    ops[site] = _PAULI[axis]
    return reduce(np.kron, ops)


@dataclass(frozen=True)
class ModelParams:
    """Chain size, mean drive parameters, disorder half-widths, stroke durations."""

    N: int
    h_bar: float = np.pi
    delta_h: float = 0.5
    J_bar: float = np.pi / 4
    delta_J: float = 0.5
    T_z: float = 1.0
    T_x: float = 1.0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.T_z <= 0 or self.T_x <= 0:
            raise ValueError("stroke durations must be positive")
        if self.delta_h < 0 or self.delta_J < 0:
            raise ValueError("disorder half-widths must be nonnegative")

    @property
    def period(self) -> float:
        return self.T_z + self.T_x


@dataclass(frozen=True)
class DisorderRealization:
    """One draw of the random fields h (length N) and couplings J (length N-1)."""

    h: np.ndarray
    J: np.ndarray
    seed: int


@dataclass(frozen=True)
class SpinModel:
    """Dense operators for one disorder realization and one bath-coupling axis."""

    params: ModelParams
    disorder: DisorderRealization
    H_z: np.ndarray
    H_x: np.ndarray
    S_x: np.ndarray
    V: np.ndarray
    axis: str

    @property
    def dim(self) -> int:
        return self.H_z.shape[0]


def sample_disorder(params: ModelParams, seed: int) -> DisorderRealization:
    """Draw h_i = h_bar + delta_h * u_i and J_i = J_bar + delta_J * v_i.

    u_i, v_i are i.i.d. uniform on [-1, 1] from a PCG64 stream keyed by
    ``seed``; the h vector is drawn before the J vector, so a given seed
    reproduces the realization bit for bit.
    """
    rng = rng_from_seed(seed)
    h = params.h_bar + params.delta_h * rng.uniform(-1.0, 1.0, params.N)
    J = params.J_bar + params.delta_J * rng.uniform(-1.0, 1.0, max(params.N - 1, 0))
    return DisorderRealization(h=h, J=J, seed=int(seed))


def build_model(params: ModelParams, disorder: DisorderRealization, axis: str) -> SpinModel:
    """Assemble H_z, H_x, S_x and the collective coupling V = sum_i sigma_i^axis."""
    if axis not in ("z", "x"):
        raise ValueError(f"coupling axis must be 'z' or 'x', got {axis!r}")
    if len(disorder.h) != params.N or len(disorder.J) != max(params.N - 1, 0):
        raise ValueError(
            f"disorder dimensions (h: {len(disorder.h)}, J: {len(disorder.J)}) "
            f"do not match N={params.N}"
        )
    N = params.N
    dim = 2 ** N
    H_z = np.zeros((dim, dim), dtype=complex)
    S_x = np.zeros((dim, dim), dtype=complex)
    V = np.zeros((dim, dim), dtype=complex)
    for i in range(N):
        H_z += 0.5 * disorder.h[i] * pauli(N, i, "z")
        S_x += pauli(N, i, "x") / N
        V += pauli(N, i, axis)
    H_x = np.zeros((dim, dim), dtype=complex)
    for i in range(N - 1):
        H_x += disorder.J[i] * (pauli(N, i, "x") @ pauli(N, i + 1, "x"))
    return SpinModel(params=params, disorder=disorder,
                     H_z=H_z, H_x=H_x, S_x=S_x, V=V, axis=axis)


def initial_state(n_spins: int) -> np.ndarray:
    """Density matrix |+...+><+...+| of all spins pointing up along x."""
    if n_spins < 1:
        raise ValueError("N must be >= 1")
    dim = 2 ** n_spins
    plus = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    return np.outer(plus, plus.conj())


def check_density(rho: np.ndarray, *, trace_tol: float = 1e-9,
                  herm_tol: float = 1e-10, eig_tol: float = 1e-6) -> None:
    """Validate trace, Hermiticity and positivity of a density matrix.

    Raises ``NumericalError`` with a diagnostic if any tolerance is exceeded.
    """
    from .errors import NumericalError

    trace_err = abs(np.trace(rho) - 1.0)
    if trace_err > trace_tol:
        raise NumericalError(f"trace error {trace_err:.3e} exceeds {trace_tol:.1e}")
    herm_err = np.abs(rho - rho.conj().T).max()
    if herm_err > herm_tol:
        raise NumericalError(f"Hermiticity error {herm_err:.3e} exceeds {herm_tol:.1e}")
    min_eig = np.linalg.eigvalsh(rho)[0]
    if min_eig < -eig_tol:
        raise NumericalError(f"negative eigenvalue {min_eig:.3e} below -{eig_tol:.1e}")
