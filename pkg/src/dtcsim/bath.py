"""Thermal-bath rates and frequency-resolved jump operators.

The chain couples collectively to an Ohmic bosonic bath in a Gibbs state at
inverse temperature beta.  In the weak-coupling, Markovian, secular limit the
dissipator is built from Bohr-frequency components of the coupling operator V
in the eigenbasis of the active stroke Hamiltonian,

    A(w) = sum_{e' - e = w} |e><e| V |e'><e'| ,

each weighted by the rate

    gamma(w) = Gamma^2 |w| exp(-|w|/w_c) / (1 - exp(-beta |w|))
               * [Theta(w) + exp(-beta |w|) Theta(-w)] ,

whose w -> 0 limit is Gamma^2 / beta.  The rates satisfy detailed balance
gamma(-w) = exp(-beta w) gamma(w) exactly, which makes the Gibbs state of the
stroke Hamiltonian stationary under the resulting generator.

A(w) keeps the complex matrix elements of V as computed (the projector
sandwich above); jump operators are L_w = sqrt(gamma(w)) A(w).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_BINNING_TOL = 1e-9
DROP_NORM = 1e-12


@dataclass(frozen=True)
class BathParams:
    """Inverse temperature, coupling strength and spectral cutoff.

    ``Gamma`` enters rates only through Gamma^2 (the coupling strength
    convention 2*pi*eta = Gamma^2 for Ohmic spectral density eta*|w|*e^{-|w|/w_c}).
    """

    beta: float
    Gamma: float
    omega_c: float = 1.0

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.Gamma < 0:
            raise ValueError("Gamma must be nonnegative")
        if self.omega_c <= 0:
            raise ValueError("omega_c must be positive")


@dataclass(frozen=True)
class BohrDecomposition:
    """Coupling operator resolved into Bohr-frequency components of one Hamiltonian.

    ``frequencies`` is sorted ascending and symmetric about zero;
    ``operators[k]`` is A(frequencies[k]), with A(-w) = A(w)^dagger.
    Components with Frobenius norm below ``DROP_NORM`` are dropped.
    """

    frequencies: np.ndarray
    operators: np.ndarray  # shape (n_freq, dim, dim)


@dataclass(frozen=True)
class JumpOperatorSet:
    """Jump operators L_w = sqrt(gamma(w)) A(w) for one stroke Hamiltonian."""

    frequencies: np.ndarray
    operators: np.ndarray  # shape (n_freq, dim, dim)
    stroke: str
    bath: BathParams

    @property
    def dim(self) -> int:
        return self.operators.shape[-1] if self.operators.size else 0


def gamma_rate(omega: float, bath: BathParams) -> float:
    """Bath rate gamma(omega); total on the reals, nonnegative.

    The removable singularity at omega = 0 is filled with its analytic limit
    Gamma^2/beta.  For omega < 0 the value is computed as
    gamma(|omega|) * exp(-beta*|omega|), so detailed balance holds bit-exactly.
    """
    g2 = bath.Gamma * bath.Gamma
    if omega == 0.0:
        return g2 / bath.beta
    a = abs(omega)
    # 1 - e^{-x} via expm1 keeps the small-|omega| regime fully accurate.
    emission = g2 * a * np.exp(-a / bath.omega_c) / (-np.expm1(-bath.beta * a))
    if omega > 0:
        return float(emission)
    return float(emission * np.exp(-bath.beta * a))


def _cluster_gaps(flat_gaps: np.ndarray, tol: float):
    """Group the flattened gap matrix into clusters of equal Bohr frequency.

    Returns (representative frequency, flat indices) per cluster.  Clusters
    are maximal runs of sorted gaps with adjacent spacing <= tol; the
    representative is the mean of |gaps| with the common sign, computed in
    sorted order so mirrored clusters get exactly opposite representatives.
    """
    order = np.argsort(flat_gaps, kind="stable")
    sorted_gaps = flat_gaps[order]
    boundaries = np.nonzero(np.diff(sorted_gaps) > tol)[0] + 1
    clusters = np.split(np.arange(flat_gaps.size), boundaries)
    out = []
    for cluster in clusters:
        idx = order[cluster]
        vals = sorted_gaps[cluster]
        if vals[0] < 0 < vals[-1] or np.all(np.abs(vals) <= tol):
            rep = 0.0
        else:
            sign = 1.0 if vals[0] > 0 else -1.0
            rep = sign * float(np.mean(np.sort(np.abs(vals))))
        out.append((rep, idx))
    return out


def bohr_decompose(H: np.ndarray, V: np.ndarray,
                   tol: float = DEFAULT_BINNING_TOL) -> BohrDecomposition:
    """Resolve V into eigenprojector sandwiches of H, binned by Bohr frequency.

    Eigenvalue gaps e' - e agreeing within ``tol`` (absolute) are merged into
    a single frequency; the default sits far above eigensolver noise and far
    below any physical gap scale of the model.

    Raises ``ValueError`` for non-Hermitian input or mismatched dimensions.
    """
    if H.shape != V.shape or H.shape[0] != H.shape[1]:
        raise ValueError("H and V must be square matrices of equal dimension")
    if tol <= 0:
        raise ValueError("binning tolerance must be positive")
    herm_err = np.abs(H - H.conj().T).max()
    if herm_err > 1e-10:
        raise ValueError(f"H is not Hermitian (max asymmetry {herm_err:.3e})")

    energies, U = np.linalg.eigh(H)
    V_eig = U.conj().T @ V @ U
    dim = len(energies)
    # gaps[a, b] = E_b - E_a, matching A(w)_{ab} = V_{ab} on pairs with gap w
    gaps = energies[None, :] - energies[:, None]

    freqs, ops = [], []
    for rep, idx in _cluster_gaps(gaps.ravel(), tol):
        component = np.zeros((dim, dim), dtype=complex)
        component.flat[idx] = V_eig.flat[idx]
        A = U @ component @ U.conj().T
        if np.linalg.norm(A) < DROP_NORM:
            continue
        freqs.append(rep)
        ops.append(A)

    if not freqs:
        return BohrDecomposition(frequencies=np.zeros(0),
                                 operators=np.zeros((0, dim, dim), dtype=complex))
    order = np.argsort(freqs)
    return BohrDecomposition(frequencies=np.asarray(freqs)[order],
                             operators=np.stack(ops)[order])


def build_jump_operators(decomp: BohrDecomposition, bath: BathParams,
                         stroke: str = "") -> JumpOperatorSet:
    """Scale each Bohr component by sqrt(gamma(w)) to obtain the jump operators."""
    rates = np.array([gamma_rate(w, bath) for w in decomp.frequencies])
    ops = np.sqrt(rates)[:, None, None] * decomp.operators if decomp.operators.size \
        else decomp.operators
    return JumpOperatorSet(frequencies=decomp.frequencies.copy(), operators=ops,
                           stroke=stroke, bath=bath)
