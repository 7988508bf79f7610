"""Independent numerical oracles used to cross-check the main implementation.

Everything here deliberately avoids the package's superoperator code path:
the master equation is integrated in operator form with an adaptive ODE
solver, closed dynamics use eigendecomposition of the Hamiltonian, and the
bath rate is recomputed from a brute-force Fourier transform of the
correlation function.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp


def lindblad_rhs(rho: np.ndarray, H: np.ndarray, jump_ops: np.ndarray) -> np.ndarray:
    """-i[H, rho] + sum_w (L rho L^dag - {L^dag L, rho}/2) via plain matmuls."""
    out = -1j * (H @ rho - rho @ H)
    for L in jump_ops:
        Ld = L.conj().T
        LdL = Ld @ L
        out += L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL)
    return out


def integrate_master_equation(rho0: np.ndarray, H: np.ndarray,
                              jump_ops: np.ndarray, t: float,
                              rtol: float = 1e-10, atol: float = 1e-12) -> np.ndarray:
    """High-order adaptive integration of the operator-form master equation."""
    dim = rho0.shape[0]

    def rhs(_t, y):
        return lindblad_rhs(y.reshape(dim, dim), H, jump_ops).ravel()

    sol = solve_ivp(rhs, (0.0, t), rho0.ravel().astype(complex),
                    method="DOP853", rtol=rtol, atol=atol)
    assert sol.success
    return sol.y[:, -1].reshape(dim, dim)


def unitary_evolve(rho0: np.ndarray, H: np.ndarray, t: float) -> np.ndarray:
    """Closed-system propagation via the spectral decomposition of H."""
    evals, vecs = np.linalg.eigh(H)
    U = (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T
    return U @ rho0 @ U.conj().T


def statevector_period_signature(psi0: np.ndarray, H_z: np.ndarray,
                                 H_x: np.ndarray, S_x: np.ndarray,
                                 T_z: float, T_x: float,
                                 n_periods: int) -> np.ndarray:
    """<S_x> at period boundaries of the closed two-stroke drive, pure states only."""
    def stroke_u(H, t):
        evals, vecs = np.linalg.eigh(H)
        return (vecs * np.exp(-1j * evals * t)) @ vecs.conj().T

    U_z, U_x = stroke_u(H_z, T_z), stroke_u(H_x, T_x)
    psi = psi0.astype(complex)
    sig = [float((psi.conj() @ S_x @ psi).real)]
    for _ in range(n_periods):
        psi = U_x @ (U_z @ psi)
        sig.append(float((psi.conj() @ S_x @ psi).real))
    return np.asarray(sig)


def gamma_fourier_transform(omega: float, beta: float, Gamma: float,
                            omega_c: float = 1.0, t_max: float = 2000.0,
                            w_max: float = 40.0, nw: int = 800001) -> float:
    """Brute-force bath rate: truncated FT of the bath correlation function.

    gamma_T(omega) = int_{-T}^{T} dt e^{i omega t} C(t) with
    C(t) = int_0^inf dw J(w) [(n+1) e^{-iwt} + n e^{iwt}].  The t integral of
    each phase factor over the window is the Dirichlet kernel
    2 sin(alpha T)/alpha, so gamma_T reduces to a single quadrature over the
    bath mode frequencies.  Window truncation converges like 1/T.
    """
    eta = Gamma ** 2 / (2 * np.pi)
    w = np.linspace(1e-9, w_max, nw)
    J = eta * w * np.exp(-w / omega_c)
    occ = 1.0 / (1.0 - np.exp(-beta * w))  # n(w) + 1

    def dirichlet(alpha):
        out = np.where(np.abs(alpha) < 1e-300, 2.0 * t_max,
                       2.0 * np.sin(alpha * t_max) / alpha)
        return out

    integrand = (J * occ * dirichlet(omega - w)
                 + J * occ * np.exp(-beta * w) * dirichlet(omega + w))
    return float(np.trapezoid(integrand, w))


def random_density(dim: int, rng: np.random.Generator,
                   rank: int | None = None) -> np.ndarray:
    """Ginibre-induced random density matrix (full rank unless given)."""
    k = rank or dim
    G = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    evals = np.linalg.eigvalsh(rho - sigma)
    return 0.5 * float(np.abs(evals).sum())
