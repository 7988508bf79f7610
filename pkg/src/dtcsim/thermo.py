"""Observables and thermodynamic bookkeeping along a sampled evolution.

Rate conventions for a stroke with constant Hamiltonian H and generator L:

    heat rate      Qdot = Tr(H L(rho))        (positive = heat into the system)
    entropy rate   Sdot = -Tr(L(rho) ln rho)
    production     sigma = Sdot - beta * Qdot  (nonnegative for these generators)

Work appears only as discrete events at the stroke switches,
W = Tr[(H_to - H_from) rho], since H is piecewise constant.  Entropies are in
nats; spectral logarithms clip eigenvalues below 1e-14, which contribute zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import EvolutionResult, Liouvillian, unvec, vec

EIG_CLIP = 1e-14


def expectation(rho: np.ndarray, op: np.ndarray) -> float:
    """Real expectation value Tr(rho op) for Hermitian op."""
    return float(np.trace(rho @ op).real)


def heat_rate(rho: np.ndarray, H: np.ndarray, liouv: Liouvillian) -> float:
    """Tr(H L(rho)), evaluated on the dissipative part of the generator.

    The unitary part contributes exactly zero (Tr(H[-i[H, rho]]) = 0), so
    using the dissipator alone is the same quantity without the cancellation
    noise.
    """
    drho = unvec(liouv.dissipator @ vec(rho))
    return float(np.trace(H @ drho).real)


def work_at_switch(rho: np.ndarray, H_from: np.ndarray, H_to: np.ndarray) -> float:
    """Switch work Tr[(H_to - H_from) rho] for the state at the switch time."""
    return float(np.trace((H_to - H_from) @ rho).real)


def vn_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy -Tr(rho ln rho) in nats."""
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > EIG_CLIP]
    return float(-np.sum(evals * np.log(evals)))


def _log_on_support(rho: np.ndarray) -> np.ndarray:
    """ln rho restricted to eigenvalues above the clip threshold."""
    evals, vecs = np.linalg.eigh(rho)
    keep = evals > EIG_CLIP
    if not np.any(keep):
        return np.zeros_like(rho)
    vk = vecs[:, keep]
    return (vk * np.log(evals[keep])) @ vk.conj().T


def entropy_rate(rho: np.ndarray, liouv: Liouvillian) -> float:
    """-Tr(L(rho) ln rho) with the clipped spectral logarithm."""
    drho = unvec(liouv.matrix @ vec(rho))
    return float(-np.trace(drho @ _log_on_support(rho)).real)


def entropy_production_rate(rho: np.ndarray, H: np.ndarray,
                            liouv: Liouvillian, beta: float) -> float:
    """sigma = Sdot - beta * Qdot (Spohn: >= 0 for a thermal generator)."""
    return entropy_rate(rho, liouv) - beta * heat_rate(rho, H, liouv)


def partial_trace_keep_first(rho: np.ndarray, n_keep: int, n_total: int) -> np.ndarray:
    """Trace out sites n_keep+1..N, keeping the first n_keep spins."""
    if not 0 < n_keep <= n_total:
        raise ValueError(f"cannot keep {n_keep} of {n_total} sites")
    d_a, d_b = 2 ** n_keep, 2 ** (n_total - n_keep)
    return np.einsum("abcb->ac", rho.reshape(d_a, d_b, d_a, d_b))


def half_chain_entropy(rho: np.ndarray, cut: int | None = None) -> float:
    """Entropy of the reduced state of the first ``cut`` spins.

    Default cut keeps the first ceil(N/2) sites.
    """
    n_total = int(round(np.log2(rho.shape[0])))
    if cut is None:
        cut = (n_total + 1) // 2
    if not 1 <= cut < max(n_total, 2):
        raise ValueError(f"cut {cut} invalid for a chain of {n_total} sites")
    return vn_entropy(partial_trace_keep_first(rho, cut, n_total))


def thermal_state(H: np.ndarray, beta: float) -> np.ndarray:
    """Gibbs state exp(-beta H)/Z via the spectral decomposition of H."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    evals, vecs = np.linalg.eigh(H)
    weights = np.exp(-beta * (evals - evals.min()))
    weights /= weights.sum()
    return (vecs * weights) @ vecs.conj().T


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    evals, vecs = np.linalg.eigh(rho)
    return (vecs * np.sqrt(np.clip(evals, 0, None))) @ vecs.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clipped to [0, 1]."""
    if rho.shape != sigma.shape:
        raise ValueError("states must have equal dimension")
    sq = _psd_sqrt(rho)
    inner = np.linalg.eigvalsh(sq @ sigma @ sq)
    val = np.sum(np.sqrt(np.clip(inner, 0, None))) ** 2
    return float(min(max(val, 0.0), 1.0))


def relative_difference(signature_plain: np.ndarray,
                        signature_measured: np.ndarray,
                        guard: float = 1e-12) -> np.ndarray:
    """Per-point (|plain| - |measured|) / |plain| on aligned stroboscopic grids.

    Points with |plain| below ``guard`` are undefined and returned as NaN;
    negative values mean the measured protocol preserved more amplitude.
    """
    plain = np.asarray(signature_plain, dtype=float)
    measured = np.asarray(signature_measured, dtype=float)
    if plain.shape != measured.shape:
        raise ValueError("series must share one grid")
    out = np.full(plain.shape, np.nan)
    ok = np.abs(plain) >= guard
    out[ok] = (np.abs(plain[ok]) - np.abs(measured[ok])) / np.abs(plain[ok])
    return out


@dataclass(frozen=True)
class ThermoTrace:
    """Observable series on the evolution grid plus the switch-work events."""

    times: np.ndarray
    stroke_tags: np.ndarray
    signature: np.ndarray
    energy: np.ndarray
    heat_rate: np.ndarray
    entropy: np.ndarray
    entropy_rate: np.ndarray
    entropy_production: np.ndarray
    half_chain_entropy: np.ndarray
    fidelity_z: np.ndarray
    fidelity_x: np.ndarray
    work_events: tuple  # ((time, W), ...)

    def heat_integral(self) -> float:
        """Trapezoid integral of the heat rate over the full grid.

        Duplicated switch rows carry zero width, so the sum splits exactly
        into per-stroke integrals.
        """
        return float(np.trapezoid(self.heat_rate, self.times))

    def total_work(self) -> float:
        return float(sum(w for _, w in self.work_events))

    def first_law_residual(self) -> float:
        """|dU - (sum W + int Qdot dt)| / max(|dU|, 1e-12)."""
        delta_u = self.energy[-1] - self.energy[0]
        budget = self.total_work() + self.heat_integral()
        return float(abs(delta_u - budget) / max(abs(delta_u), 1e-12))


def compute_trace(result: EvolutionResult, model, liouvillians, beta: float,
                  cut: int | None = None) -> ThermoTrace:
    """Evaluate all observable series along a sampled evolution.

    ``liouvillians`` maps stroke tag to the generator used in that stroke;
    fidelities are taken against the Gibbs states of both stroke Hamiltonians
    at the bath temperature.
    """
    H_by_tag = {"z": model.H_z, "x": model.H_x}
    thermal = {tag: thermal_state(H_by_tag[tag], beta) for tag in ("z", "x")}

    n = len(result.times)
    sig = np.empty(n)
    energy = np.empty(n)
    qdot = np.empty(n)
    entropy = np.empty(n)
    sdot = np.empty(n)
    sprod = np.empty(n)
    s_half = np.empty(n)
    fid_z = np.empty(n)
    fid_x = np.empty(n)

    for i, (tag, rho) in enumerate(zip(result.stroke_tags, result.states)):
        H = H_by_tag[tag]
        liou = liouvillians[tag]
        sig[i] = expectation(rho, model.S_x)
        energy[i] = expectation(rho, H)
        qdot[i] = heat_rate(rho, H, liou)
        entropy[i] = vn_entropy(rho)
        sdot[i] = entropy_rate(rho, liou)
        sprod[i] = sdot[i] - beta * qdot[i]
        s_half[i] = half_chain_entropy(rho, cut) if model.params.N > 1 else 0.0
        fid_z[i] = fidelity(rho, thermal["z"])
        fid_x[i] = fidelity(rho, thermal["x"])

    events = []
    for pre, post in result.switch_indices:
        tag_from = result.stroke_tags[pre]
        tag_to = result.stroke_tags[post]
        w = work_at_switch(result.states[post], H_by_tag[tag_from], H_by_tag[tag_to])
        events.append((float(result.times[post]), w))

    return ThermoTrace(times=result.times.copy(), stroke_tags=result.stroke_tags.copy(),
                       signature=sig, energy=energy, heat_rate=qdot, entropy=entropy,
                       entropy_rate=sdot, entropy_production=sprod,
                       half_chain_entropy=s_half, fidelity_z=fid_z, fidelity_x=fid_x,
                       work_events=tuple(events))


def stroboscopic_signature(result: EvolutionResult, S_x: np.ndarray) -> np.ndarray:
    """<S_x> at the period boundaries t = 0, T, 2T, ..., one value per k."""
    period = result.schedule.period
    values = []
    seen = -1
    for t, rho in zip(result.times, result.states):
        k = int(round(t / period))
        if abs(t - k * period) < 1e-9 and k > seen:
            values.append(expectation(rho, S_x))
            seen = k
    return np.asarray(values)
