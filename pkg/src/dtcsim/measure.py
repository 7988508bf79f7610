"""Stroboscopic collective-magnetization measurements and outcome statistics.

Two protocol modes share the same period map.  The exact ensemble average
iterates the non-selective dephasing map rho -> sum_i Pi_i rho Pi_i after each
drive period; Monte-Carlo trajectories instead draw one outcome per period
with Born probabilities and collapse.  Measurement period equals the drive
period, so the measurement alone cannot introduce a subharmonic.

Outcome-string statistics: the staggered magnetization M uses the full
outcome values; the defect density dw and the mean domain size A use signs
only.  A defect is a consecutive pair whose signs fail to alternate.  The
defect sum runs over the T-1 existing pairs and is normalized by T-1, so
perfect alternation gives exactly 0 and complete alignment exactly 1.
sign(0) = 0 (possible only for even N): a pair containing a zero outcome
contributes 1/2 to the defect sum and splits domains.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .bath import JumpOperatorSet
from .errors import NumericalError
from .evolution import (EvolutionResult, PeriodPropagators, PeriodSchedule,
                        build_period_propagators, evolve_with, unvec, vec)
from .model import SpinModel, pauli
from .seeds import rng_from_seed

PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class MagnetizationPOVM:
    """Projective decomposition of S_x: outcomes (N-2k)/N with their eigenprojectors.

    Outcomes are sorted descending; projector ranks are the binomial
    coefficients C(N, k).
    """

    outcomes: np.ndarray
    projectors: np.ndarray  # (n_outcomes, dim, dim)
    n_spins: int


def build_povm(n_spins: int, tol: float = 1e-9) -> MagnetizationPOVM:
    """Group the spectrum of S_x = (1/N) sum_i sigma_i^x into eigenspaces.

    Eigenvalues agreeing within ``tol`` are merged; each representative is
    snapped to the exact rational (N-2k)/N so that outcome signs (including
    the zero outcome at even N) are unambiguous.
    """
    if n_spins < 1:
        raise ValueError("N must be >= 1")
    S_x = sum(pauli(n_spins, i, "x") for i in range(n_spins)) / n_spins
    evals, vecs = np.linalg.eigh(S_x)
    outcomes, projectors = [], []
    i = 0
    while i < len(evals):
        j = i
        while j < len(evals) and evals[j] - evals[i] <= tol:
            j += 1
        k = round((1.0 - float(np.mean(evals[i:j]))) * n_spins / 2)
        outcomes.append((n_spins - 2 * k) / n_spins)
        block = vecs[:, i:j]
        projectors.append(block @ block.conj().T)
        i = j
    order = np.argsort(outcomes)[::-1]
    return MagnetizationPOVM(outcomes=np.asarray(outcomes)[order],
                             projectors=np.stack(projectors)[order],
                             n_spins=n_spins)


def dephase(rho: np.ndarray, povm: MagnetizationPOVM) -> np.ndarray:
    """Non-selective measurement map sum_i Pi_i rho Pi_i."""
    out = np.zeros_like(rho)
    for P in povm.projectors:
        out += P @ rho @ P
    return out


def born_probabilities(rho: np.ndarray, povm: MagnetizationPOVM) -> np.ndarray:
    p = np.array([np.trace(P @ rho).real for P in povm.projectors])
    return np.clip(p, 0.0, None)


def sample_measurement(rho: np.ndarray, povm: MagnetizationPOVM,
                       rng: np.random.Generator) -> tuple[float, np.ndarray]:
    """Draw one outcome with Born probabilities and collapse the state.

    Raises ``NumericalError`` if every outcome probability is below the floor
    (malformed state).
    """
    p = born_probabilities(rho, povm)
    total = p.sum()
    if total < PROB_FLOOR:
        raise NumericalError("all measurement outcome probabilities vanish")
    idx = int(np.searchsorted(np.cumsum(p / total), rng.random(), side="right"))
    idx = min(idx, len(p) - 1)
    P = povm.projectors[idx]
    collapsed = P @ rho @ P
    collapsed /= np.trace(collapsed).real
    return float(povm.outcomes[idx]), collapsed


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome string of one trajectory plus its derived statistics."""

    m: np.ndarray
    seed: int
    M: float
    dw: float
    A: float


def staggered_magnetization(m: np.ndarray) -> float:
    """M = (1/T) sum_{i=1..T} m_i (-1)^i; equals +-1 for perfect alternation."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        raise ValueError("empty outcome vector")
    signs = np.where(np.arange(1, m.size + 1) % 2 == 0, 1.0, -1.0)
    return float(np.sum(m * signs) / m.size)


def defect_density(m: np.ndarray) -> float:
    """Fraction of consecutive pairs whose signs fail to alternate.

    Sum of (1 + sign(m_i) sign(m_{i+1}))/2 over the T-1 pairs, normalized by
    T-1.  Zero outcomes contribute 1/2 per adjacent pair.
    """
    m = np.asarray(m, dtype=float)
    if m.size < 2:
        raise ValueError("need at least two outcomes")
    s = np.sign(m)
    return float(np.mean((1.0 + s[:-1] * s[1:]) / 2.0))


def mean_domain_size(m: np.ndarray) -> float:
    """Mean length of maximal defect-free outcome segments.

    A boundary sits between i and i+1 whenever sign(m_i) sign(m_{i+1}) != -1,
    i.e. at every defect and on either side of a zero outcome.
    """
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        raise ValueError("empty outcome vector")
    s = np.sign(m)
    n_boundaries = int(np.count_nonzero(s[:-1] * s[1:] >= 0)) if m.size > 1 else 0
    return float(m.size / (n_boundaries + 1))


def outcome_statistics(m: np.ndarray) -> tuple[float, float, float]:
    """(M, dw, A) of an outcome string; dw is NaN for single-outcome strings."""
    dw = defect_density(m) if len(m) >= 2 else float("nan")
    return staggered_magnetization(m), dw, mean_domain_size(m)


def run_measured_average(rho0: np.ndarray, model: SpinModel,
                         jumps: Mapping[str, JumpOperatorSet],
                         schedule: PeriodSchedule,
                         propagators: Optional[PeriodPropagators] = None,
                         povm: Optional[MagnetizationPOVM] = None,
                         check_states: bool = True) -> EvolutionResult:
    """Exact measurement-averaged evolution: evolve one period, dephase, repeat.

    The returned grid matches :func:`dtcsim.evolution.evolve`; at each period
    boundary the pre-switch row holds the pre-measurement state and the
    post-switch row the dephased one (their S_x expectations agree, since the
    projectors commute with S_x).
    """
    if propagators is None:
        propagators = build_period_propagators(model, jumps, schedule)
    if povm is None:
        povm = build_povm(model.params.N)
    return evolve_with(rho0, propagators, schedule,
                       period_end_map=lambda rho: dephase(rho, povm),
                       check_states=check_states)


def run_trajectory(rho0: np.ndarray, model: SpinModel,
                   jumps: Mapping[str, JumpOperatorSet],
                   schedule: PeriodSchedule, seed: int,
                   propagators: Optional[PeriodPropagators] = None,
                   povm: Optional[MagnetizationPOVM] = None) -> MeasurementRecord:
    """Single Monte-Carlo trajectory: evolve a period, sample S_x, collapse.

    Identical (inputs, seed) reproduce the record exactly.
    """
    if propagators is None:
        propagators = build_period_propagators(model, jumps, schedule)
    if povm is None:
        povm = build_povm(model.params.N)
    rng = rng_from_seed(seed)

    period_map = propagators.prop_x.matrix @ propagators.prop_z.matrix
    v = vec(rho0).astype(complex)
    outcomes = np.empty(schedule.n_periods)
    for k in range(schedule.n_periods):
        v = period_map @ v
        outcome, rho = sample_measurement(unvec(v), povm, rng)
        outcomes[k] = outcome
        v = vec(rho)

    M, dw, A = outcome_statistics(outcomes)
    return MeasurementRecord(m=outcomes, seed=int(seed), M=M, dw=dw, A=A)
