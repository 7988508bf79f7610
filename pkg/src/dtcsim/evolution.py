"""Lindblad superoperators, stroke propagators, and multi-period evolution.

Vectorization convention: column stacking, vec(rho) = rho.reshape(-1, order="F"),
under which vec(A rho B) = (B^T kron A) vec(rho).  The generator matrix is

    L = -i (I kron H - H^T kron I)
        + sum_w [ conj(L_w) kron L_w
                  - 1/2 (I kron L_w^dag L_w) - 1/2 ((L_w^dag L_w)^T kron I) ]

and acts on vec(rho) as  -i[H, rho] + sum_w (L_w rho L_w^dag - {L_w^dag L_w, rho}/2).

Each stroke propagator is the dense matrix exponential of duration * L,
computed once per (stroke, realization) and reused over all drive periods; a
substep exponential exp(sample_dt * L) provides intermediate-time sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np
from scipy.linalg import expm

from .bath import JumpOperatorSet
from .errors import NumericalError
from .model import SpinModel, check_density

ABSCISSA_TOL = 1e-8


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return rho.reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vec`."""
    dim = int(round(np.sqrt(v.size)))
    return v.reshape((dim, dim), order="F")


@dataclass
class Liouvillian:
    """Matrix form of one stroke's Lindblad generator.

    ``matrix`` is the full generator, ``dissipator`` its jump part only (used
    for heat rates, where the unitary part contributes exactly zero).  The
    spectral abscissa (largest real part of the spectrum) is computed on
    demand and cached; for a well-formed generator it vanishes to rounding.
    """

    matrix: np.ndarray
    dissipator: np.ndarray
    stroke: str
    H: np.ndarray
    jumps: JumpOperatorSet
    _abscissa: Optional[float] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    def spectral_abscissa(self) -> float:
        if self._abscissa is None:
            if np.abs(self.jumps.operators).max(initial=0.0) == 0.0:
                # Purely unitary generator: spectrum is exactly imaginary.
                self._abscissa = 0.0
            else:
                self._abscissa = float(np.linalg.eigvals(self.matrix).real.max())
        return self._abscissa


def build_liouvillian(H: np.ndarray, jumps: JumpOperatorSet,
                      stroke: str = "") -> Liouvillian:
    """Assemble the vectorized generator for one stroke.

    Raises ``ValueError`` if H and the jump operators disagree in dimension.
    """
    dim = H.shape[0]
    if jumps.operators.size and jumps.operators.shape[-1] != dim:
        raise ValueError(
            f"jump operators act on dimension {jumps.operators.shape[-1]}, H on {dim}")
    ident = np.eye(dim)
    unitary = -1j * (np.kron(ident, H) - np.kron(H.T, ident))

    dissipator = np.zeros((dim * dim, dim * dim), dtype=complex)
    if jumps.operators.size:
        ops = jumps.operators
        # sum_w conj(L_w) kron L_w via one contraction over the frequency axis:
        # tensordot gives [i,j,k,l] = sum_w conj(L_w)[i,j] L_w[k,l]; the kron
        # layout needs row (i,k), column (j,l).
        sandwich = np.tensordot(ops.conj(), ops, axes=(0, 0))
        dissipator += sandwich.transpose(0, 2, 1, 3).reshape(dim * dim, dim * dim)
        K = np.einsum("wji,wjk->ik", ops.conj(), ops)  # sum_w L_w^dag L_w
        dissipator -= 0.5 * (np.kron(ident, K) + np.kron(K.T, ident))

    return Liouvillian(matrix=unitary + dissipator, dissipator=dissipator,
                       stroke=stroke or jumps.stroke, H=H, jumps=jumps)


@dataclass(frozen=True)
class StrokePropagator:
    """exp(duration * L) plus a cached substep exponential for grid sampling."""

    matrix: np.ndarray
    duration: float
    substep: float
    substep_matrix: np.ndarray
    n_substeps: int
    stroke: str


def build_propagator(liouv: Liouvillian, duration: float,
                     substep: Optional[float] = None,
                     check_abscissa: bool = True) -> StrokePropagator:
    """Exponentiate a stroke generator for a fixed duration.

    ``substep``, when given, must divide the duration to within 1e-12; the
    substep exponential is cached for intermediate-time sampling.  A spectral
    abscissa above ``ABSCISSA_TOL`` signals a malformed generator and raises
    ``NumericalError`` before any exponential is taken.
    """
    if duration < 0:
        raise ValueError("duration must be nonnegative")
    if check_abscissa:
        abscissa = liouv.spectral_abscissa()
        if abscissa > ABSCISSA_TOL:
            raise NumericalError(
                f"spectral abscissa {abscissa:.3e} of the {liouv.stroke!r} stroke "
                f"generator exceeds {ABSCISSA_TOL:.1e}; the exponential would diverge")

    if substep is None:
        substep = duration
    n_sub = max(int(round(duration / substep)), 1) if duration > 0 else 1
    if duration > 0 and abs(n_sub * substep - duration) > 1e-12:
        raise ValueError(f"substep {substep} does not divide duration {duration}")

    dim2 = liouv.matrix.shape[0]
    if duration == 0:
        ident = np.eye(dim2, dtype=complex)
        return StrokePropagator(matrix=ident, duration=0.0, substep=0.0,
                                substep_matrix=ident, n_substeps=0,
                                stroke=liouv.stroke)
    sub_matrix = expm(liouv.matrix * substep)
    full = sub_matrix if n_sub == 1 else expm(liouv.matrix * duration)
    return StrokePropagator(matrix=full, duration=duration, substep=substep,
                            substep_matrix=sub_matrix, n_substeps=n_sub,
                            stroke=liouv.stroke)


@dataclass(frozen=True)
class PeriodSchedule:
    """Stroke durations, observable sampling interval, and period count."""

    T_z: float
    T_x: float
    sample_dt: float
    n_periods: int

    def __post_init__(self):
        if self.T_z <= 0 or self.T_x <= 0:
            raise ValueError("stroke durations must be positive")
        if self.sample_dt <= 0:
            raise ValueError("sample_dt must be positive")
        if self.n_periods < 1:
            raise ValueError("n_periods must be >= 1")
        for name, T in (("T_z", self.T_z), ("T_x", self.T_x)):
            n = round(T / self.sample_dt)
            if n < 1 or abs(n * self.sample_dt - T) > 1e-12:
                raise ValueError(
                    f"sample_dt={self.sample_dt} does not divide {name}={T} "
                    "within 1e-12 (grid must align with switch times)")

    @property
    def period(self) -> float:
        return self.T_z + self.T_x

    @property
    def n_sub_z(self) -> int:
        return round(self.T_z / self.sample_dt)

    @property
    def n_sub_x(self) -> int:
        return round(self.T_x / self.sample_dt)


@dataclass(frozen=True)
class PeriodPropagators:
    """Cached generators and propagators for both strokes of one realization."""

    liouville_z: Liouvillian
    liouville_x: Liouvillian
    prop_z: StrokePropagator
    prop_x: StrokePropagator


def build_period_propagators(model: SpinModel,
                             jumps: Mapping[str, JumpOperatorSet],
                             schedule: PeriodSchedule,
                             check_abscissa: bool = True) -> PeriodPropagators:
    liou_z = build_liouvillian(model.H_z, jumps["z"], stroke="z")
    liou_x = build_liouvillian(model.H_x, jumps["x"], stroke="x")
    prop_z = build_propagator(liou_z, schedule.T_z, schedule.sample_dt, check_abscissa)
    prop_x = build_propagator(liou_x, schedule.T_x, schedule.sample_dt, check_abscissa)
    return PeriodPropagators(liou_z, liou_x, prop_z, prop_x)


@dataclass(frozen=True)
class EvolutionResult:
    """Sampled trajectory of density matrices on the stroke-aligned grid.

    Switch times appear twice, once under each stroke tag with the same state,
    so that piecewise-constant Hamiltonian bookkeeping (energy jumps, switch
    work) reads directly off the rows.  ``switch_indices`` lists the
    (pre-switch row, post-switch row) pairs.
    """

    times: np.ndarray
    stroke_tags: np.ndarray
    states: np.ndarray  # (n_rows, dim, dim)
    switch_indices: tuple
    schedule: PeriodSchedule


def evolve_with(rho0: np.ndarray, props: PeriodPropagators,
                schedule: PeriodSchedule, *,
                period_end_map: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                check_states: bool = True) -> EvolutionResult:
    """Drive ``rho0`` through ``n_periods`` of z-stroke then x-stroke evolution.

    ``period_end_map`` (state in, state out) is applied at every period
    boundary, including after the final period; its output becomes the state
    recorded on the post-switch row and the input of the next period.  Every
    recorded state is validated against the CPTP tolerances unless
    ``check_states`` is disabled.
    """
    times, tags, states = [0.0], ["z"], [rho0.copy()]
    switches = []
    if check_states:
        check_density(rho0)

    v = vec(rho0).astype(complex)
    t = 0.0
    for k in range(schedule.n_periods):
        for stroke, prop, n_sub in (("z", props.prop_z, schedule.n_sub_z),
                                    ("x", props.prop_x, schedule.n_sub_x)):
            for _ in range(n_sub):
                v = prop.substep_matrix @ v
                t += schedule.sample_dt
                rho = unvec(v)
                if check_states:
                    _check_sampled(rho, t, stroke)
                times.append(t)
                tags.append(stroke)
                states.append(rho)
            if stroke == "z":
                # z -> x switch: same state recorded under the incoming tag
                switches.append((len(times) - 1, len(times)))
                times.append(t)
                tags.append("x")
                states.append(states[-1])
        last_period = k == schedule.n_periods - 1
        if period_end_map is not None:
            rho = period_end_map(unvec(v))
            if check_states:
                _check_sampled(rho, t, "x")
            v = vec(rho)
        if not last_period:
            switches.append((len(times) - 1, len(times)))
            times.append(t)
            tags.append("z")
            states.append(unvec(v))

    return EvolutionResult(times=np.asarray(times),
                           stroke_tags=np.asarray(tags),
                           states=np.stack(states),
                           switch_indices=tuple(switches),
                           schedule=schedule)


def evolve(rho0: np.ndarray, model: SpinModel,
           jumps: Mapping[str, JumpOperatorSet], schedule: PeriodSchedule,
           check_states: bool = True) -> EvolutionResult:
    """Convenience wrapper: build both stroke propagators, then run the grid."""
    props = build_period_propagators(model, jumps, schedule)
    return evolve_with(rho0, props, schedule, check_states=check_states)


def _check_sampled(rho: np.ndarray, t: float, stroke: str) -> None:
    try:
        check_density(rho)
    except NumericalError as exc:
        raise NumericalError(f"state at t={t:.6g} ({stroke}-stroke): {exc}") from exc


def choi_matrix(prop: np.ndarray) -> np.ndarray:
    """Choi matrix of a superoperator in the column-stacking convention.

    Positive semidefiniteness of the result certifies complete positivity;
    its partial trace over the output factor equals the identity for a
    trace-preserving map.
    """
    dim = int(round(np.sqrt(prop.shape[0])))
    # prop[(j', i'), (j, i)] hosts the map element <i'| Lambda(|i><j|) |j'>
    p4 = prop.reshape(dim, dim, dim, dim)  # [j', i', j, i]
    return p4.transpose(3, 1, 2, 0).reshape(dim * dim, dim * dim)


def trace_functional(dim: int) -> np.ndarray:
    """Row vector t with t @ vec(rho) = Tr(rho); left null vector of any generator."""
    return vec(np.eye(dim, dtype=complex))
