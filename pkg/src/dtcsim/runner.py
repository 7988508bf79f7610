"""Experiment execution: grid cross-products, replication, serialization.

One *run* is a (beta, Gamma) grid point combined with a disorder realization
(and, for trajectory protocols, a trajectory index).  Runs are independent and
execute either serially or on a process pool; every worker writes only its own
files, the parent merges the returned statistics after a barrier, and all
derived seeds come from the master seed (see :mod:`dtcsim.seeds`), so outputs
are byte-identical regardless of scheduling.

File formats (all numbers with 17 significant digits):
  trace_<run>.csv    one row per grid time: time, stroke, signature, energy,
                     heat_rate, entropy, entropy_rate, entropy_production,
                     half_chain_entropy, fidelity_z, fidelity_x
  work_<run>.csv     switch-work events: time, work
  er_<run>.csv       measured-average runs only: period, time, relative_difference
  outcomes_<run>.csv trajectory runs only: period, time, outcome
  stats.jsonl        one JSON record per run with parameters, seeds and the
                     (M, dw, A) statistics where applicable
  metadata.json      resolved config, package version, derived seeds, timestamp
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bath import BathParams, bohr_decompose, build_jump_operators
from .config import ExperimentConfig
from .evolution import PeriodSchedule, build_liouvillian, build_period_propagators
from .measure import build_povm, outcome_statistics, run_measured_average, run_trajectory
from .model import build_model, initial_state, sample_disorder
from .seeds import disorder_seed, measurement_seed
from .thermo import compute_trace, relative_difference, stroboscopic_signature
from .evolution import evolve_with

FMT = "%.17g"


def _fmt(x: float) -> str:
    return FMT % x


@dataclass(frozen=True)
class RunSpec:
    """Coordinates of one independent run within an experiment."""

    beta: float
    gamma: float
    realization: int
    trajectory: int | None  # None for non-trajectory protocols

    def run_id(self, config: ExperimentConfig) -> str:
        parts = [
            f"N{config.model.N}",
            config.axis,
            config.protocol.replace("-", ""),
            f"b{self.beta:g}",
            f"G{self.gamma:g}",
            f"r{self.realization:03d}",
        ]
        if self.trajectory is not None:
            parts.append(f"t{self.trajectory:03d}")
        return "_".join(parts)


def enumerate_runs(config: ExperimentConfig) -> list[RunSpec]:
    runs = []
    for beta in config.beta_grid:
        for gamma in config.gamma_grid:
            for r in range(config.replications):
                if config.protocol == "trajectories":
                    for k in range(config.trajectories_per_realization):
                        runs.append(RunSpec(beta, gamma, r, k))
                else:
                    runs.append(RunSpec(beta, gamma, r, None))
    return runs


def _prepare(config: ExperimentConfig, spec: RunSpec):
    d_seed = disorder_seed(config.seed, 0 if config.fix_disorder else spec.realization)
    disorder = sample_disorder(config.model, d_seed)
    model = build_model(config.model, disorder, config.axis)
    bath = BathParams(beta=spec.beta, Gamma=spec.gamma, omega_c=config.omega_c)
    jumps = {
        "z": build_jump_operators(bohr_decompose(model.H_z, model.V), bath, "z"),
        "x": build_jump_operators(bohr_decompose(model.H_x, model.V), bath, "x"),
    }
    schedule = PeriodSchedule(T_z=config.model.T_z, T_x=config.model.T_x,
                              sample_dt=config.sample_dt, n_periods=config.n_periods)
    return d_seed, model, bath, jumps, schedule


def _write_trace(path: Path, trace) -> None:
    lines = ["time,stroke,signature,energy,heat_rate,entropy,entropy_rate,"
             "entropy_production,half_chain_entropy,fidelity_z,fidelity_x"]
    for i in range(len(trace.times)):
        lines.append(",".join([
            _fmt(trace.times[i]), str(trace.stroke_tags[i]),
            _fmt(trace.signature[i]), _fmt(trace.energy[i]),
            _fmt(trace.heat_rate[i]), _fmt(trace.entropy[i]),
            _fmt(trace.entropy_rate[i]), _fmt(trace.entropy_production[i]),
            _fmt(trace.half_chain_entropy[i]), _fmt(trace.fidelity_z[i]),
            _fmt(trace.fidelity_x[i]),
        ]))
    path.write_text("\n".join(lines) + "\n")


def _write_work(path: Path, trace) -> None:
    lines = ["time,work"]
    lines += [f"{_fmt(t)},{_fmt(w)}" for t, w in trace.work_events]
    path.write_text("\n".join(lines) + "\n")


def _base_record(config: ExperimentConfig, spec: RunSpec, d_seed: int) -> dict:
    return {
        "protocol": config.protocol,
        "N": config.model.N,
        "axis": config.axis,
        "beta": spec.beta,
        "Gamma": spec.gamma,
        "n_periods": config.n_periods,
        "realization": spec.realization,
        "disorder_seed": d_seed,
    }


def execute_run(config: ExperimentConfig, spec: RunSpec) -> dict:
    """Run one grid point / realization / trajectory and write its files."""
    d_seed, model, bath, jumps, schedule = _prepare(config, spec)
    out = Path(config.out_dir)
    run_id = spec.run_id(config)
    record = _base_record(config, spec, d_seed)
    rho0 = initial_state(config.model.N)
    liou = {tag: build_liouvillian(getattr(model, f"H_{tag}"), jumps[tag], tag)
            for tag in ("z", "x")}

    if config.protocol == "trajectories":
        m_seed = measurement_seed(config.seed, spec.realization, spec.trajectory,
                                  spec.beta, spec.gamma, config.axis)
        rec = run_trajectory(rho0, model, jumps, schedule, seed=m_seed)
        period = schedule.period
        lines = ["period,time,outcome"]
        lines += [f"{k + 1},{_fmt((k + 1) * period)},{_fmt(v)}"
                  for k, v in enumerate(rec.m)]
        (out / f"outcomes_{run_id}.csv").write_text("\n".join(lines) + "\n")
        record.update(trajectory=spec.trajectory, measurement_seed=m_seed,
                      M=rec.M, dw=rec.dw, A=rec.A)
        return record

    props = build_period_propagators(model, jumps, schedule)
    if config.protocol == "plain":
        result = evolve_with(rho0, props, schedule)
        trace = compute_trace(result, model, liou, beta=spec.beta)
        _write_trace(out / f"trace_{run_id}.csv", trace)
        _write_work(out / f"work_{run_id}.csv", trace)
        sig = stroboscopic_signature(result, model.S_x)
        record.update(signature_final=float(sig[-1]))
        return record

    # measured-average: the plain twin is needed for the relative difference
    povm = build_povm(config.model.N)
    plain = evolve_with(rho0, props, schedule)
    measured = run_measured_average(rho0, model, jumps, schedule,
                                    propagators=props, povm=povm)
    trace_plain = compute_trace(plain, model, liou, beta=spec.beta)
    trace_meas = compute_trace(measured, model, liou, beta=spec.beta)
    _write_trace(out / f"trace_{run_id}.csv", trace_meas)
    _write_work(out / f"work_{run_id}.csv", trace_meas)
    plain_id = run_id.replace(config.protocol.replace("-", ""), "plainref")
    _write_trace(out / f"trace_{plain_id}.csv", trace_plain)

    sig_plain = stroboscopic_signature(plain, model.S_x)
    sig_meas = stroboscopic_signature(measured, model.S_x)
    er = relative_difference(sig_plain, sig_meas)
    period = schedule.period
    lines = ["period,time,relative_difference"]
    lines += [f"{k},{_fmt(k * period)},{_fmt(er[k]) if np.isfinite(er[k]) else 'nan'}"
              for k in range(len(er))]
    (out / f"er_{run_id}.csv").write_text("\n".join(lines) + "\n")
    record.update(signature_final=float(sig_meas[-1]),
                  er_final=float(er[-1]) if np.isfinite(er[-1]) else None)
    return record


def _execute_star(args):
    return execute_run(*args)


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> list[dict]:
    """Execute the full grid x replication cross-product and write outputs.

    Returns the statistics records (also written to ``stats.jsonl``).  With
    ``jobs > 1`` runs execute on a process pool; outputs are identical to a
    serial execution.
    """
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runs = enumerate_runs(config)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_execute_star, [(config, s) for s in runs]))
    else:
        records = [execute_run(config, spec) for spec in runs]

    records.sort(key=lambda r: (r["beta"], r["Gamma"], r["realization"],
                                r.get("trajectory", -1) if r.get("trajectory") is not None else -1))

    with (out / "stats.jsonl").open("w") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    metadata = {
        "version": __version__,
        "config": config.as_flat_dict(),
        "runs": [spec.run_id(config) for spec in runs],
        "derived_seeds": {
            "disorder": {str(r): disorder_seed(config.seed,
                                               0 if config.fix_disorder else r)
                         for r in range(config.replications)},
        },
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
    }
    (out / "metadata.json").write_text(json.dumps(metadata, indent=2, sort_keys=True))
    return records


def default_jobs() -> int:
    """Worker count from the environment (DTCSIM_JOBS), defaulting to 1."""
    try:
        return max(int(os.environ.get("DTCSIM_JOBS", "1")), 1)
    except ValueError:
        return 1
