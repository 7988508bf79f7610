"""Quick built-in oracle suite over one- and two-spin systems.

Each check prints one PASS/FAIL line; the suite returns False on the first
failure category.  This is a smoke screen for installations, not a substitute
for the full test suite.
"""

from __future__ import annotations

import numpy as np

from .bath import BathParams, bohr_decompose, build_jump_operators, gamma_rate
from .evolution import (PeriodSchedule, build_liouvillian, build_propagator,
                        choi_matrix, evolve, vec, unvec)
from .measure import (build_povm, defect_density, dephase, mean_domain_size,
                      run_trajectory, staggered_magnetization)
from .model import ModelParams, build_model, initial_state, pauli, sample_disorder
from .thermo import stroboscopic_signature, thermal_state


def _report(name: str, ok: bool, detail: str = "") -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  ({detail})" if detail else ""))
    return ok


def run_selftest() -> bool:
    ok = True
    bath = BathParams(beta=1.0, Gamma=1.0)
    expected = np.exp(-1.0) / (1.0 - np.exp(-1.0))
    val = gamma_rate(1.0, bath)
    ok &= _report("rate closed form", abs(val - expected) < 1e-12, f"gamma(1)={val:.6f}")
    kms = abs(gamma_rate(-0.7, bath) - np.exp(-0.7) * gamma_rate(0.7, bath))
    ok &= _report("detailed balance", kms < 1e-15 * gamma_rate(0.7, bath))
    ok &= _report("zero-frequency limit", gamma_rate(0.0, bath) == 1.0)

    H = 0.5 * np.pi * pauli(1, 0, "z")
    decomp = bohr_decompose(H, pauli(1, 0, "x"))
    ok &= _report("single-spin Bohr frequencies",
                  np.allclose(decomp.frequencies, [-np.pi, np.pi]))
    comp = np.abs(decomp.operators.sum(axis=0) - pauli(1, 0, "x")).max()
    ok &= _report("component completeness", comp < 1e-12)

    params = ModelParams(N=2)
    model = build_model(params, sample_disorder(params, 1), "x")
    bath2 = BathParams(beta=0.5, Gamma=0.1)
    residuals = []
    for H_s in (model.H_z, model.H_x):
        jumps = build_jump_operators(bohr_decompose(H_s, model.V), bath2)
        liou = build_liouvillian(H_s, jumps)
        residuals.append(np.linalg.norm(liou.matrix @ vec(thermal_state(H_s, 0.5))))
    ok &= _report("Gibbs stationarity (N=2)", max(residuals) < 1e-8,
                  f"max residual {max(residuals):.2e}")

    jumps = build_jump_operators(bohr_decompose(model.H_z, model.V), bath2, "z")
    prop = build_propagator(build_liouvillian(model.H_z, jumps, "z"), 1.0)
    choi = np.linalg.eigvalsh(choi_matrix(prop.matrix))
    ok &= _report("Choi positivity (N=2)", choi.min() >= -1e-8,
                  f"min eigenvalue {choi.min():.2e}")
    rho = unvec(prop.matrix @ vec(initial_state(2)))
    ok &= _report("trace preservation", abs(np.trace(rho).real - 1) < 1e-12)

    flip_params = ModelParams(N=2, delta_h=0.0, delta_J=0.0)
    flip_model = build_model(flip_params, sample_disorder(flip_params, 0), "z")
    empty = BathParams(beta=1.0, Gamma=0.0)
    flip_jumps = {
        "z": build_jump_operators(bohr_decompose(flip_model.H_z, flip_model.V), empty, "z"),
        "x": build_jump_operators(bohr_decompose(flip_model.H_x, flip_model.V), empty, "x"),
    }
    sched = PeriodSchedule(T_z=1.0, T_x=1.0, sample_dt=1.0, n_periods=10)
    result = evolve(initial_state(2), flip_model, flip_jumps, sched)
    sig = stroboscopic_signature(result, flip_model.S_x)
    flip_err = np.abs(sig - [(-1.0) ** k for k in range(11)]).max()
    ok &= _report("exact flip oracle (N=2)", flip_err < 1e-9, f"max error {flip_err:.2e}")

    povm = build_povm(2)
    mixed = dephase(initial_state(2), povm)
    ok &= _report("dephasing idempotent",
                  np.abs(dephase(mixed, povm) - mixed).max() < 1e-12)
    record = run_trajectory(initial_state(2), flip_model, flip_jumps, sched, seed=4)
    ok &= _report("closed trajectory alternates",
                  record.dw == 0.0 and abs(record.M) == 1.0)

    stats_ok = (staggered_magnetization([1, -0.5, 1, -1]) == -0.875
                and abs(defect_density([1, 1, -1, 1]) - 1 / 3) < 1e-15
                and mean_domain_size([1, -1, 1, 1, -1]) == 2.5)
    ok &= _report("outcome statistics identities", stats_ok)
    return bool(ok)
