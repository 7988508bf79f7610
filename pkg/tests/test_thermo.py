import numpy as np
import pytest

from dtcsim import (BathParams, ModelParams, PeriodSchedule, bohr_decompose,
                    build_jump_operators, build_liouvillian, build_model,
                    compute_trace, entropy_production_rate, entropy_rate,
                    evolve, fidelity, half_chain_entropy, heat_rate,
                    initial_state, pauli, relative_difference, sample_disorder,
                    thermal_state, vn_entropy, work_at_switch)
from dtcsim.thermo import partial_trace_keep_first
from conftest import jumps_for
from oracles import random_density


def davies_liouvillian(model, H, bath, tag):
    jumps = build_jump_operators(bohr_decompose(H, model.V), bath, tag)
    return build_liouvillian(H, jumps, tag)


# ---------------------------------------------------------------- heat rate

def test_heat_rate_zero_without_coupling(three_site_model, rng):
    bath = BathParams(beta=1.0, Gamma=0.0)
    liou = davies_liouvillian(three_site_model, three_site_model.H_z, bath, "z")
    rho = random_density(8, rng)
    assert abs(heat_rate(rho, three_site_model.H_z, liou)) < 1e-14


def test_heat_rate_zero_for_pure_dephasing(rng):
    # z coupling commutes with the field stroke: no energy flow
    params = ModelParams(N=3)
    model = build_model(params, sample_disorder(params, 3), "z")
    bath = BathParams(beta=0.5, Gamma=0.3)
    liou = davies_liouvillian(model, model.H_z, bath, "z")
    for _ in range(5):
        rho = random_density(8, rng)
        assert abs(heat_rate(rho, model.H_z, liou)) < 1e-10


def test_heat_rate_zero_at_gibbs(three_site_model):
    bath = BathParams(beta=0.7, Gamma=0.2)
    liou = davies_liouvillian(three_site_model, three_site_model.H_x, bath, "x")
    gibbs = thermal_state(three_site_model.H_x, bath.beta)
    assert abs(heat_rate(gibbs, three_site_model.H_x, liou)) < 1e-8


# ---------------------------------------------------------------- work

def test_work_trivial_and_antisymmetric(three_site_model, rng):
    rho = random_density(8, rng)
    assert work_at_switch(rho, three_site_model.H_z, three_site_model.H_z) == 0.0
    w_fwd = work_at_switch(rho, three_site_model.H_z, three_site_model.H_x)
    w_bwd = work_at_switch(rho, three_site_model.H_x, three_site_model.H_z)
    assert w_fwd == pytest.approx(-w_bwd, abs=1e-14)


def test_first_switch_work_homogeneous_closed():
    # after the exact pi pulse the state is all-down along x:
    # <H_x> = sum_i J_i = (N-1) pi/4 and <H_z> = 0
    N = 4
    params = ModelParams(N=N, delta_h=0.0, delta_J=0.0)
    model = build_model(params, sample_disorder(params, 0), "z")
    bath = BathParams(beta=1.0, Gamma=0.0)
    jumps = jumps_for(model, bath)
    sched = PeriodSchedule(T_z=1.0, T_x=1.0, sample_dt=0.5, n_periods=1)
    result = evolve(initial_state(N), model, jumps, sched)
    pre, post = result.switch_indices[0]
    w = work_at_switch(result.states[post], model.H_z, model.H_x)
    assert w == pytest.approx((N - 1) * np.pi / 4, abs=1e-9)


# ---------------------------------------------------------------- entropies

def test_vn_entropy_reference_values():
    assert vn_entropy(initial_state(3)) == pytest.approx(0.0, abs=1e-10)
    dim = 8
    assert vn_entropy(np.eye(dim) / dim) == pytest.approx(3 * np.log(2), rel=1e-12)
    assert vn_entropy(np.diag([0.5, 0.5])) == pytest.approx(np.log(2), rel=1e-12)


def test_entropy_rate_zero_cases(three_site_model, rng):
    bath0 = BathParams(beta=1.0, Gamma=0.0)
    liou0 = davies_liouvillian(three_site_model, three_site_model.H_x, bath0, "x")
    rho = random_density(8, rng)
    assert abs(entropy_rate(rho, liou0)) < 1e-9
    bath = BathParams(beta=1.0, Gamma=0.3)
    liou = davies_liouvillian(three_site_model, three_site_model.H_x, bath, "x")
    maximally_mixed = np.eye(8) / 8
    assert abs(entropy_rate(maximally_mixed, liou)) < 1e-9


def test_entropy_rate_matches_finite_difference(three_site_model, rng):
    from dtcsim import unvec, vec

    bath = BathParams(beta=0.5, Gamma=0.4)
    liou = davies_liouvillian(three_site_model, three_site_model.H_z, bath, "z")
    rho = random_density(8, rng)
    dt = 1e-6
    rho_next = rho + dt * unvec(liou.matrix @ vec(rho))
    fd = (vn_entropy(rho_next) - vn_entropy(rho)) / dt
    got = entropy_rate(rho, liou)
    assert got == pytest.approx(fd, rel=1e-4)


def test_entropy_production_nonnegative_on_random_states(small_model, rng):
    bath = BathParams(beta=0.8, Gamma=0.3)
    for tag, H in (("z", small_model.H_z), ("x", small_model.H_x)):
        liou = davies_liouvillian(small_model, H, bath, tag)
        for _ in range(100):
            rho = random_density(4, rng)
            sigma = entropy_production_rate(rho, H, liou, bath.beta)
            assert sigma >= -1e-9


def test_entropy_production_zero_at_gibbs(three_site_model):
    bath = BathParams(beta=1.2, Gamma=0.2)
    liou = davies_liouvillian(three_site_model, three_site_model.H_x, bath, "x")
    gibbs = thermal_state(three_site_model.H_x, bath.beta)
    assert abs(entropy_production_rate(gibbs, three_site_model.H_x,
                                       liou, bath.beta)) < 1e-8


# ---------------------------------------------------------------- bipartite

def test_half_chain_entropy_product_state():
    assert half_chain_entropy(initial_state(4)) == pytest.approx(0.0, abs=1e-10)


def test_half_chain_entropy_bell_pair():
    bell = np.zeros(4)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho = np.outer(bell, bell)
    assert half_chain_entropy(rho, cut=1) == pytest.approx(np.log(2), rel=1e-10)


def test_half_chain_entropy_dimension_bound(rng):
    # pure global state: Schmidt bound min(cut, N - cut) * ln 2
    psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    psi /= np.linalg.norm(psi)
    pure = np.outer(psi, psi.conj())
    assert half_chain_entropy(pure) <= min(2, 1) * np.log(2) + 1e-9
    # mixed state: bounded by the kept subsystem dimension
    for _ in range(5):
        rho = random_density(8, rng)
        assert half_chain_entropy(rho) <= 2 * np.log(2) + 1e-9


def test_half_chain_invalid_cut(rng):
    with pytest.raises(ValueError):
        half_chain_entropy(random_density(8, rng), cut=3)


def test_partial_trace_consistency(rng):
    rho = random_density(8, rng)
    reduced = partial_trace_keep_first(rho, 2, 3)
    assert abs(np.trace(reduced).real - 1.0) < 1e-12
    # tracing in two steps equals one step
    two_step = partial_trace_keep_first(reduced, 1, 2)
    one_step = partial_trace_keep_first(rho, 1, 3)
    assert np.abs(two_step - one_step).max() < 1e-12


# ---------------------------------------------------------------- thermal / fidelity

def test_thermal_state_infinite_temperature(three_site_model):
    rho = thermal_state(three_site_model.H_x, 0.0)
    assert np.abs(rho - np.eye(8) / 8).max() < 1e-12


def test_thermal_state_commutes_with_hamiltonian(three_site_model):
    rho = thermal_state(three_site_model.H_x, 0.9)
    comm = rho @ three_site_model.H_x - three_site_model.H_x @ rho
    assert np.abs(comm).max() < 1e-12


def test_thermal_state_single_spin_populations():
    h, beta = 1.3, 0.7
    H = 0.5 * h * pauli(1, 0, "z")
    rho = thermal_state(H, beta)
    z = np.exp(beta * h / 2) + np.exp(-beta * h / 2)
    assert rho[0, 0].real == pytest.approx(np.exp(-beta * h / 2) / z, rel=1e-12)
    assert rho[1, 1].real == pytest.approx(np.exp(beta * h / 2) / z, rel=1e-12)


def test_fidelity_reference_cases(rng):
    rho = random_density(4, rng)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)
    e0, e1 = np.zeros(4), np.zeros(4)
    e0[0] = e1[1] = 1.0
    assert fidelity(np.outer(e0, e0), np.outer(e1, e1)) == pytest.approx(0.0, abs=1e-12)
    p = np.array([0.5, 0.3, 0.15, 0.05])
    q = np.array([0.25, 0.25, 0.25, 0.25])
    classical = np.sum(np.sqrt(p * q)) ** 2
    assert fidelity(np.diag(p), np.diag(q)) == pytest.approx(classical, rel=1e-10)


def test_fidelity_symmetric_and_monotone(three_site_model, default_bath, rng):
    from dtcsim import build_propagator, unvec, vec

    rho, sigma = random_density(8, rng), random_density(8, rng)
    assert fidelity(rho, sigma) == pytest.approx(fidelity(sigma, rho), abs=1e-10)
    jumps = jumps_for(three_site_model, default_bath)
    liou = build_liouvillian(three_site_model.H_x, jumps["x"], "x")
    prop = build_propagator(liou, 1.0)
    f_before = fidelity(rho, sigma)
    f_after = fidelity(unvec(prop.matrix @ vec(rho)), unvec(prop.matrix @ vec(sigma)))
    assert f_after >= f_before - 1e-9


# ---------------------------------------------------------------- E_r series

def test_relative_difference_cases():
    plain = np.array([0.5, 0.5, 0.0, 0.4])
    measured = np.array([0.5, 0.4, 0.2, 0.5])
    out = relative_difference(plain, measured)
    assert out[0] == pytest.approx(0.0, abs=1e-15)
    assert out[1] == pytest.approx(0.2, rel=1e-12)
    assert np.isnan(out[2])  # guarded denominator
    assert out[3] < 0  # measured amplitude larger: advantage
    with pytest.raises(ValueError):
        relative_difference(plain, measured[:3])


# ---------------------------------------------------------------- full traces

@pytest.mark.parametrize("axis", ["z", "x"])
def test_trace_first_law_and_stroke_identities(axis):
    params = ModelParams(N=3)
    model = build_model(params, sample_disorder(params, 47), axis)
    bath = BathParams(beta=0.5, Gamma=0.1)
    jumps = jumps_for(model, bath)
    sched = PeriodSchedule(T_z=1.0, T_x=1.0, sample_dt=0.01, n_periods=4)
    result = evolve(initial_state(3), model, jumps, sched)
    liou = {tag: build_liouvillian(getattr(model, f"H_{tag}"), jumps[tag], tag)
            for tag in ("z", "x")}
    trace = compute_trace(result, model, liou, beta=bath.beta)

    assert trace.first_law_residual() < 1e-5
    assert np.min(trace.entropy_production) >= -1e-9
    # pure-dephasing strokes: no heat flow in the commuting stroke
    mask = trace.stroke_tags == axis
    assert np.abs(trace.heat_rate[mask]).max() < 1e-10
    # inside strokes H is constant: U restricted to one stroke is continuous
    assert len(trace.work_events) == 2 * sched.n_periods - 1


def test_first_law_within_single_stroke(three_site_model, default_bath):
    jumps = jumps_for(three_site_model, default_bath)
    sched = PeriodSchedule(T_z=1.0, T_x=1.0, sample_dt=0.01, n_periods=1)
    result = evolve(initial_state(3), three_site_model, jumps, sched)
    liou = {tag: build_liouvillian(getattr(three_site_model, f"H_{tag}"),
                                   jumps[tag], tag) for tag in ("z", "x")}
    trace = compute_trace(result, three_site_model, liou, beta=default_bath.beta)
    z_rows = trace.stroke_tags == "z"
    delta_u = trace.energy[z_rows][-1] - trace.energy[z_rows][0]
    q_int = np.trapezoid(trace.heat_rate[z_rows], trace.times[z_rows])
    assert delta_u == pytest.approx(q_int, abs=2e-6 * max(1.0, abs(delta_u)))
