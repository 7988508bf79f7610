import numpy as np
import pytest

from dtcsim import (ModelParams, NumericalError, build_model, check_density,
                    initial_state, pauli, sample_disorder)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(N=0)
    with pytest.raises(ValueError):
        ModelParams(N=2, T_z=0)
    with pytest.raises(ValueError):
        ModelParams(N=2, delta_h=-0.1)


def test_zero_width_disorder_is_deterministic():
    params = ModelParams(N=4, delta_h=0.0, delta_J=0.0)
    real = sample_disorder(params, 999)
    assert np.all(real.h == np.pi)
    assert np.all(real.J == np.pi / 4)


def test_disorder_bounds():
    params = ModelParams(N=5)
    real = sample_disorder(params, 3)
    assert np.all(np.abs(real.h - np.pi) <= 0.5)
    assert np.all(np.abs(real.J - np.pi / 4) <= 0.5)


def test_disorder_reproducible_bit_for_bit():
    params = ModelParams(N=6)
    a = sample_disorder(params, 123)
    b = sample_disorder(params, 123)
    assert np.array_equal(a.h, b.h) and np.array_equal(a.J, b.J)
    c = sample_disorder(params, 124)
    assert not np.array_equal(a.h, c.h)


def test_disorder_empirical_mean():
    # mean of h over 1e5 sampled values within 3 sigma, sigma = delta_h / sqrt(3 n)
    params = ModelParams(N=100)
    n_seeds = 1000
    draws = np.concatenate([sample_disorder(params, s).h for s in range(n_seeds)])
    n = draws.size
    assert n == 10 ** 5
    sigma = 0.5 / np.sqrt(3 * n)
    assert abs(draws.mean() - np.pi) < 3 * sigma


def test_single_spin_field_spectrum():
    params = ModelParams(N=1, delta_h=0.0, delta_J=0.0)
    model = build_model(params, sample_disorder(params, 0), "z")
    evals = np.linalg.eigvalsh(model.H_z)
    assert np.allclose(np.sort(evals), [-np.pi / 2, np.pi / 2])


def test_two_spin_coupling_spectrum():
    params = ModelParams(N=2, delta_h=0.0, delta_J=0.0)
    model = build_model(params, sample_disorder(params, 0), "z")
    evals = np.sort(np.linalg.eigvalsh(model.H_x))
    assert np.allclose(evals, [-np.pi / 4, -np.pi / 4, np.pi / 4, np.pi / 4])


def test_collective_magnetization_fixes_plus_state():
    params = ModelParams(N=5)
    model = build_model(params, sample_disorder(params, 5), "z")
    plus = np.full(2 ** 5, 1 / np.sqrt(2 ** 5))
    assert np.allclose(model.S_x @ plus, plus)


def test_operators_hermitian_traceless():
    params = ModelParams(N=3)
    model = build_model(params, sample_disorder(params, 8), "x")
    for op in (model.H_z, model.H_x, model.S_x, model.V):
        assert np.abs(op - op.conj().T).max() < 1e-12
    assert abs(np.trace(model.V)) < 1e-12
    assert abs(np.trace(model.S_x)) < 1e-12


def test_stroke_hamiltonians_diagonal_in_their_bases():
    params = ModelParams(N=3)
    model = build_model(params, sample_disorder(params, 21), "z")
    off = model.H_z - np.diag(np.diag(model.H_z))
    assert np.abs(off).max() < 1e-12
    # Hadamard rotation maps the x product basis onto the computational basis
    had = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    W = had
    for _ in range(params.N - 1):
        W = np.kron(W, had)
    rotated = W @ model.H_x @ W
    off = rotated - np.diag(np.diag(rotated))
    assert np.abs(off).max() < 1e-12


def test_conserved_collective_components():
    params = ModelParams(N=4)
    model = build_model(params, sample_disorder(params, 31), "x")
    total_z = sum(pauli(4, i, "z") for i in range(4))
    total_x = sum(pauli(4, i, "x") for i in range(4))
    assert np.linalg.norm(model.H_z @ total_z - total_z @ model.H_z) < 1e-12
    assert np.linalg.norm(model.H_x @ total_x - total_x @ model.H_x) < 1e-12


def test_magnetization_spectrum_binomial():
    from math import comb

    params = ModelParams(N=4)
    model = build_model(params, sample_disorder(params, 2), "z")
    evals = np.linalg.eigvalsh(model.S_x)
    expected = sorted((4 - 2 * k) / 4 for k in range(5) for _ in range(comb(4, k)))
    assert np.allclose(np.sort(evals), expected)


def test_dimension_mismatch_rejected():
    params = ModelParams(N=3)
    wrong = sample_disorder(ModelParams(N=4), 0)
    with pytest.raises(ValueError):
        build_model(params, wrong, "z")
    with pytest.raises(ValueError):
        build_model(params, sample_disorder(params, 0), "y")


def test_initial_state_properties():
    rho = initial_state(2)
    assert abs(np.trace(rho @ rho).real - 1.0) < 1e-12  # pure
    params = ModelParams(N=5)
    model = build_model(params, sample_disorder(params, 1), "z")
    rho5 = initial_state(5)
    assert abs(np.trace(rho5 @ model.S_x).real - 1.0) < 1e-10
    # x eigenstate has zero z magnetization
    params3 = ModelParams(N=3, delta_h=0.0)
    model3 = build_model(params3, sample_disorder(params3, 1), "z")
    assert abs(np.trace(initial_state(3) @ model3.H_z).real) < 1e-10


def test_check_density_raises():
    good = initial_state(2)
    check_density(good)
    with pytest.raises(NumericalError):
        check_density(2.0 * good)
    bad = good.copy()
    bad[0, 1] += 1e-6
    with pytest.raises(NumericalError):
        check_density(bad)
    neg = np.diag([1.1, -0.1, 0.0, 0.0]).astype(complex)
    with pytest.raises(NumericalError):
        check_density(neg)
