import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dtcsim import (BathParams, ModelParams, bohr_decompose, build_jump_operators,
                    build_model, sample_disorder)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def small_model():
    """Generic disordered N=2 model with x coupling."""
    params = ModelParams(N=2)
    return build_model(params, sample_disorder(params, 7), "x")


@pytest.fixture
def three_site_model():
    params = ModelParams(N=3)
    return build_model(params, sample_disorder(params, 11), "x")


def jumps_for(model, bath):
    """Jump operator sets for both strokes of a model."""
    return {
        "z": build_jump_operators(bohr_decompose(model.H_z, model.V), bath, "z"),
        "x": build_jump_operators(bohr_decompose(model.H_x, model.V), bath, "x"),
    }


@pytest.fixture
def default_bath():
    return BathParams(beta=0.5, Gamma=0.1)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in RESULTS:
        terminalreporter.write_line(
            f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
