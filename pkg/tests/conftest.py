"""Test configuration and fixtures for jadm-bcd."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from jadm_bcd.cost import JadmProblem
from jadm_bcd.instances import InstanceSpec, generate_instance, initial_point


# Configure pytest markers
def pytest_configure(config):
    """Configure pytest markers."""
    config.addinivalue_line("markers", "unit: mark test as unit test (small fixed inputs)")
    config.addinivalue_line("markers", "integration: mark test as end-to-end solver or CLI run")
    config.addinivalue_line("markers", "slow: mark test as slow running")


@pytest.fixture
def rng():
    """Fresh generator with a fixed seed."""
    return np.random.default_rng(20261018)


@pytest.fixture(params=["H", "T"])
def dagger_mode(request):
    return request.param


@pytest.fixture
def noisy_problem(dagger_mode):
    """Structured 5 x 3 problem with noise, so the minimum cost is positive."""
    problem, _ = generate_instance(
        InstanceSpec(n=5, m=3, L=4, dagger=dagger_mode, noise=0.1, seed=7)
    )
    return problem


@pytest.fixture
def generic_problem(rng, dagger_mode):
    """Unstructured complex problem with non-unit weights."""
    mats = rng.standard_normal((3, 5, 5)) + 1j * rng.standard_normal((3, 5, 5))
    return JadmProblem(mats, [1.0, 0.5, 2.0], m=3, dagger=dagger_mode)


@pytest.fixture
def random_point(noisy_problem):
    return initial_point("random", noisy_problem.n, noisy_problem.m, seed=3)


@pytest.fixture
def exact_instance():
    """Square exactly diagonalizable instance and its diagonalizer."""
    return generate_instance(InstanceSpec(n=4, m=4, L=3, seed=1))


@pytest.fixture
def random_stack(rng, dagger_mode):
    """Stack of 3 random 4 x 4 complex matrices plus weights and mode."""
    w = rng.standard_normal((3, 4, 4)) + 1j * rng.standard_normal((3, 4, 4))
    return w, np.array([1.0, 2.0, 0.5]), dagger_mode
