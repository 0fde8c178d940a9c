import numpy as np
import pytest

from qvl import _simplex, random_params


@pytest.fixture(scope="session")
def warm_jit():
    """Compile the optimizer kernels once so timed tests measure computation."""
    _simplex.warmup()


@pytest.fixture(scope="session")
def corpus():
    """Deterministic batch of 200 random canonical states for property tests."""
    return [random_params(seed) for seed in range(200)]


@pytest.fixture(scope="session")
def ghz():
    from qvl import StateParams

    return StateParams(1 / np.sqrt(2), 0.0, 0.0, 0.0, 1 / np.sqrt(2))


@pytest.fixture(scope="session")
def product_state():
    from qvl import StateParams

    return StateParams(1.0, 0.0, 0.0, 0.0, 0.0)
