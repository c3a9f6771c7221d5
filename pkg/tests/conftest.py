import numpy as np
import pytest

from holocorr.families import bullett_penrose, conjugation, from_rational_inverse, llmm


@pytest.fixture(scope="session")
def squaring():
    """Inverse of z -> z^2: P = w^2 - z."""
    return from_rational_inverse([0, 0, 1])


@pytest.fixture(scope="session")
def cauliflower():
    """Inverse of z -> z^2 + 1/4."""
    return from_rational_inverse([0.25, 0, 1])


@pytest.fixture(scope="session")
def chebyshev():
    return from_rational_inverse([-2, 0, 1])


@pytest.fixture(scope="session")
def conj():
    return conjugation()


@pytest.fixture(scope="session")
def bp4():
    return bullett_penrose(4.0)


@pytest.fixture(scope="session")
def llmm_quadratic():
    """f(w) = w + w^2/2."""
    return llmm([0, 1, 0.5])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
