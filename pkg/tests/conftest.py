import numpy as np
import pytest

from clusterfid import default_registry


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture()
def rng():
    return np.random.default_rng(20260808)


def random_density_matrix(rng, n):
    """Random full-rank n-qubit density matrix (Ginibre construction)."""
    d = 2**n
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return m / np.trace(m)
