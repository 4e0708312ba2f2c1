import numpy as np
import pytest

from kerrdeph import ChannelParams, DensityMatrix


def random_density(rng, dim):
    """Random full-rank density matrix (Ginibre ensemble)."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def flat_params():
    return ChannelParams(gamma=1.0, lam=0.0, omega=1.0)
