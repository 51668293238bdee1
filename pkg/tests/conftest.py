import numpy as np
import pytest
from hypothesis import strategies as st

from qspeed import DensityState, PureState, SpectralWeights


def random_pure(rng, max_dim=8, low=-5.0, high=5.0, min_dim=2):
    d = int(rng.integers(min_dim, max_dim + 1))
    amp = rng.normal(size=d) + 1j * rng.normal(size=d)
    return PureState.from_arrays(rng.uniform(low, high, d), amp / np.linalg.norm(amp))


def random_density(rng, d=3, rank=None, low=-5.0, high=5.0):
    rank = d if rank is None else rank
    x = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = x @ x.conj().T
    return DensityState.from_arrays(rng.uniform(low, high, d), rho / np.trace(rho).real)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def spectral_weights(draw, max_levels=8):
    n = draw(st.integers(1, max_levels))
    energies = draw(
        st.lists(st.floats(-10, 10, allow_nan=False), min_size=n, max_size=n)
    )
    raw = draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    total = sum(raw)
    return SpectralWeights.from_arrays(energies, [r / total for r in raw])
