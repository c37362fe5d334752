import warnings

import numpy as np
import pytest

from echo_imager.base.exceptions import PerturbativeRegimeWarning
from echo_imager.gaussian.ladder import coherence_to_quadrature


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_rates(rng):
    """Phase-insensitive PSD rate matrices on ``modes`` signal modes with spectral norm ``scale``."""

    def make(modes, scale=0.01):
        a = rng.normal(size=(modes, modes)) + 1j * rng.normal(size=(modes, modes))
        gamma = a @ a.conj().T
        gamma *= scale / np.linalg.eigvalsh(gamma).max()
        return coherence_to_quadrature(gamma)

    return make


@pytest.fixture
def quiet_perturbative():
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', PerturbativeRegimeWarning)
        yield
