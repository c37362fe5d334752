import logging
import warnings
from functools import reduce

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from echo_imager import settings
from echo_imager.base.exceptions import DimensionMismatchError, TruncationWarning
from echo_imager.fock.states import FockDensityMatrix


logger = logging.getLogger(__name__)


def annihilation(cutoff):
    return np.diag(np.sqrt(np.arange(1., cutoff + 1)), k=1)


def number_operator(cutoff):
    return np.diag(np.arange(cutoff + 1.))


def mode_operator(k, modes, cutoff, operator=None):
    """Embed a single-mode operator (annihilation by default) on mode ``k``."""
    if not 0 <= k < modes:
        raise DimensionMismatchError(f'mode {k} does not exist in a {modes}-mode system')
    operator = annihilation(cutoff) if operator is None else operator
    identity = np.eye(cutoff + 1)
    return reduce(np.kron, [operator if j == k else identity for j in range(modes)])


def basis_index(occupations, cutoff):
    index = 0
    for n in occupations:
        if not 0 <= n <= cutoff:
            raise DimensionMismatchError(f'occupation {n} exceeds cutoff {cutoff}')
        index = index * (cutoff + 1) + n
    return index


def number_state(occupations, cutoff):
    occupations = tuple(np.atleast_1d(occupations).astype(int))
    rho = np.zeros(((cutoff + 1) ** len(occupations),) * 2, dtype=complex)
    index = basis_index(occupations, cutoff)
    rho[index, index] = 1.
    return FockDensityMatrix(rho, len(occupations), cutoff)


def vacuum(modes, cutoff):
    return number_state((0,) * modes, cutoff)


def pure_state(amplitudes, modes, cutoff):
    amplitudes = np.asarray(amplitudes, dtype=complex)
    return FockDensityMatrix(np.outer(amplitudes, amplitudes.conj()), modes, cutoff)


def coherent_fock_state(alpha, cutoff):
    """Single-mode coherent state; the amplitude past the cutoff is dropped, not renormalized."""
    n = np.arange(cutoff + 1)
    if alpha:
        magnitude = np.exp(-abs(alpha) ** 2 / 2 + n * np.log(abs(alpha)) - gammaln(n + 1) / 2)
        amplitudes = magnitude * np.exp(1j * n * np.angle(alpha))
    else:
        amplitudes = (n == 0).astype(complex)
    leak = 1. - np.sum(np.abs(amplitudes) ** 2)
    if leak > settings.KRAUS_TOL:
        warnings.warn(f'coherent state leaks {leak:.3g} past cutoff {cutoff}',
                      TruncationWarning, stacklevel=2)
    return pure_state(amplitudes, 1, cutoff)


def two_mode_squeeze_unitary(r, cutoff):
    """
    ``exp[r (a^dag e^dag - a e)]`` with ``a`` on mode 0 (idler) and ``e`` on mode 1 (signal).

    The truncated generator is anti-Hermitian so the result is exactly unitary;
    the physical error is the squeezed-vacuum tail ``tanh(r)^(2 (cutoff + 1))``.
    """
    a = mode_operator(0, 2, cutoff)
    e = mode_operator(1, 2, cutoff)
    generator = r * (a.T @ e.T - a @ e)
    logger.debug('two-mode squeezer r=%g, cutoff=%d, tail=%.3g', r, cutoff, squeezing_leakage(r, cutoff))
    return expm(generator)


def squeezing_leakage(r, cutoff):
    return float(np.tanh(abs(r)) ** (2 * (cutoff + 1)))


def unitarity_defect(unitary):
    return float(np.abs(unitary.conj().T @ unitary - np.eye(unitary.shape[0])).max())
