"""
Map between quadrature covariances and ladder-operator correlators.

With ``Y = (cov - I) / 2`` and ``a = (q + ip) / sqrt(2)``::

    <a_i^dag a_j> = (Y_qiqj + Y_pipj + i (Y_qipj - Y_piqj)) / 2
    <a_i a_j>     = (Y_qiqj - Y_pipj + i (Y_qipj + Y_piqj)) / 2
"""
import numpy as np

from echo_imager.base.exceptions import DimensionMismatchError, PhysicalityError


def _blocks(Y):
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[0] != Y.shape[1] or Y.shape[0] % 2:
        raise DimensionMismatchError(f'quadrature matrix of shape {Y.shape} is not 2K x 2K')
    return Y[0::2, 0::2], Y[1::2, 1::2], Y[0::2, 1::2], Y[1::2, 0::2]


def normal_correlators(Y):
    """``gamma_ij = <a_i^dag a_j>`` from the excess covariance ``Y``."""
    qq, pp, qp, pq = _blocks(Y)
    return (qq + pp + 1j * (qp - pq)) / 2


def anomalous_correlators(Y):
    """``<a_i a_j>`` from the excess covariance ``Y``."""
    qq, pp, qp, pq = _blocks(Y)
    return (qq - pp + 1j * (qp + pq)) / 2


def coherence_to_quadrature(gamma):
    """
    Phase-insensitive quadrature matrix of a Hermitian correlator matrix.

    Block ``(i, j)`` is ``[[Re g, Im g], [-Im g, Re g]]``. Feeding the result
    back through ``normal_correlators`` returns ``gamma``.
    """
    gamma = np.atleast_2d(np.asarray(gamma, dtype=complex))
    if gamma.shape[0] != gamma.shape[1]:
        raise DimensionMismatchError('correlator matrix must be square')
    if not np.allclose(gamma, gamma.conj().T, atol=1e-12):
        raise PhysicalityError('correlator matrix is not Hermitian')
    K = gamma.shape[0]
    Y = np.zeros((2 * K, 2 * K))
    Y[0::2, 0::2] = gamma.real
    Y[1::2, 1::2] = gamma.real
    Y[0::2, 1::2] = gamma.imag
    Y[1::2, 0::2] = -gamma.imag
    return Y
