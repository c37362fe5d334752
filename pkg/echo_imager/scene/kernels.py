"""
Mutual-coherence kernels of point scenes and their mode-basis projections.
"""
import logging
from math import factorial, sqrt

import numpy as np
from scipy.linalg import dft

from echo_imager.base.exceptions import DimensionMismatchError, UnsupportedTaskError
from echo_imager.scene.coherence import MutualCoherenceMatrix
from echo_imager.scene.modes import GaussianPSF, ModeBasis, displaced_psf_coeffs


logger = logging.getLogger(__name__)

PARITY_TOL = 1e-12


def _series_product(y, y_prime, size, order):
    """``c_l(y) c_k(y')`` with the Gaussian factor expanded to total power ``order``."""
    product = np.zeros((size, size))
    exponent = -(y ** 2 + y_prime ** 2) / 4
    for l in range(size):
        for k in range(size):
            if l + k > order:
                continue
            series = sum(exponent ** j / factorial(j) for j in range((order - l - k) // 2 + 1))
            product[l, k] = y ** l * y_prime ** k / sqrt(2 ** (l + k) * factorial(l) * factorial(k)) * series
    return product


def _closed_form(scene, basis, coupling, order):
    if order is None:
        coeffs = np.array([displaced_psf_coeffs(x, 1., basis.truncation) for x in scene.positions]).T
        return coeffs @ coupling @ coeffs.T
    entries = np.zeros((basis.truncation, basis.truncation))
    for m, x in enumerate(scene.positions):
        for n, x_prime in enumerate(scene.positions):
            if coupling[m, n]:
                entries += coupling[m, n] * _series_product(x, x_prime, basis.truncation, order)
    return entries


def _quadrature(scene, basis, coupling):
    u, weights = basis.quadrature()
    modes = basis.evaluate(u) * weights
    overlaps = np.array([modes @ basis.field_psf(u, x) for x in scene.physical_positions]).T
    return overlaps @ coupling @ overlaps.T


def coherence_matrix(scene, basis, kind='emission', method=None, order=None):
    """
    Rates ``Gamma_lk`` of ``scene`` in ``basis``.

    Emission uses ``brightness * weights`` as source rates, absorption uses
    ``absorption_rate * M * weights``; correlated pairs add the
    ``C sqrt(rate_0 rate_1)`` cross term. ``method='closed'`` (default for
    Hermite-Gauss bases) sums ``c_l(x_m) c_k(x_n)``; ``'quadrature'``
    integrates the PSF against the basis functions. ``order`` truncates the
    closed form to that total power of ``x / sigma``.
    """
    if not np.isclose(basis.sigma, scene.sigma):
        raise UnsupportedTaskError(
            f'basis width {basis.sigma:g} does not match the PSF width {scene.sigma:g}'
        )
    method = method or ('closed' if basis.kind == 'hg' else 'quadrature')
    coupling = scene.coupling(kind)
    if method == 'closed':
        if basis.kind != 'hg':
            raise UnsupportedTaskError('closed-form coefficients need a Hermite-Gauss basis')
        entries = _closed_form(scene, basis, coupling, order)
    elif method == 'quadrature':
        if order is not None:
            raise UnsupportedTaskError('series truncation is only available in closed form')
        entries = _quadrature(scene, basis, coupling)
    else:
        raise UnsupportedTaskError(f'unknown method {method!r}')
    return MutualCoherenceMatrix((entries + entries.T) / 2, basis, kind)


def shift_invariant_propagator(x, u, amplitude=None):
    """Propagator samples ``K[x, u] = phi(u - x)``."""
    amplitude = amplitude or GaussianPSF().amplitude
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    return amplitude(u[None, :] - x[:, None])


def point_source_kernel(scene, u, amplitude=None, kind='emission'):
    """Collection-plane kernel ``sum_mn W_mn phi(u - x_m) phi(u' - x_n)`` sampled on ``u``."""
    fields = shift_invariant_propagator(scene.physical_positions, u, amplitude)
    return fields.T @ scene.coupling(kind) @ fields


def propagate_kernel(gamma_xx, propagator, weights=None):
    """
    ``Gamma(u, u') = sum_xx' w_x w_x' gamma(x, x') K(x, u) K*(x', u')``.

    ``weights`` are the object-plane quadrature weights; leave them out when
    ``gamma_xx`` already holds integrated masses (point sources).
    """
    gamma_xx = np.atleast_2d(np.asarray(gamma_xx))
    propagator = np.atleast_2d(np.asarray(propagator))
    if gamma_xx.shape != (propagator.shape[0],) * 2:
        raise DimensionMismatchError(
            f'kernel grid {gamma_xx.shape} does not match propagator grid {propagator.shape}'
        )
    if weights is not None:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (propagator.shape[0],):
            raise DimensionMismatchError('one quadrature weight per object-plane sample is required')
        gamma_xx = weights[:, None] * gamma_xx * weights[None, :]
    kernel = propagator.T @ gamma_xx @ propagator.conj()
    return (kernel + kernel.conj().T) / 2


def project_kernel(kernel, u, weights, basis):
    """Project a sampled ``Gamma(u, u')`` onto ``basis`` with quadrature ``weights``."""
    kernel = np.atleast_2d(np.asarray(kernel))
    if kernel.shape != (len(u),) * 2 or len(weights) != len(u):
        raise DimensionMismatchError('kernel, nodes and weights disagree in size')
    modes = basis.evaluate(u) * np.asarray(weights)
    return MutualCoherenceMatrix(modes @ kernel @ modes.T, basis)


def fourier_propagator(size):
    """Unitary discrete Fourier propagator, the lossless reference kernel."""
    return dft(size, scale='sqrtn')


def unitarity_defect(propagator, weights=None):
    """Max deviation of ``sum_u K(x, u) K*(x', u)`` from the identity."""
    propagator = np.asarray(propagator)
    if weights is not None:
        propagator = propagator * np.sqrt(np.asarray(weights))[None, :]
    gram = propagator @ propagator.conj().T
    return float(np.abs(gram - np.eye(gram.shape[0])).max())


def _parity_blocks(entries):
    size = entries.shape[0]
    index = np.arange(size)
    odd_mask = (index[:, None] + index[None, :]) % 2 == 1
    leak = np.abs(entries[odd_mask]).max() if odd_mask.any() else 0.
    if leak > PARITY_TOL:
        raise UnsupportedTaskError(
            f'parity-mixing entries of size {leak:.3g}; the scene is not a centered two-point scene'
        )
    return index[::2], index[1::2]


def _top_eigenpair(block, name):
    if block.size == 0:
        return 0., np.zeros(0)
    values, vectors = np.linalg.eigh(block)
    top = values[-1]
    if values.size > 1 and abs(values[-2]) > PARITY_TOL + 1e-9 * abs(top):
        raise UnsupportedTaskError(f'{name} block has rank above one')
    return float(top), vectors[:, -1]


def parity_eigenmodes(gamma):
    """
    Symmetric and antisymmetric eigenmodes of a centered two-point kernel.

    Returns ``(gamma_plus, gamma_minus, vectors)`` where ``vectors[:, 0]`` is
    the even eigenmode and ``vectors[:, 1]`` the odd one, both in the basis of
    ``gamma``.
    """
    gamma = MutualCoherenceMatrix.coerce(gamma)
    entries = np.real(gamma.entries)
    even, odd = _parity_blocks(entries)
    plus, even_vector = _top_eigenpair(entries[np.ix_(even, even)], 'even')
    minus, odd_vector = _top_eigenpair(entries[np.ix_(odd, odd)], 'odd')

    vectors = np.zeros((gamma.size, 2))
    vectors[even, 0] = even_vector
    vectors[odd, 1] = odd_vector
    logger.debug('parity eigenvalues: plus=%.6g, minus=%.6g', plus, minus)
    return plus, minus, vectors


def even_subspace_eigenvalues(scene, truncation=6, order=2, kind='emission'):
    """
    Eigenvalues of the even-parity block, largest first.

    The exact block of a symmetric pair has rank one; with the coefficients
    expanded to second order the small eigenvalue scales as ``(d / sigma)^4``.
    """
    if not scene.is_two_point_centered:
        raise UnsupportedTaskError('even-subspace analysis needs a centered two-point scene')
    basis = ModeBasis.hermite_gauss(scene.sigma, truncation)
    entries = coherence_matrix(scene, basis, kind, order=order).entries
    even = np.arange(0, truncation, 2)
    return np.linalg.eigvalsh(entries[np.ix_(even, even)])[::-1]
