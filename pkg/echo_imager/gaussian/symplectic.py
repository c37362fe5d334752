"""
Symplectic matrices in the interleaved quadrature ordering ``(q1, p1, q2, p2, ...)``.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from echo_imager import settings
from echo_imager.base.exceptions import DimensionMismatchError


OMEGA_1 = np.array([[0., 1.], [-1., 0.]])


def symplectic_form(modes):
    """Return the ``2M x 2M`` block-diagonal form built from ``[[0, 1], [-1, 0]]``."""
    return np.kron(np.eye(modes), OMEGA_1)


def reflection(phi):
    """Symmetric reflection ``R(phi)`` used in the two-mode squeezer cross blocks."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, s], [s, -c]])


def is_symplectic(matrix, tol=settings.SYMPLECTIC_TOL):
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
        return False
    omega = symplectic_form(matrix.shape[0] // 2)
    return np.allclose(matrix @ omega @ matrix.T, omega, rtol=0., atol=tol)


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    entries: np.ndarray
    mode_count: int

    def __post_init__(self):
        if self.entries.shape != (2 * self.mode_count, 2 * self.mode_count):
            raise DimensionMismatchError(
                f'symplectic matrix of shape {self.entries.shape} does not act on '
                f'{self.mode_count} modes'
            )

    def __matmul__(self, other):
        if isinstance(other, SymplecticMatrix):
            return SymplecticMatrix(self.entries @ other.entries, self.mode_count)
        return self.entries @ other

    @property
    def T(self):
        return self.entries.T

    def inverse(self):
        """``S^-1 = -Omega S^T Omega``, exact for symplectic input."""
        omega = symplectic_form(self.mode_count)
        return SymplecticMatrix(-omega @ self.entries.T @ omega, self.mode_count)

    def is_valid(self, tol=settings.SYMPLECTIC_TOL):
        return is_symplectic(self.entries, tol)


def _per_pair(values, pairs, name):
    values = np.atleast_1d(np.asarray(values, dtype=float))
    if values.size == 1 and pairs > 1:
        values = np.full(pairs, values[0])
    if values.shape != (pairs,):
        raise DimensionMismatchError(
            f'{name} has {values.size} entries but {pairs} squeezer pairs were requested'
        )
    if not np.all(np.isfinite(values)):
        raise DimensionMismatchError(f'{name} must be finite')
    return values


def squeezer_blocks(r, phi=0., pairs=None):
    """Return ``(alpha, beta)``: ``alpha = (+) cosh(r_i) I2``, ``beta = (+) sinh(r_i) R(phi_i)``."""
    if pairs is None:
        pairs = np.atleast_1d(r).size
    r = _per_pair(r, pairs, 'r')
    phi = _per_pair(phi, pairs, 'phi')
    alpha = block_diag(*[np.cosh(ri) * np.eye(2) for ri in r])
    beta = block_diag(*[np.sinh(ri) * reflection(pi) for ri, pi in zip(r, phi)])
    return alpha, beta


def two_mode_squeezer(r, phi=0., pairs=None):
    """
    Pairwise two-mode squeezer on ``pairs`` idler/signal pairs.

    Idler modes occupy the first block and signal modes the second, so the
    result has the block form ``[[alpha, beta], [beta, alpha]]``.
    """
    alpha, beta = squeezer_blocks(r, phi, pairs)
    entries = np.block([[alpha, beta], [beta, alpha]])
    return SymplecticMatrix(entries, entries.shape[0] // 2)
