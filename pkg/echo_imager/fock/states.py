import logging
from dataclasses import dataclass

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import DimensionMismatchError, PhysicalityError


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FockDensityMatrix:
    """
    Density matrix on ``modes`` bosonic modes truncated at ``cutoff`` photons each.

    The product basis is ordered with mode 0 most significant, i.e. the
    ``np.kron`` order of single-mode operators.
    """
    rho: np.ndarray
    modes: int
    cutoff: int

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f'{self.modes} modes at cutoff {self.cutoff} need a {self.dim}x{self.dim} matrix, '
                f'got {rho.shape}'
            )
        if not np.allclose(rho, rho.conj().T, rtol=0., atol=settings.SYMMETRY_TOL):
            raise PhysicalityError('density matrix is not Hermitian')
        object.__setattr__(self, 'rho', (rho + rho.conj().T) / 2)

    @property
    def levels(self):
        return self.cutoff + 1

    @property
    def dim(self):
        return self.levels ** self.modes

    def evolve(self, rho):
        return FockDensityMatrix(rho, self.modes, self.cutoff)

    @property
    def trace(self):
        return float(np.trace(self.rho).real)

    @property
    def leakage(self):
        """Population lost past the cutoff."""
        return 1. - self.trace

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.rho)

    def validate(self, tol=settings.EIGEN_CLIP_TOL):
        lowest = self.eigenvalues().min()
        if lowest < -tol:
            raise PhysicalityError(f'density matrix has eigenvalue {lowest:.3g}')
        return self

    def clipped(self, tol=settings.EIGEN_CLIP_TOL):
        """Zero eigenvalues in ``[-tol, 0)`` and restore the trace."""
        values, vectors = np.linalg.eigh(self.rho)
        if values.min() < -tol:
            raise PhysicalityError(f'density matrix has eigenvalue {values.min():.3g}')
        if values.min() >= 0:
            return self
        trace = values.sum()
        values = np.clip(values, 0., None)
        values *= trace / values.sum()
        logger.debug('clipped %d negative eigenvalues', int(np.sum(values == 0.)))
        return self.evolve((vectors * values) @ vectors.conj().T)

    def populations(self):
        """Photon-number populations as a tensor with one axis per mode."""
        return np.diag(self.rho).real.reshape((self.levels,) * self.modes)

    def expectation(self, operator):
        return complex(np.trace(operator @ self.rho))
