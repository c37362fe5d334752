from dataclasses import dataclass

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import DimensionMismatchError, PhysicalityError
from echo_imager.gaussian.symplectic import symplectic_form


def quadrature_indices(modes):
    """Quadrature rows belonging to the given mode indices."""
    return np.ravel([[2 * k, 2 * k + 1] for k in modes]).astype(int)


@dataclass(frozen=True, eq=False)
class CovarianceState:
    """
    Gaussian state given by its quadrature mean and covariance.

    The covariance is normalized so the vacuum is the identity.
    """
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise DimensionMismatchError(f'covariance of shape {cov.shape} is not 2M x 2M')
        if mean.shape != (cov.shape[0],):
            raise DimensionMismatchError(
                f'mean of length {mean.size} does not match covariance of size {cov.shape[0]}'
            )
        if not np.allclose(cov, cov.T, rtol=0., atol=settings.SYMMETRY_TOL):
            raise PhysicalityError('covariance matrix is not symmetric')
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'cov', (cov + cov.T) / 2)

    @property
    def modes(self):
        return self.cov.shape[0] // 2

    def reduced(self, modes):
        """Marginal state on the listed modes."""
        idx = quadrature_indices(modes)
        return CovarianceState(self.mean[idx], self.cov[np.ix_(idx, idx)])

    def physicality_margin(self):
        """Smallest eigenvalue of ``cov + i Omega``."""
        omega = symplectic_form(self.modes)
        return float(np.linalg.eigvalsh(self.cov + 1j * omega).min())

    def is_physical(self, tol=settings.PHYSICALITY_TOL):
        return self.physicality_margin() >= -tol

    def mean_photons(self):
        """Per-mode mean photon number ``(tr cov_k + 2|mu_k|^2 - 2) / 4``."""
        n = []
        for k in range(self.modes):
            block = self.cov[2 * k:2 * k + 2, 2 * k:2 * k + 2]
            mu = self.mean[2 * k:2 * k + 2]
            n.append((np.trace(block) + 2 * mu @ mu - 2.) / 4.)
        return np.array(n)


def is_physical(state, tol=settings.PHYSICALITY_TOL):
    return state.is_physical(tol)


def vacuum_state(modes):
    return CovarianceState(np.zeros(2 * modes), np.eye(2 * modes))


def coherent_state(alpha):
    """Coherent state; ``alpha`` is one complex amplitude per mode."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    mean = np.sqrt(2.) * np.ravel(np.column_stack([alpha.real, alpha.imag]))
    return CovarianceState(mean, np.eye(2 * alpha.size))


def thermal_state(nbar):
    nbar = np.atleast_1d(np.asarray(nbar, dtype=float))
    if np.any(nbar < 0):
        raise PhysicalityError('thermal occupation must be non-negative')
    return CovarianceState(np.zeros(2 * nbar.size), np.diag(np.repeat(2 * nbar + 1, 2)))
