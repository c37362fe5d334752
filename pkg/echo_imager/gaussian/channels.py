import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag, expm

from echo_imager import settings
from echo_imager.base.exceptions import (
    DimensionMismatchError, PhysicalityError, PerturbativeRegimeWarning,
)
from echo_imager.gaussian.states import CovarianceState
from echo_imager.gaussian.symplectic import symplectic_form


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """``Sigma -> X Sigma X^T + Y`` and ``mu -> X mu``."""
    X: np.ndarray
    Y: np.ndarray
    exact: bool = True

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] % 2:
            raise DimensionMismatchError(f'channel matrices of shapes {X.shape}, {Y.shape}')
        object.__setattr__(self, 'X', X)
        object.__setattr__(self, 'Y', (Y + Y.T) / 2)

    @property
    def modes(self):
        return self.X.shape[0] // 2

    def then(self, other):
        """Apply ``self`` first, then ``other``."""
        if other.modes != self.modes:
            raise DimensionMismatchError('cannot compose channels on different mode counts')
        return GaussianChannel(
            other.X @ self.X,
            other.X @ self.Y @ other.X.T + other.Y,
            exact=self.exact and other.exact,
        )

    def embed(self, offset, total_modes):
        """Act on modes ``offset .. offset+modes-1`` of a ``total_modes`` system."""
        before, after = 2 * offset, 2 * (total_modes - offset - self.modes)
        if after < 0:
            raise DimensionMismatchError('embedded channel does not fit the system')
        X = block_diag(np.eye(before), self.X, np.eye(after))
        Y = block_diag(np.zeros((before, before)), self.Y, np.zeros((after, after)))
        return GaussianChannel(X, Y, exact=self.exact)

    def cp_margin(self):
        """Smallest eigenvalue of ``Y + i Omega - i X Omega X^T``."""
        omega = symplectic_form(self.modes)
        return float(np.linalg.eigvalsh(self.Y + 1j * omega - 1j * self.X @ omega @ self.X.T).min())

    def is_completely_positive(self, tol=settings.PHYSICALITY_TOL):
        return self.cp_margin() >= -tol


def is_completely_positive(channel, tol=settings.PHYSICALITY_TOL):
    return channel.is_completely_positive(tol)


def identity_channel(modes):
    return GaussianChannel(np.eye(2 * modes), np.zeros((2 * modes, 2 * modes)))


def apply_channel(channel, state):
    if channel.modes != state.modes:
        raise DimensionMismatchError(
            f'channel on {channel.modes} modes applied to a {state.modes}-mode state'
        )
    return CovarianceState(channel.X @ state.mean, channel.X @ state.cov @ channel.X.T + channel.Y)


def _per_mode(values, modes=None):
    values = np.atleast_1d(np.asarray(values, dtype=float))
    if modes is not None and values.size == 1:
        values = np.full(modes, values[0])
    return np.repeat(values, 2)


def loss_channel(eta, modes=None):
    """Pure loss with transmissivity ``eta`` per mode."""
    eta = _per_mode(eta, modes)
    if np.any((eta < 0) | (eta > 1)):
        raise PhysicalityError('transmissivity must lie in [0, 1]')
    return GaussianChannel(np.diag(np.sqrt(eta)), np.diag(1 - eta))


def amplifier_channel(gain, modes=None):
    """Quantum-limited amplifier with gain ``G >= 1`` per mode."""
    gain = _per_mode(gain, modes)
    if np.any(gain < 1):
        raise PhysicalityError('amplifier gain must be at least 1')
    return GaussianChannel(np.diag(np.sqrt(gain)), np.diag(gain - 1))


def agn_channel(gamma, modes=None):
    """Additive Gaussian noise adding ``gamma`` mean photons per mode."""
    gamma = _per_mode(gamma, modes)
    if np.any(gamma < 0):
        raise PhysicalityError('added noise must be non-negative')
    return GaussianChannel(np.eye(gamma.size), np.diag(2 * gamma))


def _check_rate_matrix(eta, name):
    eta = np.asarray(eta, dtype=float)
    if eta.ndim != 2 or eta.shape[0] != eta.shape[1] or eta.shape[0] % 2:
        raise DimensionMismatchError(f'{name} must be a 2K x 2K matrix')
    if not np.allclose(eta, eta.T, rtol=0., atol=settings.SYMMETRY_TOL):
        raise PhysicalityError(f'{name} is not symmetric')
    eta = (eta + eta.T) / 2
    lowest = np.linalg.eigvalsh(eta).min() if eta.size else 0.
    if lowest < -settings.EIGEN_CLIP_TOL:
        raise PhysicalityError(f'{name} is not positive semidefinite (eigenvalue {lowest:.3g})')
    return eta


def perturbative_interaction(eta_up, eta_down=None):
    """
    First-order scene interaction on the signal modes.

    ``X = I + (eta_down - eta_up) / 2`` and ``Y = eta_down + eta_up``. The
    returned channel acts on the signal block only; ``echo_sequence`` places it
    next to the untouched idlers. It is not CP at finite rates.
    """
    eta_up = _check_rate_matrix(eta_up, 'eta_up')
    eta_down = np.zeros_like(eta_up) if eta_down is None else _check_rate_matrix(eta_down, 'eta_down')
    if eta_up.shape != eta_down.shape:
        raise DimensionMismatchError('eta_up and eta_down act on different mode counts')

    strength = max(np.linalg.norm(eta_up, 2), np.linalg.norm(eta_down, 2))
    if strength > settings.PERTURBATIVE_WARN:
        warnings.warn(
            f'interaction strength {strength:.3g} exceeds {settings.PERTURBATIVE_WARN}; '
            'first-order results are unreliable',
            PerturbativeRegimeWarning, stacklevel=2,
        )
    X = np.eye(eta_up.shape[0]) + (eta_down - eta_up) / 2
    return GaussianChannel(X, eta_down + eta_up, exact=False)


def exact_interaction(eta_up, eta_down=None):
    """
    CP counterpart of ``perturbative_interaction`` for phase-insensitive rates:
    loss ``X = exp(-eta_up/2)`` followed by amplification ``X = exp(eta_down/2)``.
    """
    eta_up = _check_rate_matrix(eta_up, 'eta_up')
    eta_down = np.zeros_like(eta_up) if eta_down is None else _check_rate_matrix(eta_down, 'eta_down')
    identity = np.eye(eta_up.shape[0])

    x_loss = expm(-eta_up / 2)
    loss = GaussianChannel(x_loss, identity - x_loss @ x_loss.T)
    x_amp = expm(eta_down / 2)
    amp = GaussianChannel(x_amp, x_amp @ x_amp.T - identity)
    channel = loss.then(amp)
    logger.debug('exact interaction CP margin %.3g', channel.cp_margin())
    return channel
