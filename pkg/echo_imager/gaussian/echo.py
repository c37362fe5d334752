import logging
from dataclasses import dataclass

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import (
    DimensionMismatchError, PerturbativeRegimeError, PhysicalityError,
)
from echo_imager.gaussian.channels import (
    apply_channel, exact_interaction, perturbative_interaction,
)
from echo_imager.gaussian.ladder import anomalous_correlators, normal_correlators
from echo_imager.gaussian.states import CovarianceState
from echo_imager.gaussian.symplectic import squeezer_blocks, two_mode_squeezer
from echo_imager.scene.coherence import MutualCoherenceMatrix


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ThermalPerturbation:
    """
    Excess covariance ``dY = (Sigma_3 - I) / 2`` left by an echo, split into
    idler (upper-left), signal (lower-right) and cross (lower-left) blocks.
    """
    delta: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def size(self):
        return self.alpha.shape[0]

    @property
    def idler_block(self):
        return self.delta[:self.size, :self.size]

    @property
    def signal_block(self):
        return self.delta[self.size:, self.size:]

    @property
    def cross_block(self):
        return self.delta[self.size:, :self.size]

    def is_psd(self, tol=settings.EIGEN_CLIP_TOL):
        return all(
            np.linalg.eigvalsh((block + block.T) / 2).min() >= -tol
            for block in (self.signal_block, self.idler_block)
        )

    def covariance(self):
        """First-order echo output ``I + 2 dY``."""
        return np.eye(self.delta.shape[0]) + 2 * self.delta


def closed_form_perturbation(r, eta_up=None, eta_down=None, phi=0.):
    """
    First-order excess covariance of the echo::

        dY = [[beta eta_up beta,                 -beta (eta_up + eta_down) alpha / 2],
              [-alpha (eta_up + eta_down) beta / 2, alpha eta_down alpha           ]]
    """
    reference = eta_down if eta_up is None else eta_up
    if reference is None:
        raise DimensionMismatchError('at least one of eta_up, eta_down is required')
    size = np.shape(reference)[0]
    eta_up = np.zeros((size, size)) if eta_up is None else np.asarray(eta_up, dtype=float)
    eta_down = np.zeros((size, size)) if eta_down is None else np.asarray(eta_down, dtype=float)
    alpha, beta = squeezer_blocks(r, phi, size // 2)
    if alpha.shape != eta_up.shape or eta_up.shape != eta_down.shape:
        raise DimensionMismatchError('rate matrices do not match the squeezer size')

    total = eta_up + eta_down
    delta = np.block([
        [beta @ eta_up @ beta, -beta @ total @ alpha / 2],
        [-alpha @ total @ beta / 2, alpha @ eta_down @ alpha],
    ])
    return ThermalPerturbation(delta, alpha, beta)


def _signal_channel(interaction, pairs):
    if interaction.modes == pairs:
        return interaction.embed(pairs, 2 * pairs)
    if interaction.modes != 2 * pairs:
        raise DimensionMismatchError(
            f'interaction on {interaction.modes} modes does not fit {pairs} squeezer pairs'
        )
    n = 2 * pairs
    if not (np.allclose(interaction.X[:n, :], np.eye(2 * n)[:n, :])
            and np.allclose(interaction.X[:, :n], np.eye(2 * n)[:, :n])
            and np.allclose(interaction.Y[:n, :], 0.)
            and np.allclose(interaction.Y[:, :n], 0.)):
        raise DimensionMismatchError('interaction touches the idler block')
    return interaction


def echo_sequence(r, interaction, phi=0.):
    """
    Squeeze the vacuum, let the scene act on the signals, unsqueeze.

    ``interaction`` is a ``GaussianChannel`` on the signal modes (or on the
    full idler+signal system with an identity idler block). Returns the output
    state ``S^-1 (X S S^T X^T + Y) S^-T`` and its thermal perturbation.
    """
    pairs = np.atleast_1d(r).size
    if np.atleast_1d(phi).size not in (1, pairs):
        raise DimensionMismatchError('phi must have one entry per squeezer pair')
    channel = _signal_channel(interaction, pairs)

    squeezer = two_mode_squeezer(r, phi, pairs)
    inverse = squeezer.inverse()

    squeezed = CovarianceState(np.zeros(4 * pairs), squeezer.entries @ squeezer.T)
    interacted = apply_channel(channel, squeezed)
    cov = inverse.entries @ interacted.cov @ inverse.T
    output = CovarianceState(inverse.entries @ interacted.mean, (cov + cov.T) / 2)

    alpha, beta = squeezer_blocks(r, phi, pairs)
    perturbation = ThermalPerturbation((output.cov - np.eye(4 * pairs)) / 2, alpha, beta)
    logger.debug('echo over %d pairs, max |dY| = %.3g', pairs, np.abs(perturbation.delta).max())
    return output, perturbation


def echo_residual(r, eta_up, eta_down, exact=False, phi=0.):
    """Max-norm distance between the echo output and ``I + 2 dY`` from the closed form."""
    make = exact_interaction if exact else perturbative_interaction
    output, _ = echo_sequence(r, make(eta_up, eta_down), phi)
    predicted = closed_form_perturbation(r, eta_up, eta_down, phi).covariance()
    return float(np.abs(output.cov - predicted).max())


def single_photon_decompose(state, modes=None, tol=settings.KRAUS_TOL):
    """
    Write a weakly thermal state as ``(1 - tr g) rho_vac + sum g_ij a_j^dag rho_vac a_i``.

    Returns ``(vacuum_weight, MutualCoherenceMatrix)``. Anomalous correlators
    above ``tol`` mean the residual is squeezed rather than thermal, i.e. the
    first-order picture does not apply.
    """
    if modes is not None:
        state = state.reduced(modes)
    if not np.allclose(state.mean, 0., atol=tol):
        raise PerturbativeRegimeError('single-photon decomposition needs a zero-mean state')

    excess = (state.cov - np.eye(2 * state.modes)) / 2
    if np.linalg.eigvalsh(excess).min() < -settings.EIGEN_CLIP_TOL:
        raise PhysicalityError('covariance lies below the vacuum; no thermal decomposition')

    anomalous = np.abs(anomalous_correlators(excess)).max()
    if anomalous > tol:
        raise PerturbativeRegimeError(
            f'anomalous correlators of size {anomalous:.3g} exceed {tol:g}; '
            'the residual is not thermal'
        )
    gamma = normal_correlators(excess)
    weight = 1. - float(np.trace(gamma).real)
    return weight, MutualCoherenceMatrix(gamma)
