"""
Fisher information of single-mode channels evaluated on explicit states:
Fock probes through truncated Kraus channels and coherent probes through
Gaussian channels.
"""
import logging

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import UnsupportedTaskError
from echo_imager.fisher.bounds import coherent_baselines, gaussian_mean_qfi, normalize_task
from echo_imager.fisher.classical import classical_fi
from echo_imager.fisher.result import FisherResult, default_step
from echo_imager.fock import channels as fock_channels
from echo_imager.fock.measure import measure_counts
from echo_imager.fock.operators import number_state
from echo_imager.fock.qfi import qfi_numeric
from echo_imager.gaussian import channels as gaussian_channels
from echo_imager.gaussian.states import coherent_state


logger = logging.getLogger(__name__)


def kraus_channel(task, gamma, cutoff):
    """Loss ``exp(-gamma)``, gain ``exp(gamma)`` or additive noise ``gamma`` as Kraus operators."""
    task = normalize_task(task)
    if task == 'loss':
        return fock_channels.loss_kraus(np.exp(-gamma), cutoff)
    if task == 'amp':
        return fock_channels.amp_kraus(np.exp(gamma), cutoff)
    if task == 'agn':
        return fock_channels.agn_channel(gamma, cutoff)
    raise UnsupportedTaskError(f'{task!r} is not a single-mode channel task')


def fock_output(task, gamma, n, cutoff=None):
    cutoff = cutoff or max(settings.FOCK_CUTOFF, n + 12)
    return fock_channels.apply_kraus(number_state(n, cutoff), kraus_channel(task, gamma, cutoff))


def fock_channel_fi(task, gamma, n, cutoff=None, dtheta=None):
    """
    Photon-counting Fisher information of ``|n>`` sent through the exact channel.

    Fock probes stay diagonal through phase-covariant channels, so counting
    attains the quantum Fisher information of the output.
    """
    result = classical_fi(lambda g: measure_counts(fock_output(task, g, n, cutoff)), gamma, dtheta)
    return FisherResult.build(result.value, 'kraus_counting', result.error_estimate, result.dropped_mass)


def fock_channel_qfi(task, gamma, n, cutoff=None, dtheta=None):
    """Numeric quantum Fisher information of ``|n>`` through the exact channel."""
    return qfi_numeric(lambda g: fock_output(task, g, n, cutoff), gamma, dtheta)


def _gaussian_channel(task, gamma):
    if task == 'loss':
        return gaussian_channels.loss_channel(np.exp(-gamma))
    if task == 'amp':
        return gaussian_channels.amplifier_channel(np.exp(gamma))
    return gaussian_channels.agn_channel(gamma)


def coherent_mean_qfi(task, gamma, alpha2, dtheta=None):
    """Mean-vector term of a coherent probe's quantum Fisher information."""
    task = normalize_task(task)
    if task not in ('loss', 'amp', 'agn'):
        raise UnsupportedTaskError(f'{task!r} is not a single-mode channel task')
    probe = coherent_state(np.sqrt(alpha2))
    step = dtheta or default_step(gamma)
    upper = gaussian_channels.apply_channel(_gaussian_channel(task, gamma + step), probe)
    lower = gaussian_channels.apply_channel(_gaussian_channel(task, gamma - step), probe)
    output = gaussian_channels.apply_channel(_gaussian_channel(task, gamma), probe)
    return gaussian_mean_qfi((upper.mean - lower.mean) / (2 * step), output.cov)


def coherent_channel_qfi(task, gamma, alpha2, dtheta=None):
    """Coherent-probe quantum Fisher information: mean term plus the vacuum term."""
    mean_term = coherent_mean_qfi(task, gamma, alpha2, dtheta)
    vacuum_term = coherent_baselines(task, gamma, 0.)
    logger.debug('coherent %s QFI at %g: mean %.6g, vacuum %.6g', task, gamma, mean_term, vacuum_term)
    return mean_term + vacuum_term


def coherent_imaging_qfi(task, rate, alpha2, separation):
    """
    Coherent-probe Fisher information for the separation of two point
    sources, by the chain rule through the antisymmetric-mode rate.
    Emission keeps the passive ``rate / 2``; absorption has no vacuum term.
    """
    task = normalize_task(task)
    if task == 'subdiff_fluor':
        antisymmetric = rate * separation ** 2 / 8
        slope = rate * separation / 4
        return rate / 2 + slope ** 2 * coherent_mean_qfi('amp', antisymmetric, alpha2)
    if task == 'subdiff_abs':
        antisymmetric = rate * separation ** 2 / 4
        slope = rate * separation / 2
        return slope ** 2 * coherent_mean_qfi('loss', antisymmetric, alpha2)
    raise UnsupportedTaskError(f'{task!r} is not an imaging task')
