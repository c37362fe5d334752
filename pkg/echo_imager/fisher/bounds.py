"""
Closed-form Fisher-information references.

``table1_reference`` returns the first-order bounds for the single-mode
channel tasks (loss, amplification, additive noise) and for separation
estimation of two point emitters or absorbers. ``exact_channel_qfi`` and
``coherent_baselines`` return the non-perturbative expressions they come
from.
"""
import numpy as np

from echo_imager.base.exceptions import (
    DimensionMismatchError, NumericalError, PhysicalityError, UnsupportedTaskError,
)


TASKS = ('loss', 'amp', 'agn', 'subdiff_fluor', 'subdiff_abs')
PROBES = ('optimal', 'coherent', 'vacuum')


def normalize_task(task):
    task = task.replace('-', '_').lower()
    if task not in TASKS:
        raise UnsupportedTaskError(f'unknown task {task!r}')
    return task


def _loss(probe, n_s, rate, separation):
    if probe == 'optimal':
        return n_s / rate
    if probe == 'coherent':
        return (1 - rate) * n_s


def _amp(probe, n_s, rate, separation):
    if probe == 'optimal':
        return (1 + n_s) / rate
    if probe == 'coherent':
        return 1 / rate + (1 - rate) * n_s


def _agn(probe, n_s, rate, separation):
    if probe == 'optimal':
        return (1 + 2 * n_s) / rate
    if probe == 'coherent':
        return 1 / rate


def _fluorescence(probe, n_s, rate, separation):
    if probe == 'optimal':
        return rate * (1 + n_s) / 2
    if probe == 'vacuum':
        return rate / 2
    if probe == 'coherent':
        return rate / 2 + n_s * rate ** 2 * separation ** 2 / 16


def _absorption(probe, n_s, rate, separation):
    if probe == 'optimal':
        return n_s * rate
    if probe == 'coherent':
        return n_s * rate ** 2 * separation ** 2 / 4


REFERENCES = {
    'loss': _loss,
    'amp': _amp,
    'agn': _agn,
    'subdiff_fluor': _fluorescence,
    'subdiff_abs': _absorption,
}


def table1_pairs():
    """Every (task, probe) pair with a reference value."""
    return [(task, probe) for task in TASKS for probe in PROBES
            if REFERENCES[task](probe, 1., 0.01, 0.1) is not None]


def table1_reference(task, probe, n_s=0., rate=0.01, separation=0.):
    """
    First-order Fisher information bound.

    ``rate`` is the channel rate for ``loss``, ``amp`` and ``agn``, the
    brightness for ``subdiff_fluor`` and the absorption rate for
    ``subdiff_abs``. ``separation`` is in units of sigma and only enters the
    coherent imaging rows. Values for the imaging tasks are per unit
    ``(d / sigma)^-2``.
    """
    task = normalize_task(task)
    if n_s < 0 or rate <= 0:
        raise PhysicalityError('photon number must be non-negative and the rate positive')
    value = REFERENCES[task](probe, n_s, rate, separation)
    if value is None:
        raise UnsupportedTaskError(f'no reference for task {task!r} with a {probe!r} probe')
    return float(value)


def exact_channel_qfi(task, gamma, n_s):
    """Quantum Fisher information of pure loss or a quantum-limited amplifier at any rate."""
    task = normalize_task(task)
    if not gamma > 0:
        raise PhysicalityError('channel rate must be positive')
    if task == 'loss':
        return float(n_s * np.exp(-gamma) / -np.expm1(-gamma))
    if task == 'amp':
        return float((1 + n_s) * np.exp(gamma) / np.expm1(gamma))
    raise UnsupportedTaskError(f'no exact expression for task {task!r}')


def coherent_baselines(task, gamma, alpha2):
    """
    Quantum Fisher information of a coherent probe with ``|alpha|^2 = alpha2``.

    Amplification keeps a vacuum contribution ``e^g / (e^g - 1)`` even at
    zero amplitude; additive noise depends on the vacuum alone.
    """
    task = normalize_task(task)
    if alpha2 < 0:
        raise PhysicalityError('|alpha|^2 must be non-negative')
    if task == 'loss':
        return float(np.exp(-gamma) * alpha2)
    if task == 'amp':
        gain = np.exp(gamma)
        return float(gain / np.expm1(gamma) + gain * alpha2 / (2 * gain - 1))
    if task == 'agn':
        return float(1 / (gamma * (1 + gamma)))
    raise UnsupportedTaskError(f'no coherent baseline for task {task!r}')


def gaussian_mean_qfi(dmu, sigma):
    """Mean-vector part ``2 dmu^T Sigma^-1 dmu`` of a Gaussian state's QFI."""
    dmu = np.asarray(dmu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (dmu.size, dmu.size):
        raise DimensionMismatchError(f'covariance of shape {sigma.shape} for a mean of size {dmu.size}')
    try:
        solved = np.linalg.solve(sigma, dmu)
    except np.linalg.LinAlgError as e:
        raise NumericalError('covariance matrix is singular') from e
    if np.linalg.cond(sigma) > 1e12:
        raise NumericalError('covariance matrix is singular')
    return float(2 * dmu @ solved)
