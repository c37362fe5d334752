"""
Imaging read-outs of a point scene: pixel intensities and mode sorting.
"""
import logging
import warnings

import numpy as np

from echo_imager.base.exceptions import TruncationWarning, UnsupportedTaskError
from echo_imager.protocols.distribution import NO_CLICK, CountDistribution
from echo_imager.protocols.echo import check_single_photon, single_mode_sqz_echo, twin_beam_echo
from echo_imager.protocols.fock import fock_probe
from echo_imager.protocols.probes import QUIET, ProbeConfig
from echo_imager.scene.kernels import coherence_matrix
from echo_imager.scene.modes import GaussianPSF, ModeBasis, pixel_edges


logger = logging.getLogger(__name__)

VACUUM = ProbeConfig()

DEFAULT_TRUNCATION = 6
OFF_GRID_TOL = 1e-2
MAX_PIXEL_PITCH = 0.5


def pixel_intensities(scene, edges):
    """
    Mean intensity of ``scene`` in each pixel, in units of the brightness.

    Pixel edges are in units of sigma. A correlated pair adds the overlap of
    the two fields, a Gaussian centred between them.
    """
    psf = GaussianPSF()
    intensity = sum(w * psf.pixel_probabilities(edges, x) for x, w in zip(scene.positions, scene.weights))
    if scene.correlation:
        (a, b), (wa, wb) = scene.positions, scene.weights
        overlap = np.exp(-(a - b) ** 2 / 8) * psf.pixel_probabilities(edges, (a + b) / 2)
        intensity = intensity + 2 * scene.correlation * np.sqrt(wa * wb) * overlap
        total = 1. + 2 * scene.correlation * np.sqrt(wa * wb) * np.exp(-(a - b) ** 2 / 8)
    else:
        total = 1.
    return intensity, total


def direct_detection(scene, edges=None, per_trial=False):
    """
    Pixel in which a detected photon lands, for direct imaging of ``scene``.

    By default the distribution is per detected photon and normalised over
    the grid. With ``per_trial`` it is per temporal mode: a click in pixel
    ``i`` with probability ``brightness * p_i`` plus a no-click outcome.
    """
    if edges is None:
        # whole sigmas keep the grid fixed under small changes of the scene
        edges = pixel_edges(extent=np.ceil(np.abs(scene.positions).max()))
    edges = np.asarray(edges, dtype=float)
    intensity, total = pixel_intensities(scene, edges)
    deficit = 1. - intensity.sum() / total
    pitch = np.diff(edges).max()
    logger.debug('direct detection on %d pixels, off-grid intensity %.3g', edges.size - 1, deficit)
    if deficit > OFF_GRID_TOL or pitch > MAX_PIXEL_PITCH:
        warnings.warn(
            f'pixel grid (pitch {pitch:.3g} sigma) misses {deficit:.3g} of the intensity',
            TruncationWarning, stacklevel=2,
        )
    probabilities = intensity / intensity.sum()
    labels = range(probabilities.size)
    if per_trial:
        rates = scene.brightness * probabilities
        check_single_photon(rates, 'direct detection')
        return CountDistribution.clicks(rates, labels, ('separation', 'brightness'))
    return CountDistribution(tuple(labels), probabilities, ('separation',))


def _mode_labels(basis):
    prefix = 'HG' if basis.kind == 'hg' else 'mode'
    return [f'{prefix}{k}' for k in range(basis.truncation)]


def scene_rates(scene, basis, order=None):
    """Absorption and emission matrices of ``scene`` in ``basis``."""
    return (coherence_matrix(scene, basis, 'absorption', order=order),
            coherence_matrix(scene, basis, 'emission', order=order))


def spade(scene, basis=None, probe=VACUUM, noise=QUIET, order=None):
    """
    Mode-sorted photon counting of ``scene`` prepared with ``probe``.

    A vacuum probe gives passive SPADE: a click in mode ``k`` with
    probability ``Gamma_down_kk``. Squeezing echoes and Fock probes amplify
    the diagonal rates as in the corresponding single-mode protocols and
    their signal and idler records are merged to first order.
    """
    if not scene.centroid_known:
        raise UnsupportedTaskError('mode sorting needs the centroid to align the basis')
    basis = basis or ModeBasis.hermite_gauss(scene.sigma, DEFAULT_TRUNCATION)
    gamma_up, gamma_down = scene_rates(scene, basis, order)
    modes = basis.truncation
    probe = probe or VACUUM
    noise = noise or QUIET

    if probe.kind == 'vacuum':
        if noise.sector != 'signal':
            raise UnsupportedTaskError('passive detection has no idler sector')
        rates = gamma_down.diagonal + noise.emission_like(modes)
        check_single_photon(rates, 'SPADE')
        return CountDistribution.clicks(rates, _mode_labels(basis), ('separation',))
    if probe.kind == 'twin_beam_echo':
        signal, idler = twin_beam_echo(gamma_up, gamma_down, probe.squeezing(modes), noise)
        return signal.combine_first_order(idler)
    if probe.kind == 'single_mode_sqz_echo':
        return single_mode_sqz_echo(gamma_up, gamma_down, probe.squeezing(modes), noise)
    if probe.kind == 'fock':
        return fock_probe(gamma_up, gamma_down, probe.photons(modes), noise)
    raise UnsupportedTaskError(f'mode sorting is not modelled for {probe.kind} probes')


def spade_brightness(scene, basis=None, probe=VACUUM):
    """
    Total signal counts, the sufficient statistic for the brightness.

    The click probability is ``sum_k g_k Gamma_down_kk`` with ``g_k`` the
    emission gain of ``probe`` (1 for passive detection, ``cosh^2 r`` for the
    twin-beam echo, ``n + 1`` for Fock probes).
    """
    basis = basis or ModeBasis.hermite_gauss(scene.sigma, DEFAULT_TRUNCATION)
    probe = probe or VACUUM
    if probe.kind not in ('vacuum', 'twin_beam_echo', 'fock'):
        raise UnsupportedTaskError(f'brightness read-out is not modelled for {probe.kind} probes')
    gamma_down = coherence_matrix(scene, basis, 'emission')
    rate = float(probe.signal_gain(basis.truncation) @ gamma_down.diagonal)
    check_single_photon(rate, 'signal')
    return CountDistribution.clicks([rate], ['click'], ('brightness',), NO_CLICK)
