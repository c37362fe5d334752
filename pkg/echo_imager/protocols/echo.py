"""
First-order click statistics of squeezing echoes.

Each echo squeezes the probe, lets the scene act on the signal modes and
undoes the squeezing. To first order in the scene rates at most one photon
is left behind per trial, so every protocol here is a multinomial over a
no-click outcome and one click label per mode.
"""
import logging

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import PerturbativeRegimeError, UnsupportedTaskError
from echo_imager.protocols.distribution import CountDistribution
from echo_imager.protocols.probes import QUIET, per_mode
from echo_imager.scene.coherence import MutualCoherenceMatrix


logger = logging.getLogger(__name__)


def mode_rates(gamma_up, gamma_down, modes=None):
    """Mode-diagonal absorption and emission rates; off-diagonal terms are not counted."""
    up = MutualCoherenceMatrix.coerce(0. if gamma_up is None else gamma_up, 'absorption')
    down = MutualCoherenceMatrix.coerce(0. if gamma_down is None else gamma_down)
    modes = modes or max(up.size, down.size)
    return per_mode(up.diagonal, modes, name='gamma_up'), per_mode(down.diagonal, modes, name='gamma_down')


def check_single_photon(rates, name):
    total = float(np.sum(rates))
    if np.any(rates < 0):
        raise PerturbativeRegimeError(f'{name} has negative click rates')
    if total >= settings.BRIGHTNESS_WARN:
        raise PerturbativeRegimeError(
            f'{name} click probability {total:.3g} is outside the single-photon regime'
        )


def twin_beam_echo(gamma_up, gamma_down, r, noise=QUIET, modes=None):
    """
    Signal and idler click distributions of the twin-beam echo.

    Emission events land on the signal amplified by ``cosh^2 r``; absorption
    events land on the idler amplified by ``sinh^2 r``. Noise on the signal
    sector follows the same routing (loss like absorption, heating like
    emission, additive noise as both). Noise on the idlers crosses over:
    idler loss excites the signal with weight ``sinh^2 r`` and idler heating
    excites the idler with weight ``cosh^2 r``.
    """
    up, down = mode_rates(gamma_up, gamma_down, modes)
    modes = up.size
    r = per_mode(r, modes, name='r')
    cosh2, sinh2 = np.cosh(r) ** 2, np.sinh(r) ** 2
    noise = noise or QUIET

    signal = cosh2 * down
    idler = sinh2 * up
    if noise.sector == 'signal':
        signal = signal + cosh2 * noise.emission_like(modes)
        idler = idler + sinh2 * noise.absorption_like(modes)
    else:
        signal = signal + sinh2 * noise.absorption_like(modes)
        idler = idler + cosh2 * noise.emission_like(modes)

    check_single_photon(signal, 'signal')
    check_single_photon(idler, 'idler')
    logger.debug('twin-beam echo over %d modes: signal %.3g, idler %.3g', modes, signal.sum(), idler.sum())
    return (
        CountDistribution.clicks(signal, [f'S{k}' for k in range(modes)], ('gamma_down',)),
        CountDistribution.clicks(idler, [f'I{k}' for k in range(modes)], ('gamma_up',)),
    )


def single_mode_sqz_echo(gamma_up, gamma_down, r, noise=QUIET, modes=None):
    """
    Echo with single-mode squeezing of the signal alone.

    Absorption (weight ``sinh^2 r``) and emission (weight ``cosh^2 r``) end in
    the same single-excitation subspace, so one click rate per mode carries
    both and they cannot be told apart.
    """
    up, down = mode_rates(gamma_up, gamma_down, modes)
    modes = up.size
    r = per_mode(r, modes, name='r')
    noise = noise or QUIET
    if noise.sector != 'signal':
        raise UnsupportedTaskError('single-mode squeezing has no idler sector')
    cosh2, sinh2 = np.cosh(r) ** 2, np.sinh(r) ** 2
    rates = sinh2 * (up + noise.absorption_like(modes)) + cosh2 * (down + noise.emission_like(modes))
    check_single_photon(rates, 'signal')
    return CountDistribution.clicks(rates, [f'S{k}' for k in range(modes)], ('gamma_up', 'gamma_down'))


def displacement_echo(gamma, r, gamma_down=None):
    """
    Twin-beam echo of a random-displacement channel (balanced absorption and
    emission at rate ``gamma``), read out jointly on signal and idler.
    """
    if gamma_down is not None and not np.allclose(gamma_down, gamma, rtol=1e-12, atol=0.):
        raise UnsupportedTaskError(
            'displacement fields need balanced absorption and emission, use twin_beam_echo instead'
        )
    signal, idler = twin_beam_echo(gamma, gamma, r)
    return signal.combine_first_order(idler)


def conventional_echo(r, gamma_up, gamma_down):
    """
    Mean photon numbers per pixel after a pixelwise conjugate-point echo.

    Pixel ``u`` is squeezed together with its mirror pixel ``-u``, so the idler
    image is the absorption profile reflected through the origin. The pixel
    grid must be symmetric about the origin.
    """
    up, down = mode_rates(gamma_up, gamma_down)
    pixels = up.size
    r = per_mode(r, pixels, name='r')
    signal = np.cosh(r) ** 2 * down
    idler = (np.sinh(r) ** 2 * up)[::-1]
    return signal, idler
