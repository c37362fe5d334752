from dataclasses import dataclass

import numpy as np

from echo_imager.base.exceptions import UnsupportedTaskError
from echo_imager.protocols.echo import single_mode_sqz_echo, twin_beam_echo
from echo_imager.protocols.fock import fock_probe
from echo_imager.protocols.probes import QUIET, NoiseConfig


NOISE_SOURCES = ('loss', 'heat', 'agn')
PROBES = ('twin_beam_echo', 'fock', 'single_mode_sqz_echo')
CONTEXTS = ('absorption', 'fluorescence')

ZERO_TOL = 1e-12


def _context_probabilities(probe, gamma_up, gamma_down, r, n, noise):
    """Probability of the outcome each probe reads absorption and fluorescence from."""
    if probe == 'twin_beam_echo':
        signal, idler = twin_beam_echo(gamma_up, gamma_down, r, noise)
        return idler.probability('I0'), signal.probability('S0')
    if probe == 'fock':
        dist = fock_probe(gamma_up, gamma_down, n, noise)
        return dist.probability((n - 1,)), dist.probability((n + 1,))
    click = single_mode_sqz_echo(gamma_up, gamma_down, r, noise).probability('S0')
    return click, click


@dataclass(frozen=True, eq=False)
class NoiseMatrix:
    """
    First-order sensitivity of each read-out to each noise source.

    ``derivatives[i, j, c]`` is the derivative of the probability that probe
    ``PROBES[j]`` uses for imaging context ``CONTEXTS[c]`` with respect to the
    rate of ``NOISE_SOURCES[i]``. A zero entry means that context is immune to
    that noise. Probes without an idler have NaN rows for idler noise.
    """
    derivatives: np.ndarray
    sector: str = 'signal'

    @property
    def robust(self):
        return np.abs(self.derivatives) < ZERO_TOL

    def rows(self):
        for i, source in enumerate(NOISE_SOURCES):
            for j, probe in enumerate(PROBES):
                absorption, fluorescence = self.derivatives[i, j]
                yield {
                    'noise': source,
                    'probe': probe,
                    'd_absorption': absorption,
                    'd_fluorescence': fluorescence,
                    'absorption_robust': bool(abs(absorption) < ZERO_TOL),
                    'fluorescence_robust': bool(abs(fluorescence) < ZERO_TOL),
                }


def noise_matrix(r=1., n=1, gamma_up=0.01, gamma_down=0.01, step=1e-3, sector='signal'):
    """
    Forward differences ``(p(kappa) - p(0)) / kappa`` of every read-out for a
    single mode. All probabilities are affine in the noise rates, so one
    step is exact up to rounding.
    """
    if n < 1:
        raise UnsupportedTaskError('absorption needs at least one photon in the Fock probe')
    derivatives = np.full((len(NOISE_SOURCES), len(PROBES), len(CONTEXTS)), np.nan)
    for j, probe in enumerate(PROBES):
        if sector == 'idler' and probe != 'twin_beam_echo':
            continue
        base = np.array(_context_probabilities(probe, gamma_up, gamma_down, r, n, QUIET))
        for i, source in enumerate(NOISE_SOURCES):
            noise = NoiseConfig(**{f'kappa_{source}': step}, sector=sector)
            shifted = np.array(_context_probabilities(probe, gamma_up, gamma_down, r, n, noise))
            derivatives[i, j] = (shifted - base) / step
    return NoiseMatrix(derivatives, sector)
