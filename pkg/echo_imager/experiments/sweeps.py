"""
Separation sweeps: Fisher information and Monte-Carlo variance of the
separation estimate against d/sigma for each read-out strategy.
"""
import logging

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import ConfigError, DimensionMismatchError
from echo_imager.experiments.estimation import estimation_study
from echo_imager.fisher.classical import classical_fi
from echo_imager.protocols.imaging import VACUUM, direct_detection, spade
from echo_imager.scene.modes import pixel_edges
from echo_imager.scene.scene import Scene


logger = logging.getLogger(__name__)

STRATEGIES = ('direct', 'spade', 'echo')
# pixel grid holding all but 1e-9 of the intensity of sources within one sigma of the axis
DIRECT_EDGES = pixel_edges(energy=1 - 1e-9, extent=1.)

COLUMNS = ('d_over_sigma', 'strategy', 'fi_analytic', 'fi_numeric', 'mle_variance', 'crb')
UNITS = {
    'd_over_sigma': 'sigma',
    'fi_analytic': 'per trial, (d/sigma)^-2',
    'fi_numeric': 'per trial, (d/sigma)^-2',
    'mle_variance': '(d/sigma)^2',
    'crb': '(d/sigma)^2',
}


def separation_model(strategy, probe=None, brightness=0.01, noise=None):
    """
    Per-trial count distribution as a function of the separation in units of sigma.

    ``noise`` acts on the mode-sorting read-outs; direct imaging ignores it.
    """
    if strategy not in STRATEGIES:
        raise ConfigError(f'unknown strategy {strategy!r}', {'measurement.strategy': [str(strategy)]})
    if strategy == 'direct':
        return lambda d: direct_detection(Scene.two_point(d, brightness=brightness), DIRECT_EDGES,
                                          per_trial=True)
    if strategy == 'spade':
        return lambda d: spade(Scene.two_point(d, brightness=brightness), noise=noise)
    if probe is None or probe.kind == 'vacuum':
        raise ConfigError('the echo strategy needs a squeezed or Fock probe', {'probe.kind': ['vacuum']})
    return lambda d: spade(Scene.two_point(d, brightness=brightness), probe=probe, noise=noise)


def analytic_fi(strategy, d, probe=None, brightness=0.01):
    """
    Leading-order separation Fisher information per trial: ``eps d^2 / 8``
    for direct imaging, ``eps / 2`` for passive mode sorting and
    ``g eps / 2`` for an echo probe of signal gain ``g``.
    """
    if strategy == 'direct':
        return brightness * d ** 2 / 8
    if strategy == 'spade':
        return brightness / 2
    return float((probe or VACUUM).signal_gain(1)[0]) * brightness / 2


def _row_seed(seed, index):
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def rayleigh_sweep(strategy, d_grid, probe=None, trials=10 ** 7, brightness=0.01,
                   replications=settings.REPLICATIONS, seed=0, threads=settings.THREADS, noise=None):
    """
    One row per separation with the analytic and numeric Fisher information.

    With ``replications`` the separation is also estimated from sampled
    counts and the row carries the sample variance next to the Cramer-Rao
    bound; otherwise those columns are ``None``.
    """
    d_grid = np.atleast_1d(np.asarray(d_grid, dtype=float))
    if np.any(d_grid <= 0):
        raise ConfigError('separations must be positive', {'measurement.d_grid': [str(d_grid.tolist())]})
    model = separation_model(strategy, probe, brightness, noise)
    rows = []
    for index, d in enumerate(d_grid):
        row = dict.fromkeys(COLUMNS)
        row.update(d_over_sigma=float(d), strategy=strategy,
                   fi_analytic=analytic_fi(strategy, d, probe, brightness),
                   fi_numeric=classical_fi(model, float(d)).value)
        if replications:
            report = estimation_study(model, d, (0., 4 * d), trials, replications,
                                      seed=_row_seed(seed, index), threads=threads,
                                      parameters=('separation',))
            row.update(mle_variance=report.sample_variance[0], crb=report.crb[0])
        rows.append(row)
        logger.debug('%s sweep at d=%g: FI %.6g', strategy, d, row['fi_numeric'])
    logger.info('%s sweep over %d separations', strategy, d_grid.size)
    return rows


def fit_exponent(x, y):
    """Slope of ``log y`` against ``log x``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise DimensionMismatchError('at least two matching points are needed for a fit')
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)
