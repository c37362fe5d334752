"""
Randomised checks of the squeezing echo: covariance formalism against its
closed form, and the truncated-Fock echo against first-order click rates.
"""
import logging

import numpy as np

from echo_imager import settings
from echo_imager.fock.oracle import echo_click_probabilities, toy_echo_oracle
from echo_imager.gaussian.channels import perturbative_interaction
from echo_imager.gaussian.echo import echo_residual, echo_sequence
from echo_imager.gaussian.ladder import coherence_to_quadrature


logger = logging.getLogger(__name__)

COLUMNS = ('sample', 'pairs', 'r_max', 'rate_norm', 'residual', 'residual_half', 'halving_ratio')
ORACLE_COLUMNS = ('r', 'gamma', 'signal_gap', 'idler_gap', 'signal_ratio', 'idler_ratio')


def random_rate_matrix(rng, modes, scale):
    """Phase-insensitive PSD rate matrix on ``modes`` modes with spectral norm ``scale``."""
    a = rng.normal(size=(modes, modes)) + 1j * rng.normal(size=(modes, modes))
    gamma = a @ a.conj().T
    gamma *= scale / np.linalg.eigvalsh(gamma).max()
    return coherence_to_quadrature(gamma)


def covariance_check(samples=50, seed=0, pairs=2, max_r=2., scale=0.01):
    """
    For random squeezings and rate matrices, the max-norm gap between the echo
    output and the closed form, at full and half rates.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for index in range(samples):
        r = rng.uniform(0, max_r, pairs)
        eta_up = random_rate_matrix(rng, pairs, rng.uniform(0, scale))
        eta_down = random_rate_matrix(rng, pairs, rng.uniform(0, scale))
        full = echo_residual(r, eta_up, eta_down)
        half = echo_residual(r, eta_up / 2, eta_down / 2)
        rows.append({
            'sample': index,
            'pairs': pairs,
            'r_max': float(r.max()),
            'rate_norm': float(max(np.linalg.norm(eta_up, 2), np.linalg.norm(eta_down, 2))),
            'residual': full,
            'residual_half': half,
            'halving_ratio': full / half if half else np.nan,
        })
    return rows


def _first_order_excess(r, eta_up, eta_down):
    # the output is quadratic in the rates; this keeps the linear part
    _, full = echo_sequence(r, perturbative_interaction(eta_up, eta_down))
    _, half = echo_sequence(r, perturbative_interaction(eta_up / 2, eta_down / 2))
    return 4 * half.delta - full.delta, full


def block_pattern(r=1., scale=0.01, pairs=1, seed=0, tol=1e-10):
    """
    Which blocks of the linear part of the echo's excess covariance vanish
    when the scene only absorbs, or only emits.
    """
    rng = np.random.default_rng(seed)
    eta = random_rate_matrix(rng, pairs, scale)
    zero = np.zeros_like(eta)
    pattern = {}
    for name, (eta_up, eta_down) in (('absorption', (eta, zero)), ('emission', (zero, eta))):
        linear, perturbation = _first_order_excess(np.full(pairs, r), eta_up, eta_down)
        size = perturbation.size
        pattern[name] = {
            'signal_vanishes': bool(np.abs(linear[size:, size:]).max() < tol),
            'idler_vanishes': bool(np.abs(linear[:size, :size]).max() < tol),
        }
    return pattern


def oracle_check(r_values=(0.3, 0.6), gamma=0.01, cutoff=12):
    """
    Click probabilities of the exact truncated-Fock echo against
    ``gamma cosh^2 r`` and ``gamma sinh^2 r``, at ``gamma`` and ``gamma / 2``.
    """
    rows = []
    for r in r_values:
        gaps = []
        for rate in (gamma, gamma / 2):
            p_signal, p_idler = echo_click_probabilities(
                toy_echo_oracle(rate, rate, r, cutoff=cutoff, exact=True)
            )
            gaps.append((abs(p_signal - rate * np.cosh(r) ** 2), abs(p_idler - rate * np.sinh(r) ** 2)))
        (signal, idler), (signal_half, idler_half) = gaps
        rows.append({
            'r': float(r),
            'gamma': gamma,
            'signal_gap': signal,
            'idler_gap': idler,
            'signal_ratio': signal / signal_half if signal_half else np.nan,
            'idler_ratio': idler / idler_half if idler_half else np.nan,
        })
    return rows


def echo_verification(samples=50, seed=0, pairs=2, max_r=2., scale=0.01,
                      oracle_r=(0.3, 0.6), cutoff=settings.FOCK_CUTOFF + 4):
    """All three checks and a summary of the worst cases."""
    rows = covariance_check(samples, seed, pairs, max_r, scale)
    oracle = oracle_check(oracle_r, scale, cutoff)
    ratios = np.array([row['halving_ratio'] for row in rows], dtype=float)
    summary = {
        'samples': samples,
        'max_residual': max(row['residual'] for row in rows),
        'halving_ratio_min': float(np.nanmin(ratios)),
        'halving_ratio_max': float(np.nanmax(ratios)),
        'blocks': block_pattern(seed=seed),
        'oracle_ratio_min': min(min(row['signal_ratio'], row['idler_ratio']) for row in oracle),
        'oracle_ratio_max': max(max(row['signal_ratio'], row['idler_ratio']) for row in oracle),
    }
    logger.info('echo verification over %d samples: halving ratios %.3f..%.3f',
                samples, summary['halving_ratio_min'], summary['halving_ratio_max'])
    return rows, oracle, summary
