"""
Maximum-likelihood estimation from count records and Cramer-Rao comparisons.
"""
import logging
import time

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from echo_imager import settings
from echo_imager.base.exceptions import (
    ConvergenceError, DimensionMismatchError, EchoImagerError,
)
from echo_imager.experiments.records import EstimationReport
from echo_imager.experiments.sampling import replicate, sample
from echo_imager.fisher.classical import classical_fi, fisher_matrix


logger = logging.getLogger(__name__)

MAX_ITERATIONS = 2000
X_TOLERANCE = 1e-7


def _aligned_counts(batch, dist):
    """Counts in the outcome order of ``dist``; counted labels it lacks are an error."""
    counts = batch.as_dict()
    labels = [str(outcome) for outcome in dist.outcomes]
    missing = set(label for label, n in counts.items() if n) - set(labels)
    if missing:
        raise DimensionMismatchError(f'counted outcomes {sorted(missing)} are not in the model')
    return np.array([counts.get(label, 0) for label in labels], dtype=float)


def log_likelihood(batch, dist):
    counts = _aligned_counts(batch, dist)
    probabilities = dist.probabilities
    observed = counts > 0
    if np.any(probabilities[observed] <= 0):
        return -np.inf
    return float(counts[observed] @ np.log(probabilities[observed]))


def _objective(batch, model, vector):
    def negative_log_likelihood(theta):
        try:
            dist = model(theta if vector else float(theta))
        except EchoImagerError:
            return np.inf
        return -log_likelihood(batch, dist)
    return negative_log_likelihood


def mle(batch, model, bounds, theta0=None, parameters=(), strict=False):
    """
    Maximise the multinomial likelihood of ``batch`` under ``model``.

    One parameter is fitted by bounded Brent search on ``bounds = (lo, hi)``;
    several by Nelder-Mead on ``bounds = [(lo, hi), ...]`` starting from
    ``theta0`` (default: the box centre). Failing to converge is counted in
    the report, or raised when ``strict`` is set.
    """
    started = time.perf_counter()
    bounds = np.atleast_2d(np.asarray(bounds, dtype=float))
    if bounds.shape[1] != 2:
        raise DimensionMismatchError('bounds must be (low, high) pairs')

    if bounds.shape[0] == 1:
        lo, hi = bounds[0]
        result = minimize_scalar(
            _objective(batch, model, vector=False), bounds=(lo, hi), method='bounded',
            options={'xatol': X_TOLERANCE * (hi - lo), 'maxiter': MAX_ITERATIONS},
        )
        estimate, converged = np.array([result.x]), bool(result.success)
    else:
        start = bounds.mean(axis=1) if theta0 is None else np.asarray(theta0, dtype=float)
        result = minimize(
            _objective(batch, model, vector=True), start, method='Nelder-Mead',
            bounds=[tuple(pair) for pair in bounds],
            options={'xatol': X_TOLERANCE * np.ptp(bounds, axis=1).min(), 'fatol': 1e-10,
                     'maxiter': MAX_ITERATIONS * bounds.shape[0]},
        )
        estimate, converged = np.asarray(result.x), bool(result.success)

    if not converged:
        message = f'likelihood maximisation did not converge: {result.message}'
        if strict:
            raise ConvergenceError(message)
        logger.warning(message)
    logger.debug('MLE %s after %s evaluations', estimate, result.nfev)
    return EstimationReport.single(estimate, parameters, converged, batch.trials,
                                   time.perf_counter() - started)


def estimation_study(model, truth, bounds, trials, replications=settings.REPLICATIONS, seed=0,
                     threads=settings.THREADS, parameters=(), leading_order=False,
                     algorithm=settings.RNG_ALGORITHM):
    """
    Sample ``trials`` repetitions of ``model(truth)`` and fit them, ``replications``
    times, then compare the spread of the estimates with the Cramer-Rao bound.
    """
    started = time.perf_counter()
    truth_vector = np.atleast_1d(np.asarray(truth, dtype=float))
    vector = truth_vector.size > 1
    dist = model(truth_vector if vector else float(truth_vector[0]))

    def one(index, seed_sequence):
        batch = sample(dist, trials, seed_sequence, algorithm)
        return mle(batch, model, bounds, truth_vector if vector else None, parameters)

    reports = replicate(one, replications, seed, threads)
    report = EstimationReport({'parameters': list(parameters), 'estimates': [], 'replications': 0})
    for item in reports:
        report = report.merge(item)

    if vector:
        fisher = fisher_matrix(model, truth_vector, leading_order=leading_order)
    else:
        fisher = classical_fi(model, float(truth_vector[0]), leading_order=leading_order).value
    report.trials = trials
    report.seed = seed
    report.algorithm = algorithm
    report.runtime = time.perf_counter() - started
    report.with_reference(truth_vector, fisher)
    logger.info('estimation study: %d replications, efficiency %s', report.replications, report.efficiency())
    return report
