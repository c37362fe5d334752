"""
Classical Fisher information of parametrised count distributions.

Derivatives are central differences with steps ``h`` and ``h/2`` combined by
Richardson extrapolation. The spread between the two step sizes is the
error estimate.
"""
import logging

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import NumericalError, PerturbativeRegimeError, PhysicalityError
from echo_imager.fisher.result import FisherResult, default_step


logger = logging.getLogger(__name__)


def _probabilities(dist, outcomes):
    if dist.outcomes == outcomes:
        return dist.probabilities
    return np.array([dist.probability(outcome) for outcome in outcomes])


def _evaluate(dist_fn, theta, outcomes):
    try:
        dist = dist_fn(theta)
    except (PhysicalityError, PerturbativeRegimeError) as e:
        raise NumericalError(f'distribution undefined at shifted point {theta!r}: {e}') from e
    probabilities = _probabilities(dist, outcomes)
    if probabilities.min() < -settings.PROBABILITY_SUM_TOL:
        raise NumericalError(
            f'negative probability {probabilities.min():.3g} at {theta!r}, reduce the step'
        )
    return probabilities


def _derivative(dist_fn, theta, step, outcomes):
    upper = _evaluate(dist_fn, theta + step, outcomes)
    lower = _evaluate(dist_fn, theta - step, outcomes)
    return (upper - lower) / (2 * step)


def _kept(base, leading_order):
    """Outcomes entering the sum, and the probability mass dropped below the floor."""
    probabilities = base.probabilities
    kept = probabilities > settings.PROBABILITY_FLOOR
    dropped = float(probabilities[~kept].clip(min=0).sum())
    if leading_order and base.reference is not None:
        kept[base.reference_index] = False
    return kept, dropped


def _shifted(theta, index, step):
    shifted = np.array(theta, dtype=float)
    shifted[index] += step
    return shifted


def classical_fi(dist_fn, theta, dtheta=None, leading_order=False):
    """
    Per-trial Fisher information ``sum_x (d p_x)^2 / p_x`` of ``dist_fn`` at ``theta``.

    With ``leading_order`` the reference outcome (no click, or an unchanged
    Fock probe) is left out of the sum. Its contribution is of higher order
    in the click probabilities, so this is the first-order Fisher
    information of the click model.
    """
    base = dist_fn(theta).validate()
    step = dtheta or default_step(theta)
    kept, dropped = _kept(base, leading_order)
    probabilities = base.probabilities[kept]

    coarse = _derivative(dist_fn, theta, step, base.outcomes)[kept]
    fine = _derivative(dist_fn, theta, step / 2, base.outcomes)[kept]
    extrapolated = (4 * fine - coarse) / 3

    value = float(np.sum(extrapolated ** 2 / probabilities))
    error = abs(float(np.sum(fine ** 2 / probabilities) - np.sum(coarse ** 2 / probabilities))) / 3
    logger.debug('FI at theta=%g over %d outcomes: %.6g (+- %.2g), dropped mass %.2g',
                 theta, kept.sum(), value, error, dropped)
    return FisherResult.build(value, 'finite_difference', error, dropped)


def fisher_matrix(dist_fn, theta, dtheta=None, leading_order=False):
    """
    Fisher information matrix ``F_ij = sum_x d_i p_x d_j p_x / p_x`` for a
    vector of parameters; ``dist_fn`` takes the whole vector.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    base = dist_fn(theta).validate()
    steps = (np.full(theta.size, dtheta, dtype=float) if dtheta
             else np.array([default_step(t) for t in theta]))
    kept, _ = _kept(base, leading_order)
    probabilities = base.probabilities[kept]

    gradients = []
    for i, step in enumerate(steps):
        def along(t, i=i):
            return dist_fn(_shifted(theta, i, t - theta[i]))

        coarse = _derivative(along, theta[i], step, base.outcomes)[kept]
        fine = _derivative(along, theta[i], step / 2, base.outcomes)[kept]
        gradients.append((4 * fine - coarse) / 3)
    gradients = np.array(gradients)
    matrix = (gradients / probabilities) @ gradients.T
    return (matrix + matrix.T) / 2
