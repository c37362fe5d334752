import logging

from echo_imager.fisher.result import FisherResult, default_step
from echo_imager.fock.measure import root_fidelity


logger = logging.getLogger(__name__)


def _bures_qfi(rho_fn, theta, step):
    lower = rho_fn(theta - step / 2).validate()
    upper = rho_fn(theta + step / 2).validate()
    return 8 * (1 - root_fidelity(lower, upper)) / step ** 2


def qfi_numeric(rho_fn, theta, dtheta=None):
    """
    Quantum Fisher information from the Bures distance between ``rho(theta -+ h/2)``.

    The estimate is Richardson-extrapolated from steps ``h`` and ``h/2``; the
    difference between the two is reported as the error estimate.
    """
    step = dtheta or default_step(theta)
    coarse = _bures_qfi(rho_fn, theta, step)
    fine = _bures_qfi(rho_fn, theta, step / 2)
    value = (4 * fine - coarse) / 3
    error = abs(fine - coarse) / 3
    logger.debug('QFI at theta=%g: %.6g (+- %.2g)', theta, value, error)
    return FisherResult.build(value, 'numeric_qfi', error)
