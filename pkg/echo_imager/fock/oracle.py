import logging

import numpy as np

from echo_imager import settings
from echo_imager.fock.channels import amp_kraus, apply_grandfather, apply_kraus, apply_unitary, loss_kraus
from echo_imager.fock.measure import measure_counts
from echo_imager.fock.operators import squeezing_leakage, two_mode_squeeze_unitary, vacuum


logger = logging.getLogger(__name__)

IDLER, SIGNAL = 0, 1


def squeezed_vacuum(r, cutoff=settings.FOCK_CUTOFF):
    """Two-mode squeezed vacuum on (idler, signal) and the squeezer that made it."""
    unitary = two_mode_squeeze_unitary(r, cutoff)
    return apply_unitary(vacuum(2, cutoff), unitary), unitary


def exact_signal_channel(state, gamma_up=0., gamma_down=0.):
    """Loss ``exp(-gamma_up)`` then gain ``exp(gamma_down)`` on the signal mode."""
    if gamma_up:
        state = apply_kraus(state, loss_kraus(np.exp(-gamma_up), state.cutoff), SIGNAL)
    if gamma_down:
        state = apply_kraus(state, amp_kraus(np.exp(gamma_down), state.cutoff), SIGNAL)
    return state


def toy_echo_oracle(gamma_up, gamma_down, r, cutoff=settings.FOCK_CUTOFF, exact=False):
    """
    Squeeze, let the scene act on the signal, unsqueeze.

    The scene acts through the first-order map, or through exact loss and
    gain Kraus channels when ``exact`` is set.
    """
    state, unitary = squeezed_vacuum(r, cutoff)
    if exact:
        state = exact_signal_channel(state, gamma_up, gamma_down)
    else:
        state = apply_grandfather(state, [[gamma_up]], [[gamma_down]], modes=[SIGNAL])
    output = apply_unitary(state, unitary.conj().T)
    logger.debug('toy echo r=%g cutoff=%d: leakage %.3g, squeezer tail %.3g',
                 r, cutoff, output.leakage, squeezing_leakage(r, cutoff))
    return output


def echo_click_probabilities(state):
    """Single-photon probabilities ``(p_signal, p_idler)`` of an echoed two-mode state."""
    signal = measure_counts(state, [SIGNAL]).probability((1,))
    idler = measure_counts(state, [IDLER]).probability((1,))
    return signal, idler
