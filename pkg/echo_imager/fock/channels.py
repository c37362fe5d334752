"""
Bosonic channels on truncated Fock space: exact Kraus maps and the
first-order emission/absorption map.
"""
import logging
import warnings
from dataclasses import dataclass
from math import factorial

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import (
    DimensionMismatchError, PerturbativeRegimeWarning, PhysicalityError, TruncationWarning,
)
from echo_imager.fock.operators import annihilation, mode_operator
from echo_imager.scene.coherence import MutualCoherenceMatrix


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    operators: tuple
    label: str = ''

    def __post_init__(self):
        operators = tuple(np.asarray(op, dtype=complex) for op in self.operators)
        shapes = {op.shape for op in operators}
        if len(shapes) != 1 or len(next(iter(shapes))) != 2:
            raise DimensionMismatchError('Kraus operators must be square matrices of one size')
        object.__setattr__(self, 'operators', operators)

    @property
    def cutoff(self):
        return self.operators[0].shape[0] - 1

    def then(self, other):
        """``other`` after ``self``."""
        if other.cutoff != self.cutoff:
            raise DimensionMismatchError('cannot compose channels at different cutoffs')
        operators = tuple(b @ a for a in self.operators for b in other.operators)
        return KrausChannel(operators, f'{other.label} . {self.label}')

    def completeness_defect(self, levels=None):
        """Max deviation of ``sum K^dag K`` from the identity on photon numbers ``<= levels``."""
        levels = self.cutoff if levels is None else levels
        total = sum(op.conj().T @ op for op in self.operators)
        block = total[:levels + 1, :levels + 1]
        return float(np.abs(block - np.eye(levels + 1)).max())


def loss_kraus(eta, cutoff):
    """``K_n = sqrt(1-eta)^n eta^(N/2) a^n / sqrt(n!)``."""
    if not 0 < eta <= 1:
        raise PhysicalityError(f'transmissivity {eta!r} outside (0, 1]')
    a = annihilation(cutoff)
    damping = np.diag(eta ** (np.arange(cutoff + 1) / 2))
    operators = [
        (1 - eta) ** (n / 2) * damping @ np.linalg.matrix_power(a, n) / np.sqrt(factorial(n))
        for n in range(cutoff + 1)
    ]
    return KrausChannel(operators, f'loss(eta={eta:g})')


def amp_kraus(gain, cutoff):
    """``K_n = sqrt(1/G) sqrt((G-1)/G)^n (a^dag)^n / sqrt(n!) G^(-N/2)``."""
    if gain < 1:
        raise PhysicalityError(f'amplifier gain {gain!r} below 1')
    if (gain - 1) * cutoff > 1:
        warnings.warn(
            f'gain {gain:g} populates levels near cutoff {cutoff}; truncation error is not small',
            TruncationWarning, stacklevel=2,
        )
    create = annihilation(cutoff).T
    attenuation = np.diag(gain ** (-np.arange(cutoff + 1) / 2))
    operators = [
        gain ** -0.5 * ((gain - 1) / gain) ** (n / 2)
        * np.linalg.matrix_power(create, n) @ attenuation / np.sqrt(factorial(n))
        for n in range(cutoff + 1)
    ]
    return KrausChannel(operators, f'amp(G={gain:g})')


def agn_channel(gamma, cutoff):
    """Additive noise as loss ``1/(1+gamma)`` followed by gain ``1+gamma``."""
    if gamma < 0:
        raise PhysicalityError('added noise must be non-negative')
    return loss_kraus(1 / (1 + gamma), cutoff).then(amp_kraus(1 + gamma, cutoff))


def _local(tensor, operator, axis):
    moved = np.tensordot(operator, tensor, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def _local_bra(tensor, operator, axis):
    moved = np.tensordot(tensor, operator.conj(), axes=([axis], [1]))
    return np.moveaxis(moved, -1, axis)


def apply_kraus(state, channel, mode=0):
    """Apply a single-mode Kraus channel to ``mode`` of a multimode state."""
    if not 0 <= mode < state.modes:
        raise DimensionMismatchError(f'mode {mode} does not exist in a {state.modes}-mode state')
    if channel.cutoff != state.cutoff:
        raise DimensionMismatchError('channel and state use different cutoffs')
    shape = (state.levels,) * (2 * state.modes)
    tensor = state.rho.reshape(shape)
    output = np.zeros(shape, dtype=complex)
    for operator in channel.operators:
        output += _local_bra(_local(tensor, operator, mode), operator, state.modes + mode)
    return state.evolve(output.reshape(state.rho.shape))


def apply_unitary(state, unitary):
    return state.evolve(unitary @ state.rho @ unitary.conj().T)


def _rate_matrix(gamma, size):
    if gamma is None:
        return np.zeros((size, size))
    gamma = MutualCoherenceMatrix.coerce(gamma)
    if gamma.size != size:
        raise DimensionMismatchError(f'rate matrix of size {gamma.size} for {size} modes')
    if not gamma.is_hermitian():
        raise PhysicalityError('rate matrix is not Hermitian')
    return gamma.entries


def apply_grandfather(state, gamma_up=None, gamma_down=None, modes=None):
    """
    First-order absorption/emission map::

        rho + sum_lk up_lk (psi_k rho psi_l^dag - {psi_l^dag psi_k, rho}/2)
                   + down_lk (psi_l^dag rho psi_k - {psi_k psi_l^dag, rho}/2)

    ``modes`` lists the Fock modes playing ``psi_0, psi_1, ...``. Products are
    taken between truncated matrices, so the trace is conserved exactly.
    """
    modes = list(range(state.modes)) if modes is None else list(modes)
    up = _rate_matrix(gamma_up, len(modes))
    down = _rate_matrix(gamma_down, len(modes))
    ops = [mode_operator(m, state.modes, state.cutoff) for m in modes]
    rho = state.rho

    delta = np.zeros_like(rho)
    strength = 0.
    for l, psi_l in enumerate(ops):
        dag_l = psi_l.conj().T
        for k, psi_k in enumerate(ops):
            if up[l, k]:
                jump = dag_l @ psi_k
                delta += up[l, k] * (psi_k @ rho @ dag_l - (jump @ rho + rho @ jump) / 2)
                strength += (up[l, k] * np.trace(jump @ rho)).real
            if down[l, k]:
                jump = psi_k @ dag_l
                delta += down[l, k] * (dag_l @ rho @ psi_k - (jump @ rho + rho @ jump) / 2)
                strength += (down[l, k] * np.trace(jump @ rho)).real
    if strength > settings.PERTURBATIVE_WARN:
        warnings.warn(
            f'first-order jump probability {strength:.3g} exceeds {settings.PERTURBATIVE_WARN}',
            PerturbativeRegimeWarning, stacklevel=2,
        )
    logger.debug('grandfather map on modes %s, jump probability %.3g', modes, strength)
    return state.evolve(rho + delta)
