import numpy as np
from scipy.linalg import svdvals

from echo_imager import settings
from echo_imager.base.exceptions import DimensionMismatchError, PhysicalityError
from echo_imager.protocols.distribution import CountDistribution


def measure_counts(state, modes=None, reference=None):
    """Joint photon-number distribution of ``modes``, labelled by occupation tuples."""
    modes = list(range(state.modes)) if modes is None else list(modes)
    if any(not 0 <= m < state.modes for m in modes) or len(set(modes)) != len(modes):
        raise DimensionMismatchError(f'invalid mode selection {modes} for {state.modes} modes')
    others = tuple(m for m in range(state.modes) if m not in modes)
    marginal = state.populations().sum(axis=others) if others else state.populations()
    marginal = np.transpose(marginal, np.argsort(np.argsort(modes)))
    outcomes = tuple(np.ndindex(marginal.shape))
    return CountDistribution(outcomes, [marginal[o] for o in outcomes], reference=reference)


def _sector_totals(state, modes):
    grid = np.indices((state.levels,) * state.modes).reshape(state.modes, -1)
    return grid[list(modes)].sum(axis=0) if modes else np.zeros(state.dim, dtype=int)


def dephase_sectors(state, signal_modes, idler_modes):
    """Average over ``{Pi_NS (x) Pi_NI}``: keep coherences inside fixed total-number sectors."""
    signal = _sector_totals(state, signal_modes)
    idler = _sector_totals(state, idler_modes)
    keep = (signal[:, None] == signal[None, :]) & (idler[:, None] == idler[None, :])
    return state.evolve(np.where(keep, state.rho, 0.))


def sector_counts(state, signal_modes, idler_modes):
    """Joint distribution of total signal and idler photon numbers as a 2-D array."""
    signal = _sector_totals(state, signal_modes)
    idler = _sector_totals(state, idler_modes)
    populations = np.diag(state.rho).real
    joint = np.zeros((signal.max() + 1, idler.max() + 1))
    np.add.at(joint, (signal, idler), populations)
    return joint


def mutual_information(joint):
    """Mutual information in nats; small negative entries are treated as zero."""
    joint = np.clip(np.asarray(joint, dtype=float), 0., None)
    joint = joint / joint.sum()
    outer = np.outer(joint.sum(axis=1), joint.sum(axis=0))
    mask = joint > 0
    return float(np.sum(joint[mask] * np.log(joint[mask] / outer[mask])))


def trace_distance(a, b):
    return float(np.abs(np.linalg.eigvalsh(a.rho - b.rho)).sum() / 2)


def _sqrtm_psd(state, tol=settings.EIGEN_CLIP_TOL):
    values, vectors = np.linalg.eigh(state.rho)
    if values.min() < -tol:
        raise PhysicalityError(f'density matrix has eigenvalue {values.min():.3g}')
    return (vectors * np.sqrt(np.clip(values, 0., None))) @ vectors.conj().T


def root_fidelity(a, b):
    """Uhlmann root fidelity ``||sqrt(a) sqrt(b)||_1``."""
    return float(svdvals(_sqrtm_psd(a) @ _sqrtm_psd(b)).sum())


def fidelity(a, b):
    return root_fidelity(a, b) ** 2
