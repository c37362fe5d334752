import numpy as np

from echo_imager.base.exceptions import PhysicalityError, UnsupportedTaskError
from echo_imager.protocols.distribution import CountDistribution
from echo_imager.protocols.echo import check_single_photon, mode_rates
from echo_imager.protocols.probes import QUIET, per_mode


def fock_probe(gamma_up, gamma_down, n, noise=QUIET, modes=None):
    """
    Photon-number record of a structured Fock probe ``|n_1 ... n_K>``.

    Absorption removes a photon from mode ``k`` with probability
    ``n_k Gamma_up_kk`` and emission adds one with probability
    ``(n_k + 1) Gamma_down_kk``; loss and heating enter the same two
    outcomes. Outcomes are occupation tuples, the unchanged tuple being the
    reference. Modes holding no photons have no absorption outcome.
    """
    up, down = mode_rates(gamma_up, gamma_down, modes)
    modes = up.size
    n = per_mode(n, modes, dtype=float, name='n')
    if np.any(n < 0) or not np.all(np.equal(np.mod(n, 1), 0)):
        raise PhysicalityError('photon numbers must be non-negative integers')
    n = n.astype(int)
    noise = noise or QUIET
    if noise.sector != 'signal':
        raise UnsupportedTaskError('a Fock probe has no idler sector')

    lowered = n * (up + noise.absorption_like(modes))
    raised = (n + 1) * (down + noise.emission_like(modes))
    check_single_photon(np.concatenate([lowered, raised]), 'Fock probe')

    reference = tuple(int(k) for k in n)
    outcomes, probabilities = [reference], [0.]
    for k in range(modes):
        if n[k] > 0:
            outcomes.append(reference[:k] + (reference[k] - 1,) + reference[k + 1:])
            probabilities.append(lowered[k])
        outcomes.append(reference[:k] + (reference[k] + 1,) + reference[k + 1:])
        probabilities.append(raised[k])
    probabilities[0] = 1. - sum(probabilities[1:])
    return CountDistribution(tuple(outcomes), probabilities, ('gamma_up', 'gamma_down'), reference)
