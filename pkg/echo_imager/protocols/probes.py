import warnings
from dataclasses import dataclass

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import (
    DimensionMismatchError, PerturbativeRegimeError, PerturbativeRegimeWarning, PhysicalityError,
    UnsupportedTaskError,
)


PROBE_KINDS = ('twin_beam_echo', 'fock', 'single_mode_sqz_echo', 'coherent', 'vacuum')
SECTORS = ('signal', 'idler')


def per_mode(values, modes, dtype=float, name='value'):
    """Broadcast a scalar or validate a per-mode sequence against ``modes``."""
    values = np.atleast_1d(np.asarray(values, dtype=dtype))
    if values.size == 1:
        return np.full(modes, values[0], dtype=dtype)
    if values.size != modes:
        raise DimensionMismatchError(f'{name} has {values.size} entries for {modes} modes')
    return values


@dataclass(frozen=True, eq=False)
class ProbeConfig:
    """
    Probe preparation. Only the parameters of ``kind`` are read: ``squeeze_r``
    for the squeezing echoes, ``fock_n`` for Fock probes and
    ``coherent_amp`` for coherent light. Scalars apply to every mode.
    """
    kind: str = 'vacuum'
    squeeze_r: tuple = (0.,)
    fock_n: tuple = (0,)
    coherent_amp: tuple = (0j,)

    def __post_init__(self):
        if self.kind not in PROBE_KINDS:
            raise UnsupportedTaskError(f'unknown probe kind {self.kind!r}')
        squeeze_r = np.atleast_1d(np.asarray(self.squeeze_r, dtype=float))
        fock_n = np.atleast_1d(np.asarray(self.fock_n))
        if fock_n.size and (np.any(fock_n < 0) or not np.all(np.equal(np.mod(fock_n, 1), 0))):
            raise PhysicalityError('Fock photon numbers must be non-negative integers')
        object.__setattr__(self, 'squeeze_r', squeeze_r)
        object.__setattr__(self, 'fock_n', fock_n.astype(int))
        object.__setattr__(self, 'coherent_amp', np.atleast_1d(np.asarray(self.coherent_amp, dtype=complex)))

    @classmethod
    def twin_beam(cls, r):
        return cls('twin_beam_echo', squeeze_r=r)

    @classmethod
    def fock(cls, n):
        return cls('fock', fock_n=n)

    @classmethod
    def coherent(cls, alpha):
        return cls('coherent', coherent_amp=alpha)

    def squeezing(self, modes):
        return per_mode(self.squeeze_r, modes, name='squeeze_r')

    def photons(self, modes):
        return per_mode(self.fock_n, modes, dtype=int, name='fock_n')

    def amplitudes(self, modes):
        return per_mode(self.coherent_amp, modes, dtype=complex, name='coherent_amp')

    def mean_photons(self, modes=None):
        """Mean signal photon number ``N_S`` summed over ``modes`` (default: as given)."""
        if self.kind in ('twin_beam_echo', 'single_mode_sqz_echo'):
            values = self.squeeze_r if modes is None else self.squeezing(modes)
            return float(np.sum(np.sinh(values) ** 2))
        if self.kind == 'fock':
            values = self.fock_n if modes is None else self.photons(modes)
            return float(np.sum(values))
        if self.kind == 'coherent':
            values = self.coherent_amp if modes is None else self.amplitudes(modes)
            return float(np.sum(np.abs(values) ** 2))
        return 0.

    def signal_gain(self, modes):
        """Per-mode weight of emission events in the detected signal."""
        if self.kind in ('twin_beam_echo', 'single_mode_sqz_echo'):
            return np.cosh(self.squeezing(modes)) ** 2
        if self.kind == 'fock':
            return self.photons(modes) + 1.
        return np.ones(modes)

    def idler_gain(self, modes):
        """Per-mode weight of absorption events in the idler (or ``n - 1``) record."""
        if self.kind in ('twin_beam_echo', 'single_mode_sqz_echo'):
            return np.sinh(self.squeezing(modes)) ** 2
        if self.kind == 'fock':
            return self.photons(modes).astype(float)
        return np.zeros(modes)


@dataclass(frozen=True, eq=False)
class NoiseConfig:
    """
    Weak loss, heating and additive Gaussian noise on one sector.

    Rates above ``PERTURBATIVE_WARN`` warn, unless ``force`` is set; rates at
    or above ``BRIGHTNESS_WARN`` leave the first-order model and are refused.
    """
    kappa_loss: float = 0.
    kappa_heat: float = 0.
    kappa_agn: float = 0.
    sector: str = 'signal'
    force: bool = False

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise UnsupportedTaskError(f'unknown noise sector {self.sector!r}')
        for name in ('kappa_loss', 'kappa_heat', 'kappa_agn'):
            value = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            if np.any(value < 0):
                raise PhysicalityError(f'{name} must be non-negative')
            if np.any(value >= settings.BRIGHTNESS_WARN):
                raise PerturbativeRegimeError(f'{name} {value.max():g} exceeds the perturbative bound')
            if np.any(value > settings.PERTURBATIVE_WARN) and not self.force:
                warnings.warn(f'{name} {value.max():g} is not small', PerturbativeRegimeWarning,
                              stacklevel=3)
            object.__setattr__(self, name, value)

    def loss(self, modes):
        return per_mode(self.kappa_loss, modes, name='kappa_loss')

    def heat(self, modes):
        return per_mode(self.kappa_heat, modes, name='kappa_heat')

    def agn(self, modes):
        return per_mode(self.kappa_agn, modes, name='kappa_agn')

    def absorption_like(self, modes):
        """Extra absorption-type rate: loss plus the loss half of additive noise."""
        return self.loss(modes) + self.agn(modes)

    def emission_like(self, modes):
        return self.heat(modes) + self.agn(modes)


QUIET = NoiseConfig()
