import warnings
from dataclasses import dataclass

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import (
    DimensionMismatchError, PhysicalityError, PerturbativeRegimeWarning,
)


@dataclass(frozen=True, eq=False)
class Scene:
    """
    Point emitters/absorbers on the object plane.

    Positions are in units of the PSF width ``sigma``; ``sigma`` itself is the
    physical width and only matters when converting back.
    """
    positions: np.ndarray
    weights: np.ndarray = None
    brightness: float = 0.
    absorption_rate: float = 0.
    correlation: float = 0.
    sigma: float = 1.
    centroid_known: bool = True

    def __post_init__(self):
        positions = np.atleast_1d(np.asarray(self.positions, dtype=float))
        weights = (np.full(positions.size, 1. / positions.size) if self.weights is None
                   else np.atleast_1d(np.asarray(self.weights, dtype=float)))
        if weights.shape != positions.shape:
            raise DimensionMismatchError('one weight per source is required')
        if np.any(weights < 0) or abs(weights.sum() - 1.) > 1e-9:
            raise PhysicalityError('source weights must be non-negative and sum to 1')
        if not self.sigma > 0:
            raise PhysicalityError('PSF width must be positive')
        if self.brightness < 0 or self.absorption_rate < 0:
            raise PhysicalityError('brightness and absorption rate must be non-negative')
        if not 0. <= self.correlation <= 1.:
            raise PhysicalityError('correlation coefficient must lie in [0, 1]')
        if self.correlation and positions.size != 2:
            raise DimensionMismatchError('correlated emission is modelled for two sources only')
        for name in ('brightness', 'absorption_rate'):
            value = getattr(self, name)
            if value >= settings.BRIGHTNESS_WARN:
                warnings.warn(
                    f'{name} {value:g} is outside the perturbative regime',
                    PerturbativeRegimeWarning, stacklevel=3,
                )
        object.__setattr__(self, 'positions', positions)
        object.__setattr__(self, 'weights', weights)

    @classmethod
    def two_point(cls, separation, brightness=0., absorption_rate=0., correlation=0., sigma=1.):
        """Two equal sources at ``+-separation/2`` (separation in units of sigma)."""
        half = separation / 2.
        return cls(np.array([half, -half]), np.array([.5, .5]), brightness,
                   absorption_rate, correlation, sigma)

    @classmethod
    def from_physical(cls, positions, sigma, weights=None, **kwargs):
        if not sigma > 0:
            raise PhysicalityError('PSF width must be positive')
        weights = None if weights is None else np.asarray(weights, dtype=float)
        if weights is not None:
            weights = weights / weights.sum()
        return cls(np.asarray(positions, dtype=float) / sigma, weights, sigma=sigma, **kwargs)

    @property
    def count(self):
        return self.positions.size

    @property
    def physical_positions(self):
        return self.positions * self.sigma

    @property
    def is_two_point_centered(self):
        return (self.count == 2 and np.isclose(self.positions.sum(), 0., atol=1e-12)
                and np.isclose(self.weights[0], self.weights[1]))

    @property
    def separation(self):
        if self.count != 2:
            raise DimensionMismatchError('separation is defined for two-source scenes')
        return float(abs(self.positions[0] - self.positions[1]))

    def with_separation(self, separation):
        return Scene.two_point(separation, self.brightness, self.absorption_rate,
                               self.correlation, self.sigma)

    def coupling(self, kind='emission'):
        """
        Source coupling matrix: ``brightness * weights`` for emission and
        ``absorption_rate * M * weights`` for absorption, plus the correlated
        off-diagonal term for pairs.
        """
        if kind == 'emission':
            rates = self.brightness * self.weights
        elif kind == 'absorption':
            rates = self.absorption_rate * self.count * self.weights
        else:
            raise DimensionMismatchError(f'unknown rate kind {kind!r}')
        coupling = np.diag(rates)
        if self.correlation:
            coupling[0, 1] = coupling[1, 0] = self.correlation * np.sqrt(rates[0] * rates[1])
        return coupling
