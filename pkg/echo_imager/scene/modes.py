"""
Point-spread function and structured mode bases on a 1-D collection plane.
"""
from dataclasses import dataclass, field
from math import factorial, sqrt

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss
from scipy.special import eval_hermite
from scipy.stats import norm

from echo_imager import settings
from echo_imager.base.exceptions import DimensionMismatchError, PhysicalityError


def hg_mode(k, sigma, u):
    """
    Hermite-Gaussian mode ``psi_k(u)`` of width ``sigma`` (``|psi_0|^2`` has variance sigma^2).
    """
    if k < 0:
        raise DimensionMismatchError('mode index must be non-negative')
    u = np.asarray(u, dtype=float)
    norm_k = (2 * np.pi * sigma ** 2) ** -0.25 / sqrt(2 ** k * factorial(k))
    return norm_k * eval_hermite(k, u / (sqrt(2) * sigma)) * np.exp(-u ** 2 / (4 * sigma ** 2))


def displaced_psf_coeffs(y, sigma, K):
    """``c_k(y) = (2^k k!)^-1/2 (y/sigma)^k exp(-y^2 / 4 sigma^2)`` for ``k < K``."""
    ratio = y / sigma
    return np.array([
        ratio ** k / sqrt(2 ** k * factorial(k)) for k in range(K)
    ]) * np.exp(-ratio ** 2 / 4)


def completeness_residual(y, sigma, K):
    return float(1. - np.sum(displaced_psf_coeffs(y, sigma, K) ** 2))


def hermite_quadrature(width, nodes=settings.GAUSS_HERMITE_NODES):
    """
    Nodes ``u`` and weights ``W`` with ``int g(u) du ~ sum W g(u)``, exact for
    polynomials times ``exp(-u^2 / 2 width^2)``.
    """
    x, w = hermgauss(nodes)
    u = sqrt(2.) * width * x
    weights = sqrt(2.) * width * np.exp(np.log(w) + x ** 2)
    return u, weights


@dataclass(frozen=True)
class GaussianPSF:
    sigma: float = 1.

    def __post_init__(self):
        if not self.sigma > 0:
            raise PhysicalityError('PSF width must be positive')

    def amplitude(self, u):
        return hg_mode(0, self.sigma, u)

    def intensity(self, u):
        return self.amplitude(u) ** 2

    def normalization(self, nodes=settings.GAUSS_HERMITE_NODES):
        u, weights = hermite_quadrature(self.sigma, nodes)
        return float(weights @ self.intensity(u))

    def pixel_probabilities(self, edges, x=0.):
        """Exact intensity captured by each pixel for a source at ``x``."""
        z = (np.asarray(edges, dtype=float) - x) / self.sigma
        # upper tail from the survival function keeps small pixels accurate
        left = np.diff(norm.cdf(z))
        right = -np.diff(norm.sf(z))
        return np.where(z[:-1] >= 0, right, left)


@dataclass(frozen=True, eq=False)
class ModeBasis:
    """
    Orthonormal detection modes.

    ``kind='hg'`` uses Hermite-Gaussian modes matched to the displaced-PSF
    coefficients ``c_k``, which fixes their width at ``sigma / sqrt(2)``.
    ``kind='pixel'`` uses flat pixels between ``edges``. ``kind='custom'``
    takes callables ``u -> psi_k(u)`` in ``functions``.
    """
    kind: str = 'hg'
    sigma: float = 1.
    truncation: int = 6
    edges: np.ndarray = None
    functions: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.sigma > 0:
            raise PhysicalityError('basis width must be positive')
        if self.kind == 'pixel':
            if self.edges is None or len(self.edges) < 2:
                raise DimensionMismatchError('pixel basis needs at least two edges')
            object.__setattr__(self, 'truncation', len(self.edges) - 1)
        elif self.kind == 'custom':
            object.__setattr__(self, 'truncation', len(self.functions))
        elif self.kind != 'hg':
            raise DimensionMismatchError(f'unknown basis kind {self.kind!r}')

    @classmethod
    def hermite_gauss(cls, sigma=1., truncation=6):
        return cls('hg', sigma, truncation)

    @property
    def width(self):
        return self.sigma / sqrt(2.) if self.kind == 'hg' else self.sigma

    def evaluate(self, u):
        """Mode values, shape ``(K, len(u))``."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if self.kind == 'hg':
            return np.array([hg_mode(k, self.width, u) for k in range(self.truncation)])
        if self.kind == 'pixel':
            widths = np.diff(self.edges)
            index = np.searchsorted(self.edges, u, side='right') - 1
            values = np.zeros((self.truncation, u.size))
            inside = (index >= 0) & (index < self.truncation)
            values[index[inside], np.flatnonzero(inside)] = 1. / np.sqrt(widths[index[inside]])
            return values
        return np.array([np.asarray(f(u), dtype=float) for f in self.functions])

    def field_psf(self, u, x=0.):
        """Field amplitude of a point source at ``x`` as seen by this basis."""
        if self.kind == 'hg':
            return hg_mode(0, self.width, np.asarray(u) - x)
        return GaussianPSF(self.sigma).amplitude(np.asarray(u) - x)

    def quadrature(self, nodes=settings.GAUSS_HERMITE_NODES, per_pixel=8):
        if self.kind == 'pixel':
            x, w = leggauss(per_pixel)
            lo, hi = self.edges[:-1, None], self.edges[1:, None]
            u = ((hi - lo) / 2 * x + (hi + lo) / 2).ravel()
            weights = ((hi - lo) / 2 * w).ravel()
            return u, weights
        return hermite_quadrature(self.width, nodes)

    def gram(self):
        u, weights = self.quadrature()
        values = self.evaluate(u)
        return (values * weights) @ values.T

    def is_orthonormal(self, tol=1e-8):
        return np.allclose(self.gram(), np.eye(self.truncation), rtol=0., atol=tol)


def pixel_edges(sigma=1., pixels_per_sigma=20, energy=0.999, extent=0.):
    """
    Symmetric uniform grid wide enough that a source within ``extent`` of the
    origin keeps at least ``energy`` of its intensity on the grid.
    """
    half = norm.ppf(0.5 + energy / 2) * sigma + abs(extent)
    count = 2 * int(np.ceil(half * pixels_per_sigma / sigma))
    return np.linspace(-half, half, count + 1)


def pixel_basis(sigma=1., pixels_per_sigma=20, energy=0.999, extent=0.):
    return ModeBasis('pixel', sigma, edges=pixel_edges(sigma, pixels_per_sigma, energy, extent))
