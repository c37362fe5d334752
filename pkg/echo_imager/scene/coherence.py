from dataclasses import dataclass
from typing import Any

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import DimensionMismatchError, PhysicalityError


@dataclass(frozen=True, eq=False)
class MutualCoherenceMatrix:
    """
    Emission or absorption rates ``Gamma_lk`` expressed in a mode basis.

    ``kind`` is ``'emission'`` or ``'absorption'``; ``basis`` is the
    ``ModeBasis`` the entries refer to, when known.
    """
    entries: np.ndarray
    basis: Any = None
    kind: str = 'emission'

    def __post_init__(self):
        entries = np.atleast_2d(np.asarray(self.entries))
        if entries.shape[0] != entries.shape[1]:
            raise DimensionMismatchError(f'coherence matrix of shape {entries.shape} is not square')
        if not np.iscomplexobj(entries) or np.allclose(entries.imag, 0.):
            entries = entries.real.astype(float)
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def diagonal_rates(cls, rates, kind='emission'):
        return cls(np.diag(np.atleast_1d(np.asarray(rates, dtype=float))), kind=kind)

    @classmethod
    def coerce(cls, value, kind='emission'):
        """Accept a matrix, a per-mode rate vector or a scalar rate."""
        if isinstance(value, cls):
            return value
        value = np.asarray(value)
        if value.ndim < 2:
            return cls.diagonal_rates(value, kind)
        return cls(value, kind=kind)

    @property
    def size(self):
        return self.entries.shape[0]

    @property
    def diagonal(self):
        return np.real(np.diag(self.entries)).astype(float)

    @property
    def trace(self):
        return float(np.real(np.trace(self.entries)))

    def is_hermitian(self, tol=1e-12):
        return np.allclose(self.entries, self.entries.conj().T, rtol=0., atol=tol)

    def eigenvalues(self):
        return np.linalg.eigvalsh((self.entries + self.entries.conj().T) / 2)

    def is_psd(self, tol=settings.EIGEN_CLIP_TOL):
        return self.eigenvalues().min() >= -tol

    def validate(self):
        if not self.is_hermitian():
            raise PhysicalityError('coherence matrix is not Hermitian')
        if not self.is_psd():
            raise PhysicalityError(
                f'coherence matrix has negative eigenvalue {self.eigenvalues().min():.3g}'
            )
        return self
