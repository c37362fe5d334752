from dataclasses import dataclass
from typing import Any

import numpy as np

from echo_imager import settings
from echo_imager.base.exceptions import DimensionMismatchError, NumericalError


NO_CLICK = 'no-click'


@dataclass(frozen=True, eq=False)
class CountDistribution:
    """
    Outcome probabilities of one trial.

    ``reference`` names the outcome that carries the bulk of the probability
    (no click, or the unchanged photon number of a Fock probe). Leading-order
    Fisher information leaves it out of the sum.
    """
    outcomes: tuple
    probabilities: np.ndarray
    parameters: tuple = ()
    reference: Any = None

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        probabilities = np.asarray(self.probabilities, dtype=float).ravel()
        if probabilities.size != len(outcomes):
            raise DimensionMismatchError(
                f'{len(outcomes)} outcomes but {probabilities.size} probabilities'
            )
        if len(set(outcomes)) != len(outcomes):
            raise DimensionMismatchError('outcome labels must be unique')
        if self.reference is not None and self.reference not in outcomes:
            raise DimensionMismatchError(f'reference outcome {self.reference!r} is not an outcome')
        object.__setattr__(self, 'outcomes', outcomes)
        object.__setattr__(self, 'probabilities', probabilities)
        object.__setattr__(self, 'parameters', tuple(self.parameters))

    @classmethod
    def clicks(cls, rates, labels, parameters=(), no_click=NO_CLICK):
        """First-order click model: one label per mode plus a completing no-click outcome."""
        rates = np.atleast_1d(np.asarray(rates, dtype=float))
        labels = tuple(labels)
        if len(labels) != rates.size:
            raise DimensionMismatchError('one label per click rate is required')
        return cls((no_click,) + labels, np.concatenate([[1. - rates.sum()], rates]),
                   parameters, no_click)

    def __len__(self):
        return len(self.outcomes)

    def __iter__(self):
        return iter(zip(self.outcomes, self.probabilities))

    def probability(self, outcome):
        try:
            return float(self.probabilities[self.outcomes.index(outcome)])
        except ValueError:
            return 0.

    def as_dict(self):
        return dict(zip(self.outcomes, self.probabilities.tolist()))

    @property
    def total(self):
        return float(self.probabilities.sum())

    @property
    def reference_index(self):
        return None if self.reference is None else self.outcomes.index(self.reference)

    def validate(self, tol=settings.PROBABILITY_SUM_TOL):
        lowest = self.probabilities.min() if len(self) else 0.
        if lowest < -tol:
            raise NumericalError(f'negative probability {lowest:.3g}')
        if abs(self.total - 1.) > tol:
            raise NumericalError(f'probabilities sum to {self.total!r}')
        return self

    def combine(self, other):
        """Joint distribution of two independent outcomes."""
        outcomes = tuple((a, b) for a in self.outcomes for b in other.outcomes)
        reference = (None if self.reference is None or other.reference is None
                     else (self.reference, other.reference))
        return CountDistribution(outcomes, np.outer(self.probabilities, other.probabilities),
                                 self.parameters + other.parameters, reference)

    def combine_first_order(self, other):
        """
        Joint distribution keeping single events only: coincidences are second
        order and their weight stays on the joint reference outcome.
        """
        if self.reference is None or other.reference is None:
            raise DimensionMismatchError('first-order combination needs reference outcomes')
        reference = (self.reference, other.reference)
        outcomes = [reference]
        probabilities = [0.]
        for outcome, p in self:
            if outcome != self.reference:
                outcomes.append((outcome, other.reference))
                probabilities.append(p)
        for outcome, p in other:
            if outcome != other.reference:
                outcomes.append((self.reference, outcome))
                probabilities.append(p)
        probabilities[0] = 1. - sum(probabilities[1:])
        return CountDistribution(tuple(outcomes), probabilities,
                                 self.parameters + other.parameters, reference)
