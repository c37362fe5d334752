import numpy as np

from echo_imager import settings
from echo_imager.base import fields
from echo_imager.base.exceptions import ValidationError
from echo_imager.base.models import ConfigModel


class TrialBatch(ConfigModel):
    """
    Counts of ``trials`` repetitions of one distribution.

    Labels are the string form of the distribution's outcomes so that the
    batch serialises to JSON whatever the outcome type.
    """
    labels = fields.ListType(fields.StringType, required=True)
    counts = fields.ListType(fields.IntType(min_value=0), required=True)
    trials = fields.IntType(required=True, min_value=1)
    seed = fields.IntType()
    algorithm = fields.StringType(default=settings.RNG_ALGORITHM)

    def validate_counts(self, data, value):
        if value is not None and data.get('labels') is not None and len(value) != len(data['labels']):
            raise ValidationError('one count per label is required')
        if value is not None and data.get('trials') is not None and sum(value) != data['trials']:
            raise ValidationError('counts must add up to the number of trials')
        return value

    def as_dict(self):
        return dict(zip(self.labels, self.counts))

    def count(self, outcome):
        return self.as_dict().get(str(outcome), 0)


class EstimationReport(ConfigModel):
    """
    Running statistics of maximum-likelihood estimates.

    Reports over disjoint replications merge associatively through their
    counts, means and summed squared deviations (``m2``).
    """
    parameters = fields.ListType(fields.StringType, default=list)
    estimates = fields.ListType(fields.FloatType, required=True)
    m2 = fields.ListType(fields.FloatType, default=list)
    sample_variance = fields.ListType(fields.FloatType(min_value=0.), default=list)
    crb = fields.ListType(fields.FloatType, default=list)
    bias = fields.ListType(fields.FloatType, default=list)
    truth = fields.ListType(fields.FloatType, default=list)
    replications = fields.IntType(default=1, min_value=0)
    failures = fields.IntType(default=0, min_value=0)
    trials = fields.IntType()
    seed = fields.IntType()
    algorithm = fields.StringType(default=settings.RNG_ALGORITHM)
    runtime = fields.FloatType(default=0.)

    @classmethod
    def single(cls, estimate, parameters=(), converged=True, trials=None, runtime=0.):
        estimate = np.atleast_1d(np.asarray(estimate, dtype=float))
        return cls({
            'parameters': list(parameters),
            'estimates': estimate.tolist(),
            'm2': [0.] * estimate.size,
            'sample_variance': [0.] * estimate.size,
            'replications': 1,
            'failures': 0 if converged else 1,
            'trials': trials,
            'runtime': runtime,
        })

    @property
    def converged(self):
        return self.failures == 0

    def merge(self, other):
        """Pooled statistics of two reports over disjoint replications."""
        n_a, n_b = self.replications, other.replications
        if n_a == 0:
            return other
        if n_b == 0:
            return self
        mean_a, mean_b = np.array(self.estimates), np.array(other.estimates)
        total = n_a + n_b
        delta = mean_b - mean_a
        mean = mean_a + delta * n_b / total
        m2 = np.array(self.m2) + np.array(other.m2) + delta ** 2 * n_a * n_b / total
        return EstimationReport({
            'parameters': self.parameters,
            'estimates': mean.tolist(),
            'm2': m2.tolist(),
            'sample_variance': (m2 / (total - 1)).tolist(),
            'replications': total,
            'failures': self.failures + other.failures,
            'trials': self.trials,
            'seed': self.seed,
            'algorithm': self.algorithm,
            'runtime': self.runtime + other.runtime,
        })

    def with_reference(self, truth, fisher):
        """Attach the truth, the bias and the Cramer-Rao bound ``1 / (M F)``."""
        truth = np.atleast_1d(np.asarray(truth, dtype=float))
        fisher = np.atleast_2d(np.asarray(fisher, dtype=float))
        crb = np.diag(np.linalg.inv(fisher)) / self.trials
        self.truth = truth.tolist()
        self.bias = (np.array(self.estimates) - truth).tolist()
        self.crb = crb.tolist()
        return self

    def efficiency(self):
        """Sample variance over the Cramer-Rao bound, per parameter."""
        return (np.array(self.sample_variance) / np.array(self.crb)).tolist()
