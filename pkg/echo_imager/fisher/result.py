from echo_imager.base import fields
from echo_imager.base.models import ConfigModel


METHODS = ('analytic', 'finite_difference', 'numeric_qfi', 'kraus_counting')


class FisherResult(ConfigModel):
    """Per-trial Fisher information with the way it was obtained."""
    value = fields.FloatType(required=True, min_value=0.)
    method = fields.StringType(required=True, choices=METHODS)
    error_estimate = fields.FloatType(default=0.)
    dropped_mass = fields.FloatType(default=0.)

    @classmethod
    def build(cls, value, method, error_estimate=0., dropped_mass=0.):
        return cls({
            'value': max(float(value), 0.),
            'method': method,
            'error_estimate': float(error_estimate),
            'dropped_mass': float(dropped_mass),
        })

    def __float__(self):
        return self.value


def default_step(theta):
    """Differencing step ``1e-3 |theta|`` with an absolute floor of ``1e-6``."""
    return max(1e-3 * abs(theta), 1e-6)
