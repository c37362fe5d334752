from schematics.exceptions import *


CONFIG_EXIT_CODE = 2
NUMERICAL_EXIT_CODE = 3


class EchoImagerError(Exception):
    category = 'error'
    exit_code = 1


class DimensionMismatchError(EchoImagerError, ValueError):
    category = 'dimension'
    exit_code = CONFIG_EXIT_CODE


class PhysicalityError(EchoImagerError, ValueError):
    category = 'physicality'
    exit_code = NUMERICAL_EXIT_CODE


class PerturbativeRegimeError(EchoImagerError, ValueError):
    category = 'perturbative'
    exit_code = CONFIG_EXIT_CODE


class UnsupportedTaskError(EchoImagerError, ValueError):
    category = 'unsupported'
    exit_code = CONFIG_EXIT_CODE


class ConfigError(EchoImagerError):
    category = 'config'
    exit_code = CONFIG_EXIT_CODE

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = errors or {}


class NumericalError(EchoImagerError, ArithmeticError):
    category = 'numerical'
    exit_code = NUMERICAL_EXIT_CODE


class ConvergenceError(NumericalError):
    category = 'convergence'


class PerturbativeRegimeWarning(RuntimeWarning):
    pass


class TruncationWarning(RuntimeWarning):
    pass
