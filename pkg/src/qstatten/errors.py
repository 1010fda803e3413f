"""Exception types shared across the package."""


class QstattenError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(QstattenError):
    """An argument violates a documented precondition."""


class DegenerateParametersError(QstattenError):
    """Cholesky parameter vector has (numerically) zero norm."""


class NotPsdError(QstattenError):
    """Matrix expected to be positive semidefinite is not."""


class MetricRangeError(QstattenError):
    """A metric value fell outside its tolerance band before clamping."""


class ConfigError(QstattenError):
    """A scenario configuration file is missing, malformed, or inconsistent."""
