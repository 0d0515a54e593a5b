"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class CapacityError(DomainError):
    """A dense matrix would exceed the configured dimension cap."""


class SolverError(RuntimeError):
    """The eigensolver failed to converge or missed its residual contract."""


class CertificateError(AssertionError):
    """A separability certificate failed verification.

    ``term`` carries the offending decomposition term when one is to blame.
    """

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term
