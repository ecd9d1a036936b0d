"""Exception types shared across the package."""


class SchurlabError(Exception):
    """Base class for all package-specific errors."""


class ScaleRefusal(SchurlabError):
    """The requested instance is beyond the configured desk-scale budget."""


class BasisTooLarge(SchurlabError):
    """A many-body basis would exceed the configured state cap."""


class MalformedAssignment(SchurlabError):
    """A SAT assignment string cannot be parsed or is incomplete."""


class InconsistentAssignment(SchurlabError):
    """A SAT assignment places some value in zero or several blocks."""


class InsufficientTerms(SchurlabError):
    """A sequence check needs more generated terms than are available."""


class TooManyValues(SchurlabError):
    """A symmetrized register would need more than the factorial cap."""


class NumericalFailure(SchurlabError):
    """The dense eigensolver failed to converge."""
