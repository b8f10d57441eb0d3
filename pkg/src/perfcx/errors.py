"""Domain errors.

Every error raised on a well-formed but mathematically unacceptable input is a
``DomainError``; the CLI renders ``type(err).__name__`` as the stable error name.
"""


class DomainError(Exception):
    """Base class for all domain errors."""

    def __init__(self, message: str = "", location=None):
        super().__init__(message)
        self.location = location

    @property
    def name(self) -> str:
        return type(self).__name__


class RingMismatch(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class NotPerfect(DomainError):
    pass


class NotHereditary(DomainError):
    pass


class NonTorsionInput(DomainError):
    pass


class UnsupportedSupport(DomainError):
    pass


class UnsupportedRing(DomainError):
    pass


class UnsupportedGenerators(DomainError):
    pass


class ComponentOutOfRange(DomainError):
    pass


class MalformedComplex(DomainError):
    pass


class MalformedCertificate(DomainError):
    pass


class VerificationFailed(DomainError):
    pass


class CapacityExceeded(DomainError):
    """Input beyond the documented desk-scale limits (e.g. polynomial degree cap)."""


class UnknownCommand(DomainError):
    pass
