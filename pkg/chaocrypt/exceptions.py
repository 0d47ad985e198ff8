"""Error taxonomy shared by every chaocrypt module."""

__all__ = [
    "ChaocryptError",
    "DomainError",
    "KeyRangeError",
    "DivergenceError",
    "FormatError",
    "PPMHeaderError",
    "MaxvalError",
    "TruncatedDataError",
    "EnvelopeMagicError",
    "EnvelopeVersionError",
    "KeyFieldMissingError",
    "KeyParseError",
]


class ChaocryptError(Exception):
    """Base class of all errors raised by chaocrypt."""


class DomainError(ChaocryptError, ValueError):
    """A value lies outside the domain an operation is defined on."""


class KeyRangeError(DomainError):
    """A key parameter lies outside its permitted range."""


class DivergenceError(ChaocryptError, ArithmeticError):
    """A chaotic orbit produced a non-finite value."""


class FormatError(ChaocryptError, ValueError):
    """A file does not follow its expected format."""


class PPMHeaderError(FormatError):
    """A portable pixmap header is missing or malformed."""


class MaxvalError(FormatError):
    """A portable pixmap declares a maxval other than 255."""


class TruncatedDataError(FormatError):
    """A payload is shorter (or longer) than its header declares."""


class EnvelopeMagicError(FormatError):
    """A cipher envelope does not start with the expected magic bytes."""


class EnvelopeVersionError(FormatError):
    """A cipher envelope declares an unsupported layout version."""


class KeyFieldMissingError(FormatError):
    """A key file lacks one of the required parameters."""


class KeyParseError(FormatError):
    """A key file line or value cannot be parsed."""
