"""Exception hierarchy shared by every sfec module."""


class FecError(Exception):
    """Base class for all errors raised by sfec."""


class NotPrimitive(FecError):
    """The field polynomial does not generate all 2^m - 1 nonzero elements."""


class DivideByZero(FecError, ZeroDivisionError):
    """Division by, inversion of, or logarithm of the zero element."""


class BadLength(FecError, ValueError):
    """An input sequence has the wrong number of symbols, bits or samples."""


class DegenerateInput(FecError):
    """A solver was handed input it cannot work on (e.g. all-zero syndromes)."""


class SingularSystem(FecError):
    """A linear system over the field has no unique solution."""


class TooLarge(FecError):
    """A requested table would exceed the supported size."""


class ConfigError(FecError):
    """Missing or inconsistent configuration."""


class FramingError(FecError):
    """A container file is truncated or carries a bad header."""


class BadSymbol(FecError, ValueError):
    """A symbol value lies outside the field."""


class DecodeFailure(FecError):
    """A decoding step found the word uncorrectable."""
