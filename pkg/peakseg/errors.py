# -*- coding: utf-8 -*-
"""Exceptions raised by peakseg."""


class PeakSegError(Exception):

    """Base class for all peakseg errors."""

    pass


class ShapeError(PeakSegError, ValueError):

    """Raised when array shapes, coordinates or window sizes don't agree."""

    pass


class EmptyPeakSetError(ShapeError):

    """Raised when a class has no peaks to aggregate."""

    pass


class DivergenceError(PeakSegError):

    """Raised when training produces a non-finite loss."""

    pass


class PackingError(PeakSegError, ValueError):

    """Raised when a synthetic image can't hold the requested blobs."""

    pass


class ConfigError(PeakSegError, ValueError):

    """Raised for invalid configuration values."""

    pass


class UsageError(PeakSegError):

    """Raised when the command line asks for something impossible."""

    pass


class FormatError(PeakSegError):

    """Raised when a file on disk can't be decoded.

    Every subclass carries a distinct integer ``code``.

    """

    code = 1


class VersionError(FormatError):
    code = 10


class TruncatedError(FormatError):
    code = 11


class ChecksumError(FormatError):
    code = 12


class ConsistencyError(FormatError):
    code = 13


class RecordError(FormatError):

    """Raised for a bad record in a JSON-lines file."""

    code = 14

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = 'line {}: {}'.format(lineno, message)
        super(RecordError, self).__init__(message)
        self.lineno = lineno
