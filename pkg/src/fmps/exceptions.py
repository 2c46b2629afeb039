"""Exception hierarchy shared by every fmps module."""


class FmpsError(Exception):
    """Base class for all errors raised by fmps."""


class ZeroFunction(FmpsError, ValueError):
    """All grid samples are zero, so the state cannot be normalized."""


class NonFinite(FmpsError, ValueError):
    """A sample, coefficient or factorization produced NaN or infinity."""


class DimensionMismatch(FmpsError, ValueError):
    pass


class InvalidTolerance(FmpsError, ValueError):
    pass


class OutOfRange(FmpsError, ValueError):
    pass


class DegreeCapExceeded(FmpsError, ValueError):
    pass


class CapExceeded(FmpsError, ValueError):
    """Dense work was requested above the configured qubit cap."""


class InvalidCut(FmpsError, ValueError):
    pass


class NotNormalized(FmpsError, ValueError):
    pass


class SchemaVersionMismatch(FmpsError):
    pass


class MalformedFile(FmpsError):
    pass


class IoFailure(FmpsError, OSError):
    pass


class MissingData(FmpsError):
    pass
