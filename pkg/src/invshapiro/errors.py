"""Exception types raised across the package."""


class InvShapiroError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPermutation(InvShapiroError, ValueError):
    pass


class CapExceeded(InvShapiroError):
    """Group closure grew past the requested order cap."""


class DimensionMismatch(InvShapiroError, ValueError):
    pass


class DimensionError(InvShapiroError, ValueError):
    """Chain or cochain dimension outside the supported range."""


class EntryNotInH(InvShapiroError, ValueError):
    pass


class CapacityExceeded(InvShapiroError):
    """A linear system or enumeration is larger than the configured capacity."""


class DegreeUnsupported(InvShapiroError, ValueError):
    pass


class BadSubgroupOrder(InvShapiroError, ValueError):
    pass


class NormalizationError(InvShapiroError, ValueError):
    """A cochain is nonzero on a tuple containing the identity."""
