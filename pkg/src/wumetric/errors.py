"""Exception hierarchy shared by all modules."""


class WuError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(WuError, ValueError):
    pass


class InvariantError(WuError, ValueError):
    """A value breaks a structural invariant (non-PSD form, non-orthonormal basis, ...)."""


class OffCarrierError(InvariantError):
    pass


class NotSpanningError(WuError, ValueError):
    """Points handed to the finite solver do not span their ambient space."""


class ConvergenceError(WuError, RuntimeError):
    pass


class AdmissionError(InvariantError):
    """A black-box function failed the probabilistic seminorm checks."""


class UnsupportedPointError(WuError, ValueError):
    pass
