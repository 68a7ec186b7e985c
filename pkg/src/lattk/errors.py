class LatticeError(ValueError):
    """Base class for every error raised by lattk."""


class DimensionError(LatticeError):
    pass


class DegenerateLatticeError(LatticeError):
    """Raised when an operation needs a nonzero Gram determinant."""


class CapacityError(LatticeError):
    """Raised when an exhaustive search would exceed its documented bound."""


class AdmissibilityError(LatticeError):
    """Raised for B-field parameters violating 2B^2, 2B.h, 2B.s odd."""


class UnknownCheckError(LatticeError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""
