"""
Exception hierarchy. Everything derives from ValueError so callers
that only guard against bad input keep working.
"""


class NpgcError(ValueError):
    pass


class DimensionMismatchError(NpgcError):
    pass


class InvalidSampleError(NpgcError):
    pass


class DegenerateBandwidthError(NpgcError):
    pass


class DegenerateNeighborhoodError(NpgcError):
    """Leave-one-out kernel denominator is zero at observation `index`."""

    def __init__(self, index, message=None):
        self.index = int(index)
        super().__init__(message or f"empty kernel neighborhood at observation {self.index}")


class InvalidConfigError(NpgcError):
    pass


class SingularDesignError(NpgcError):
    pass


class InsufficientDataError(NpgcError):
    pass


class DataFormatError(NpgcError):
    pass
