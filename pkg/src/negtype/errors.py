"""Exception and warning types.

Class names double as the error names printed by the command-line tool,
so they intentionally omit the usual ``Error`` suffix.
"""


class NegTypeError(ValueError):
    """Base class for every error raised by this package."""


class InvalidMode(NegTypeError):
    pass


class NotSquare(NegTypeError):
    pass


class AsymmetricMatrix(NegTypeError):
    pass


class NonzeroDiagonal(NegTypeError):
    pass


class ZeroOffDiagonal(NegTypeError):
    """Two distinct indices at distance zero (duplicate points)."""


class NegativeDistance(NegTypeError):
    pass


class NonFiniteDistance(NegTypeError):
    pass


class TriangleViolation(NegTypeError):
    def __init__(self, triple, message=None):
        self.triple = tuple(int(v) for v in triple)
        i, j, k = self.triple
        super().__init__(message or f"d[{i}][{k}] > d[{i}][{j}] + d[{j}][{k}]")


class LabelMismatch(NegTypeError):
    pass


class TooFewPoints(NegTypeError):
    pass


class NegativeExponent(NegTypeError):
    pass


class NonpositiveTolerance(NegTypeError):
    pass


class DimensionMismatch(NegTypeError):
    pass


class InvalidSimplex(NegTypeError):
    pass


class UnnormalizedLoads(NegTypeError):
    pass


class TooLarge(NegTypeError):
    pass


class InvalidRatio(NegTypeError):
    pass


class RatioNeedsSemiMetric(NegTypeError):
    pass


class NotATree(NegTypeError):
    pass


class NonpositiveWeight(NegTypeError):
    pass


class TooLargeSimplex(NegTypeError):
    pass


class BadResolution(NegTypeError):
    pass


class DuplicatePoints(NegTypeError):
    pass


class FileError(NegTypeError):
    pass


class ConvergenceFailure(UserWarning):
    """Projected gradient hit its iteration cap without reaching stationarity.

    Emitted as a warning; the affected result carries ``converged=False``
    and still holds the best value found.
    """
