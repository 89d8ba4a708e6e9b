"""Finite semi-metric spaces: construction, validation and simple transforms."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AsymmetricMatrix,
    InvalidMode,
    LabelMismatch,
    NegativeDistance,
    NegativeExponent,
    NonFiniteDistance,
    NonzeroDiagonal,
    NotSquare,
    TooFewPoints,
    TriangleViolation,
    ZeroOffDiagonal,
)

TRIANGLE_SLACK = 1e-12


class Mode(enum.Enum):
    METRIC = "metric"
    SEMIMETRIC = "semimetric"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("-", "").replace("_", ""))
        except ValueError:
            raise InvalidMode(f"unknown mode {value!r}; expected 'metric' or 'semimetric'") from None


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SemiMetricSpace:
    """A validated finite (semi-)metric space.

    Build instances with :func:`build_space`; the constructor itself does not
    validate.  ``d`` is a read-only float array.
    """

    d: np.ndarray
    mode: Mode = Mode.METRIC
    labels: Optional[tuple] = None

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def label(self, i: int) -> str:
        return str(self.labels[i]) if self.labels is not None else str(i)

    def scaled(self, c: float) -> "SemiMetricSpace":
        """Return the space with every distance multiplied by ``c > 0``."""
        return build_space(self.d * c, self.mode, self.labels)

    def __eq__(self, other):
        if not isinstance(other, SemiMetricSpace):
            return NotImplemented
        return (
            self.mode == other.mode
            and self.labels == other.labels
            and np.array_equal(self.d, other.d)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class PowerMatrix:
    p: float
    a: np.ndarray = field(repr=False)


def find_triangle_violation(d: np.ndarray, slack: float = TRIANGLE_SLACK):
    """Return the first triple ``(i, j, k)`` with ``d[i,k] > d[i,j] + d[j,k]``.

    Comparison allows a relative slack; returns None when there is no violation.
    """
    via = d[:, :, None] + d[None, :, :]  # via[i, j, k] = d[i,j] + d[j,k]
    bad = d[:, None, :] > via * (1.0 + slack)
    if not bad.any():
        return None
    i, j, k = np.argwhere(bad)[0]
    return int(i), int(j), int(k)


def build_space(
    matrix: Sequence[Sequence[float]] | np.ndarray,
    mode: Mode | str = Mode.METRIC,
    labels: Optional[Sequence[str]] = None,
) -> SemiMetricSpace:
    """Validate a distance matrix and wrap it as a :class:`SemiMetricSpace`.

    Raises one of the ``negtype.errors`` classes describing the first defect
    found: shape, non-finite or negative entries, diagonal, symmetry,
    duplicate points, and (metric mode only) the triangle inequality.
    """
    mode = Mode.parse(mode)
    try:
        d = np.array(matrix, dtype=float)
    except (TypeError, ValueError) as exc:
        raise NotSquare(f"distance matrix is not a rectangular numeric array: {exc}") from None
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
        raise NotSquare(f"distance matrix must be square and nonempty, got shape {d.shape}")
    n = d.shape[0]
    if not np.all(np.isfinite(d)):
        raise NonFiniteDistance("distance matrix contains NaN or infinite entries")
    if (d < 0).any():
        i, j = np.argwhere(d < 0)[0]
        raise NegativeDistance(f"d[{i}][{j}] = {float(d[i, j])!r} is negative")
    diag = np.diag(d)
    if (diag != 0).any():
        i = int(np.flatnonzero(diag)[0])
        raise NonzeroDiagonal(f"d[{i}][{i}] = {float(diag[i])!r}, expected 0")
    if not np.array_equal(d, d.T):
        i, j = np.argwhere(d != d.T)[0]
        raise AsymmetricMatrix(f"d[{i}][{j}] = {float(d[i, j])!r} but d[{j}][{i}] = {float(d[j, i])!r}")
    off = ~np.eye(n, dtype=bool)
    if (d[off] == 0).any():
        i, j = np.argwhere((d == 0) & off)[0]
        raise ZeroOffDiagonal(f"points {i} and {j} coincide (distance 0)")
    if mode is Mode.METRIC:
        triple = find_triangle_violation(d)
        if triple is not None:
            raise TriangleViolation(triple)
    if labels is not None:
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise LabelMismatch(f"{len(labels)} labels for {n} points")
    return SemiMetricSpace(_frozen(d), mode, labels)


def _off_diagonal(space: SemiMetricSpace) -> np.ndarray:
    if space.n < 2:
        raise TooFewPoints("need at least 2 points")
    return space.d[~np.eye(space.n, dtype=bool)]


def scaled_diameter(space: SemiMetricSpace) -> float:
    """Diameter divided by the smallest distance between distinct points."""
    off = _off_diagonal(space)
    return float(off.max() / off.min())


def rescale_to_unit_min(space: SemiMetricSpace) -> SemiMetricSpace:
    off = _off_diagonal(space)
    lo = off.min()
    if lo == 1.0:
        return space
    return SemiMetricSpace(_frozen(space.d / lo), space.mode, space.labels)


def power_matrix(space: SemiMetricSpace, p: float) -> PowerMatrix:
    """Entrywise ``d**p`` off the diagonal, zeros on it (so ``p = 0`` gives J - I)."""
    if p < 0:
        raise NegativeExponent(f"exponent must be >= 0, got {p}")
    n = space.n
    if p == 0:
        a = np.ones((n, n))
    else:
        a = space.d**p
    np.fill_diagonal(a, 0.0)
    return PowerMatrix(float(p), _frozen(a))
