"""Quadratic-form tests for (strict) p-negative type and the maximal exponent.

The form ``eta -> sum_ij d_ij**p eta_i eta_j`` is restricted to the
hyperplane ``sum(eta) = 0`` through an orthonormal basis of that hyperplane,
so the spectrum has exactly ``n - 1`` eigenvalues and no spurious zero from
the all-ones direction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import DimensionMismatch, NegativeExponent, NonpositiveTolerance, TooFewPoints
from .metric_core import SemiMetricSpace, power_matrix

DEFAULT_TOL = 1e-9
BISECTION_TOL = 1e-6
DOUBLING_CAP = 64.0


class Unbounded(enum.Enum):
    """Marker for an exponent bound that is infinite."""

    UNBOUNDED = "unbounded"

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = Unbounded.UNBOUNDED
Bound = Union[float, Unbounded]


@dataclass(frozen=True)
class ProjectedSpectrum:
    eigenvalues: np.ndarray  # ascending, length n - 1
    tolerance: float  # absolute threshold that was applied


@dataclass(frozen=True)
class ViolatingVector:
    """Zero-sum vector that breaks the tested property.

    ``kind`` is ``"positive"`` when ``qform(eta) > tolerance`` (ordinary type
    fails) and ``"null"`` when ``|qform(eta)| <= tolerance`` with ``eta != 0``
    (strictness fails).
    """

    eta: np.ndarray
    value: float
    tolerance: float
    kind: str


@dataclass(frozen=True)
class Verdict:
    holds: bool
    certificate: Union[ProjectedSpectrum, ViolatingVector]

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class MaxTypeResult:
    p_max: Bound
    bracket: tuple  # (lo, hi); hi is DOUBLING_CAP when unbounded
    tolerance: float

    @property
    def bounded(self) -> bool:
        return self.p_max is not UNBOUNDED


def qform(space: SemiMetricSpace, p: float, eta) -> float:
    """Full double sum ``sum_{i,j} d(x_i, x_j)**p * eta_i * eta_j``.

    No zero-sum constraint is imposed on ``eta``.
    """
    eta = np.asarray(eta, dtype=float)
    if eta.shape != (space.n,):
        raise DimensionMismatch(f"eta has shape {eta.shape}, expected ({space.n},)")
    a = power_matrix(space, p).a
    return float(eta @ a @ eta)


@lru_cache(maxsize=64)
def _hyperplane_basis(n: int) -> np.ndarray:
    # Orthonormal columns spanning {eta : sum(eta) = 0}.
    q, _ = np.linalg.qr(np.eye(n) - 1.0 / n, mode="reduced")
    v = q[:, : n - 1]
    v.flags.writeable = False
    return v


def hyperplane_spectrum(space: SemiMetricSpace, p: float):
    """Eigen-decomposition of the power matrix restricted to ``sum(eta) = 0``.

    Returns ``(eigenvalues, vectors, scale)`` where ``vectors[:, k]`` is the
    unit zero-sum vector in R^n for ``eigenvalues[k]`` and ``scale`` is the
    largest absolute entry of the power matrix.
    """
    a = power_matrix(space, p).a
    n = space.n
    scale = float(np.abs(a).max()) if n > 1 else 1.0
    if n == 1:
        return np.empty(0), np.empty((1, 0)), scale
    v = _hyperplane_basis(n)
    restricted = v.T @ a @ v
    restricted = 0.5 * (restricted + restricted.T)
    w, u = np.linalg.eigh(restricted)
    vectors = v @ u
    # Remove the tiny residual component along the ones direction.
    vectors -= vectors.mean(axis=0, keepdims=True)
    return w, vectors, scale


def _check_args(p, tol):
    if p < 0:
        raise NegativeExponent(f"exponent must be >= 0, got {p}")
    if not tol > 0:
        raise NonpositiveTolerance(f"tolerance must be > 0, got {tol}")


def check_negative_type(space: SemiMetricSpace, p: float, tol: float = DEFAULT_TOL) -> Verdict:
    """Decide p-negative type; ``tol`` is relative to the largest power-matrix entry."""
    _check_args(p, tol)
    w, vecs, scale = hyperplane_spectrum(space, p)
    threshold = tol * scale
    if w.size == 0 or w[-1] <= threshold:
        return Verdict(True, ProjectedSpectrum(w, threshold))
    eta = vecs[:, -1]
    return Verdict(False, ViolatingVector(eta, qform(space, p, eta), threshold, "positive"))


def check_strict_negative_type(space: SemiMetricSpace, p: float, tol: float = DEFAULT_TOL) -> Verdict:
    """Decide strict p-negative type (negative definite on the zero-sum hyperplane)."""
    _check_args(p, tol)
    w, vecs, scale = hyperplane_spectrum(space, p)
    threshold = tol * scale
    if w.size == 0 or w[-1] < -threshold:
        return Verdict(True, ProjectedSpectrum(w, threshold))
    eta = vecs[:, -1]
    kind = "positive" if w[-1] > threshold else "null"
    return Verdict(False, ViolatingVector(eta, qform(space, p, eta), threshold, kind))


def max_negative_type(
    space: SemiMetricSpace,
    tol: float = BISECTION_TOL,
    eig_tol: float = DEFAULT_TOL,
) -> MaxTypeResult:
    """Locate the largest exponent at which the space has negative type.

    Negative type holds on a closed interval ``[0, p_max]``, so a sign change
    bracket found by doubling from ``p = 1`` can be bisected.  Spaces that
    still pass at ``p = 64`` are reported as unbounded.
    """
    if space.n < 2:
        raise TooFewPoints("need at least 2 points")
    if not tol > 0:
        raise NonpositiveTolerance(f"tolerance must be > 0, got {tol}")

    def holds(p):
        return check_negative_type(space, p, eig_tol).holds

    lo, hi = 0.0, 1.0
    while holds(hi):
        lo = hi
        if hi >= DOUBLING_CAP:
            return MaxTypeResult(UNBOUNDED, (lo, DOUBLING_CAP), tol)
        hi = min(2.0 * hi, DOUBLING_CAP)
    # Invariant: holds(lo) and not holds(hi).
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return MaxTypeResult(0.5 * (lo + hi), (lo, hi), tol)

