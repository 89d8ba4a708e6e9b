"""Brute-force checks that share no code path with the main solvers.

These deliberately avoid the power-matrix and eigen machinery of the library:
distances are raised to ``p`` inline and sums are formed directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BadResolution, DimensionMismatch, DuplicatePoints, TooLargeSimplex
from .metric_core import Mode, SemiMetricSpace, build_space


@dataclass(frozen=True)
class ProbeResult:
    worst_value: float
    worst_vector: np.ndarray
    trials: int
    seed: int


def _powered(d: np.ndarray, p: float) -> np.ndarray:
    off = ~np.eye(d.shape[0], dtype=bool)
    out = np.zeros_like(d)
    out[off] = d[off] ** p
    return out


def _compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        return np.array([[total]])
    rows = []
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        cuts = (-1,) + bars + (total + parts - 1,)
        rows.append([cuts[i + 1] - cuts[i] - 1 for i in range(parts)])
    return np.array(rows)


def grid_min_gap(space: SemiMetricSpace, simplex, p: float, resolution: float) -> float:
    """Minimum of the simplex gap over loads on a lattice of step ``resolution``.

    Lattice points may have zero coordinates, so the value is an upper bound
    on the minimum over the closed load set.
    """
    q, t = len(simplex.a_side), len(simplex.b_side)
    if q + t > 6:
        raise TooLargeSimplex(f"grid oracle supports q + t <= 6, got {q + t}")
    if not 0 < resolution <= 0.25:
        raise BadResolution(f"resolution must lie in (0, 0.25], got {resolution}")
    steps = round(1.0 / resolution)
    if abs(steps * resolution - 1.0) > 1e-9:
        raise BadResolution(f"1/resolution must be an integer, got {1.0 / resolution}")
    pw = _powered(space.d, p)
    ia, ib = list(simplex.a_side), list(simplex.b_side)
    paa, pab, pbb = pw[np.ix_(ia, ia)], pw[np.ix_(ia, ib)], pw[np.ix_(ib, ib)]
    m = _compositions(steps, q) / steps
    w = _compositions(steps, t) / steps
    same_a = 0.5 * np.einsum("ki,ij,kj->k", m, paa, m)
    same_b = 0.5 * np.einsum("ki,ij,kj->k", w, pbb, w)
    cross = m @ pab @ w.T
    return float((cross - same_a[:, None] - same_b[None, :]).min())


def random_qform_probe(space: SemiMetricSpace, p: float, trials: int, seed: int = 0) -> ProbeResult:
    """Largest form value over random zero-sum vectors of unit 1-norm."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    eta = rng.standard_normal((trials, space.n))
    eta -= eta.mean(axis=1, keepdims=True)
    eta /= np.abs(eta).sum(axis=1, keepdims=True)
    pw = _powered(space.d, p)
    values = np.einsum("ki,ij,kj->k", eta, pw, eta)
    k = int(np.argmax(values))
    return ProbeResult(float(values[k]), eta[k].copy(), trials, seed)


def euclidean_space(points) -> SemiMetricSpace:
    """Metric space of pairwise Euclidean distances between ``points``."""
    try:
        x = np.array(points, dtype=float)
    except ValueError:
        raise DimensionMismatch("points have inconsistent dimensions") from None
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise DimensionMismatch("points have inconsistent dimensions")
    d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=-1))
    off = ~np.eye(len(x), dtype=bool)
    if (d[off] == 0).any():
        i, j = np.argwhere((d == 0) & off)[0]
        raise DuplicatePoints(f"points {i} and {j} coincide")
    return build_space(d, Mode.METRIC)
