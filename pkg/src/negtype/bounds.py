"""The lower bound zeta(n, D) on maximal negative type and spaces attaining it."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidRatio, RatioNeedsSemiMetric, TooFewPoints
from .metric_core import Mode, SemiMetricSpace, build_space, scaled_diameter
from .negative_type import UNBOUNDED, Bound
from .simplex_gap import zero_gap


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: Bound
    closed_hi: bool

    def __contains__(self, p) -> bool:
        if p < self.lo:
            return False
        if self.hi is UNBOUNDED:
            return True
        return p <= self.hi if self.closed_hi else p < self.hi

    def __str__(self):
        hi = "inf" if self.hi is UNBOUNDED else f"{self.hi:.12g}"
        return f"[{self.lo:g}, {hi}{']' if self.closed_hi and self.hi is not UNBOUNDED else ')'}"


@dataclass(frozen=True)
class ZetaReport:
    n: int
    diameter_ratio: float
    gamma0: float
    zeta: Bound
    type_interval: Interval  # ordinary negative type guaranteed here
    strict_interval: Interval  # strict negative type guaranteed here
    lower_bound_only: bool  # metric space with D > 2: optimality of zeta not established


def zeta(n: int, diameter_ratio: float) -> Bound:
    """``ln(1 / (1 - G)) / ln(D)`` with ``G`` the zero-exponent gap of ``n`` points.

    Returns ``UNBOUNDED`` when ``D == 1`` (a multiple of the discrete metric).
    """
    if n < 3:
        raise TooFewPoints("zeta is defined for n >= 3")
    if not diameter_ratio >= 1:
        raise InvalidRatio(f"scaled diameter must be >= 1, got {diameter_ratio}")
    if diameter_ratio == 1:
        return UNBOUNDED
    return -math.log1p(-zero_gap(n)) / math.log(diameter_ratio)


def strictness_report(space: SemiMetricSpace) -> ZetaReport:
    if space.n < 3:
        raise TooFewPoints("strictness_report needs n >= 3")
    ratio = scaled_diameter(space)
    z = zeta(space.n, ratio)
    return ZetaReport(
        n=space.n,
        diameter_ratio=ratio,
        gamma0=zero_gap(space.n),
        zeta=z,
        type_interval=Interval(0.0, z, closed_hi=True),
        strict_interval=Interval(0.0, z, closed_hi=False),
        lower_bound_only=space.mode is Mode.METRIC and ratio > 2,
    )


def construct_extremal(n: int, diameter_ratio: float, mode: Mode | str = Mode.METRIC) -> SemiMetricSpace:
    """Complete bipartite space whose maximal negative type equals ``zeta(n, D)``.

    Sides of sizes ``n // 2`` and ``ceil(n / 2)``; cross distances 1, same-side
    distances ``D``.  Metric mode is limited to ``D <= 2`` by the triangle
    inequality.
    """
    mode = Mode.parse(mode)
    if n < 3:
        raise TooFewPoints("construct_extremal needs n >= 3")
    if not diameter_ratio > 1:
        raise InvalidRatio(f"scaled diameter must be > 1, got {diameter_ratio}")
    if mode is Mode.METRIC and diameter_ratio > 2:
        raise RatioNeedsSemiMetric(
            f"scaled diameter {diameter_ratio} > 2 breaks the triangle inequality; use semimetric mode"
        )
    q, t = n // 2, n - n // 2
    side = np.array([0] * q + [1] * t)
    d = np.where(side[:, None] == side[None, :], float(diameter_ratio), 1.0)
    np.fill_diagonal(d, 0.0)
    labels = [f"a{j + 1}" for j in range(q)] + [f"b{i + 1}" for i in range(t)]
    return build_space(d, mode, labels)
