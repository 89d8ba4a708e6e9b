import math

import numpy as np
import pytest

from negtype import (
    UNBOUNDED,
    LoadVector,
    Mode,
    Simplex,
    build_space,
    check_negative_type,
    check_strict_negative_type,
    construct_extremal,
    gap_value,
    max_negative_type,
    qform,
    rescale_to_unit_min,
    scaled_diameter,
    strictness_report,
    zero_gap,
    zeta,
)
from negtype.errors import InvalidRatio, RatioNeedsSemiMetric, TooFewPoints

from conftest import BIPARTITE4, random_metric


@pytest.mark.parametrize(
    "n, ratio, expected",
    [(4, 2, 1.0), (3, 2, 2.0), (5, 2, math.log2(12 / 7)), (6, 1.5, 1.0), (4, 3, math.log(2) / math.log(3))],
)
def test_zeta_examples(n, ratio, expected):
    assert zeta(n, ratio) == pytest.approx(expected, rel=1e-14)


def test_zeta_unbounded_and_errors():
    assert zeta(4, 1) is UNBOUNDED
    with pytest.raises(TooFewPoints):
        zeta(2, 2)
    with pytest.raises(InvalidRatio):
        zeta(4, 0.5)


def test_zeta_grows_without_bound_near_one():
    values = [zeta(5, 1 + 10.0**-k) for k in range(1, 8)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[-1] > 1e6


def test_report_bipartite():
    r = strictness_report(build_space(BIPARTITE4))
    assert r.zeta == pytest.approx(1.0) and r.gamma0 == 0.5
    assert 1.0 in r.type_interval and 1.0 not in r.strict_interval
    assert 0.999 in r.strict_interval and 1.001 not in r.type_interval
    assert not r.lower_bound_only


def test_report_six_points():
    d = np.full((6, 6), 1.0)
    d[0, 1] = d[1, 0] = 1.5
    np.fill_diagonal(d, 0)
    r = strictness_report(build_space(d))
    assert r.gamma0 == pytest.approx(1 / 3) and r.zeta == pytest.approx(1.0, rel=1e-14)


def test_report_collinear_and_discrete():
    assert strictness_report(build_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]])).zeta == pytest.approx(2.0)
    r = strictness_report(build_space(np.ones((4, 4)) - np.eye(4)))
    assert r.zeta is UNBOUNDED and 1e9 in r.strict_interval
    assert str(r.strict_interval) == "[0, inf)"


def test_report_flags_metric_regime_above_two():
    line = build_space([[0, 1, 3], [1, 0, 2], [3, 2, 0]])
    assert strictness_report(line).lower_bound_only
    semi = build_space([[0, 1, 3], [1, 0, 1], [3, 1, 0]], Mode.SEMIMETRIC)
    assert not strictness_report(semi).lower_bound_only
    with pytest.raises(TooFewPoints):
        strictness_report(build_space([[0, 1], [1, 0]]))


def test_construct_layout():
    s = construct_extremal(5, 2)
    assert s.labels == ("a1", "a2", "b1", "b2", "b3")
    assert s.mode is Mode.METRIC and scaled_diameter(s) == 2.0
    assert s.d[0, 1] == 2 and s.d[0, 2] == 1 and s.d[2, 4] == 2


def test_construct_errors():
    with pytest.raises(RatioNeedsSemiMetric):
        construct_extremal(4, 3)
    with pytest.raises(InvalidRatio):
        construct_extremal(4, 1)
    with pytest.raises(TooFewPoints):
        construct_extremal(2, 1.5)


@pytest.mark.parametrize(
    "n, ratio, mode, expected",
    [
        (4, 2, "metric", 1.0),
        (5, 2, "metric", math.log2(12 / 7)),
        (3, 2, "metric", 2.0),
        (4, 3, "semimetric", math.log(2) / math.log(3)),
    ],
)
def test_construct_maximal_type_examples(n, ratio, mode, expected):
    assert max_negative_type(construct_extremal(n, ratio, mode)).p_max == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("n", range(3, 9))
@pytest.mark.parametrize("ratio, mode", [(1.25, "metric"), (1.5, "metric"), (2, "metric"), (3, "semimetric"), (5, "semimetric")])
def test_sharpness(n, ratio, mode):
    res = max_negative_type(construct_extremal(n, ratio, mode))
    assert abs(res.p_max - zeta(n, ratio)) <= 1e-4


@pytest.mark.parametrize("n", range(3, 9))
@pytest.mark.parametrize("ratio", [1.25, 2.0, 4.0])
def test_boundary_not_strict(n, ratio):
    s = construct_extremal(n, ratio, "semimetric")
    z = zeta(n, ratio)
    assert check_negative_type(s, z).holds
    v = check_strict_negative_type(s, z)
    assert not v.holds and v.certificate.kind == "null"
    # The uniform extremal simplex is itself a null direction.
    q, t = n // 2, n - n // 2
    eta = np.r_[np.full(q, 1 / q), np.full(t, -1 / t)]
    assert abs(qform(s, z, eta)) < 1e-12
    for p in np.linspace(0, z, 7)[:-1]:
        assert check_strict_negative_type(s, p).holds


def test_lower_bound_soundness():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        n = int(rng.integers(3, 8))
        space = random_metric(rng, n, hi=float(rng.uniform(1.05, 4.0)))
        z = zeta(n, scaled_diameter(space))
        assert max_negative_type(space).p_max >= z - 1e-6
        assert check_negative_type(space, z).holds
        for p in rng.uniform(0, z, 5):
            assert check_strict_negative_type(space, p).holds


@pytest.mark.parametrize("seed", range(10))
def test_load_sums_against_diameter(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 8))
    space = rescale_to_unit_min(random_metric(rng, n, hi=float(rng.uniform(1.1, 4.0))))
    big_d = scaled_diameter(space)
    gamma0 = zero_gap(n)
    for _ in range(20):
        k = int(rng.integers(2, n + 1))
        verts = rng.permutation(n)[:k]
        q = int(rng.integers(1, k))
        simplex = Simplex(tuple(verts[:q]), tuple(verts[q:]))
        loads = LoadVector.normalize(rng.uniform(0.01, 1, q), rng.uniform(0.01, 1, k - q))
        base = gap_value(space, simplex, loads, 0)
        for p in (0.3, 1.0, 2.5):
            g = gap_value(space, simplex, loads, p)
            assert base.R <= g.R + 1e-12
            assert g.L - base.L <= (1 - gamma0) * (big_d**p - 1) + 1e-9
