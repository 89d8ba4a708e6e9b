"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary of any run.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from negtype import (
    LoadVector,
    Simplex,
    build_space,
    check_negative_type,
    check_strict_negative_type,
    construct_extremal,
    gap_value,
    max_negative_type,
    min_gap_over_loads,
    negative_type_gap,
    qform,
    scaled_diameter,
    tree_metric,
    tree_one_gap,
    zeta,
)

from conftest import ACCEPTANCE_LINES, BIPARTITE4, random_metric, random_semimetric, random_tree

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(number, title, limit=None):
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None and elapsed >= limit:
            detail = f"runtime {elapsed:.2f}s exceeds {limit}s"
            raise AssertionError(detail)
        status, detail = "PASS", f"{elapsed:.2f}s"
    except AssertionError as exc:
        detail = detail or str(exc).splitlines()[0][:120]
        raise
    finally:
        line = f"[{status}] criterion {number}: {title} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_c1_uniform_minimiser_at_zero():
    rng = np.random.default_rng(1)
    with criterion(1, "p=0 simplex minimum 1/2(1/q+1/t) at uniform loads", limit=10):
        for q in range(1, 5):
            for t in range(q, 9 - q):
                simplex = Simplex(tuple(range(q)), tuple(range(q, q + t)))
                for _ in range(5):
                    space = random_semimetric(rng, q + t)
                    res = min_gap_over_loads(space, simplex, 0, method="projected_gradient")
                    assert abs(res.gamma_star - 0.5 * (1 / q + 1 / t)) <= 1e-6, (q, t)
                    assert np.abs(res.witness_loads.m - 1 / q).max() <= 1e-4, (q, t)
                    assert np.abs(res.witness_loads.w - 1 / t).max() <= 1e-4, (q, t)


def test_c2_zero_gap_closed_form():
    rng = np.random.default_rng(2)
    with criterion(2, "Gamma^0 = 1/2(1/floor(n/2)+1/ceil(n/2)) for n=2..8", limit=60):
        for n in range(2, 9):
            expected = 0.5 * (1 / (n // 2) + 1 / (n - n // 2))
            for k in range(10):
                space = random_metric(rng, n, hi=3.0) if k % 2 else random_semimetric(rng, n)
                assert abs(negative_type_gap(space, 0).gamma_star - expected) <= 1e-9, n


def test_c3_lower_bound_soundness():
    rng = np.random.default_rng(3)
    with criterion(3, "type at zeta and strict type below zeta on 50 metrics", limit=30):
        for _ in range(50):
            n = int(rng.integers(3, 8))
            space = random_metric(rng, n, hi=float(rng.uniform(1.0, 4.0)))
            z = zeta(n, scaled_diameter(space))
            assert check_negative_type(space, z).holds
            for frac in (0.2, 0.5, 0.9, 0.99):
                assert check_strict_negative_type(space, frac * z).holds


def test_c4_sharpness_metric():
    with criterion(4, "max type of extremal metric spaces equals zeta", limit=30):
        for n in range(3, 9):
            for ratio in (1.25, 1.5, 2.0):
                p_max = max_negative_type(construct_extremal(n, ratio, "metric")).p_max
                assert abs(p_max - zeta(n, ratio)) <= 1e-4, (n, ratio)
        assert zeta(3, 2) == pytest.approx(2.0, abs=1e-12)
        assert zeta(4, 2) == pytest.approx(1.0, abs=1e-12)
        assert zeta(5, 2) == pytest.approx(math.log2(12 / 7), abs=1e-12)


def test_c5_sharpness_semimetric():
    with criterion(5, "max type of extremal semi-metric spaces equals zeta"):
        for n in range(3, 9):
            for ratio in (3.0, 5.0):
                p_max = max_negative_type(construct_extremal(n, ratio, "semimetric")).p_max
                assert abs(p_max - zeta(n, ratio)) <= 1e-4, (n, ratio)
        p_max = max_negative_type(construct_extremal(4, 3, "semimetric")).p_max
        assert abs(p_max - math.log(2) / math.log(3)) <= 1e-4


def test_c6_tree_gap_formula():
    rng = np.random.default_rng(6)
    with criterion(6, "tree 1-gap formula vs enumeration on 20 trees", limit=120):
        for _ in range(20):
            tree = random_tree(rng, int(rng.integers(3, 9)), 0.5, 3.0)
            space = tree_metric(tree)
            assert abs(tree_one_gap(tree) - negative_type_gap(space, 1).gamma_star) <= 1e-4
            assert check_strict_negative_type(space, 1).holds


def test_c7_gap_form_identity():
    rng = np.random.default_rng(7)
    with criterion(7, "qform of signed loads equals -2 gamma on 200 simplices"):
        for _ in range(200):
            n = int(rng.integers(2, 9))
            space = random_semimetric(rng, n)
            k = int(rng.integers(2, n + 1))
            verts = rng.permutation(n)[:k]
            q = int(rng.integers(1, k))
            simplex = Simplex(tuple(verts[:q]), tuple(verts[q:]))
            loads = LoadVector.normalize(rng.random(q) + 1e-3, rng.random(k - q) + 1e-3)
            eta = np.zeros(n)
            eta[list(simplex.a_side)] = loads.m
            eta[list(simplex.b_side)] = -loads.w
            for p in (0, 0.5, 1, 2):
                gamma = gap_value(space, simplex, loads, p).gamma
                assert abs(qform(space, p, eta) + 2 * gamma) <= 1e-10


def test_c8_gap_form_inequality():
    rng = np.random.default_rng(8)
    with criterion(8, "Q <= -(Gamma/2)(sum|eta|)^2 for 200 zero-sum vectors"):
        for _ in range(10):
            space = random_metric(rng, int(rng.integers(2, 7)), hi=float(rng.uniform(1.0, 3.0)))
            for p in (0, 1):
                gamma = negative_type_gap(space, p).gamma_star
                for _ in range(200):
                    eta = rng.standard_normal(space.n)
                    eta -= eta.mean()
                    assert qform(space, p, eta) <= -(gamma / 2) * np.abs(eta).sum() ** 2 + 1e-8


def test_c9_interval_and_boundary():
    with criterion(9, "type at zeta, strictness fails at zeta and holds below"):
        for n in range(3, 9):
            for ratio, mode in ((1.5, "metric"), (2.0, "metric"), (3.0, "semimetric")):
                space = construct_extremal(n, ratio, mode)
                z = zeta(n, ratio)
                assert check_negative_type(space, z).holds
                strict = check_strict_negative_type(space, z)
                assert not strict.holds and strict.certificate.kind == "null"
                for p in np.linspace(0, z, 12)[:-1]:
                    assert check_strict_negative_type(space, p).holds
        bip = build_space(BIPARTITE4)
        assert abs(max_negative_type(bip).p_max - 1.0) <= 1e-6
        eta = np.array([1.0, 1.0, -1.0, -1.0])
        assert qform(bip, 1.0, eta) == 0.0
        assert check_negative_type(bip, 1.0).holds
        cert = check_strict_negative_type(bip, 1.0).certificate
        assert cert.kind == "null" and abs(abs(cert.eta @ eta) / np.linalg.norm(eta) - 1) <= 1e-9
