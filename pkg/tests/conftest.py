import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from negtype import Mode, WeightedTree, build_space


BIPARTITE4 = [
    [0, 2, 1, 1],
    [2, 0, 1, 1],
    [1, 1, 0, 2],
    [1, 1, 2, 0],
]


@pytest.fixture
def bipartite4():
    """Cross distances 1, same-side distances 2; sides {0, 1} and {2, 3}."""
    return build_space(BIPARTITE4)


def shortest_path_closure(w):
    d = np.array(w, dtype=float)
    for k in range(len(d)):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def random_metric(rng, n, hi=2.0):
    """Random metric with all distances in [1, hi] (path closure of random weights)."""
    w = rng.uniform(1.0, hi, (n, n))
    w = np.triu(w, 1)
    w = w + w.T
    return build_space(shortest_path_closure(w))


def random_semimetric(rng, n, lo=0.1, hi=10.0):
    w = rng.uniform(lo, hi, (n, n))
    w = np.triu(w, 1)
    return build_space(w + w.T, Mode.SEMIMETRIC)


def random_tree(rng, n, lo=0.5, hi=3.0):
    edges = [(i, int(rng.integers(0, i)), float(rng.uniform(lo, hi))) for i in range(1, n)]
    return WeightedTree(n, edges)


def brute_qform(d, p, eta):
    n = len(d)
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += d[i][j] ** p * eta[i] * eta[j]
    return total


def brute_gap(d, a_side, b_side, m, w, p):
    """(L, R) by explicit pair loops."""
    L = 0.0
    for (j1, a1), (j2, a2) in itertools.combinations(enumerate(a_side), 2):
        L += m[j1] * m[j2] * d[a1][a2] ** p
    for (i1, b1), (i2, b2) in itertools.combinations(enumerate(b_side), 2):
        L += w[i1] * w[i2] * d[b1][b2] ** p
    R = sum(m[j] * w[i] * d[a][b] ** p for j, a in enumerate(a_side) for i, b in enumerate(b_side))
    return L, R


@st.composite
def spaces(draw, min_n=2, max_n=6, mode=Mode.SEMIMETRIC):
    """Hypothesis strategy for small spaces with distances in [0.5, 4]."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    if mode is Mode.METRIC:
        return random_metric(rng, n, hi=draw(st.floats(1.01, 4.0)))
    return random_semimetric(rng, n, lo=0.5, hi=4.0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
