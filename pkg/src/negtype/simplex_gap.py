"""Simplex gaps, their minimisation over load vectors, and the negative type gap.

For a simplex with sides ``A`` (size q) and ``B`` (size t) and loads ``m``,
``w`` the gap is the cross-side weighted sum minus the two same-side sums.
Writing ``x = (m, w)`` it is the quadratic ``x @ H @ x / 2`` with::

    H = [[-P_AA,  P_AB],
         [ P_BA, -P_BB]]

where ``P`` is the power matrix (zero diagonal).  ``H`` is indefinite in
general, so minimising over the product of two probability simplices is a
nonconvex QP.
"""

from __future__ import annotations

import enum
import itertools
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    InvalidSimplex,
    NegativeExponent,
    TooFewPoints,
    TooLarge,
    UnnormalizedLoads,
)
from .metric_core import SemiMetricSpace, power_matrix

NORMALIZATION_TOL = 1e-12
SNAP_TOL = 1e-12
ENUMERATION_CAP = 12
_CHUNK = 4096


class GapMethod(enum.Enum):
    CLOSED_FORM = "closed_form"
    PROJECTED_GRADIENT = "projected_gradient"
    ENUMERATION = "enumeration"


@dataclass(frozen=True)
class Simplex:
    """Two disjoint, nonempty lists of vertex indices."""

    a_side: tuple
    b_side: tuple

    def __post_init__(self):
        a = tuple(int(i) for i in self.a_side)
        b = tuple(int(i) for i in self.b_side)
        object.__setattr__(self, "a_side", a)
        object.__setattr__(self, "b_side", b)
        if not a or not b:
            raise InvalidSimplex("both sides of a simplex must be nonempty")
        if len(set(a + b)) != len(a) + len(b):
            raise InvalidSimplex(f"simplex vertices must be distinct: {a} | {b}")
        if min(a + b) < 0:
            raise InvalidSimplex("vertex indices must be nonnegative")

    @property
    def q(self) -> int:
        return len(self.a_side)

    @property
    def t(self) -> int:
        return len(self.b_side)

    @property
    def vertices(self) -> tuple:
        return self.a_side + self.b_side

    def check(self, n: int) -> None:
        if max(self.vertices) >= n:
            raise InvalidSimplex(f"vertex index {max(self.vertices)} out of range for {n} points")

    def swapped(self) -> "Simplex":
        return Simplex(self.b_side, self.a_side)

    def sort_key(self):
        return (self.a_side, self.b_side)


@dataclass(frozen=True, eq=False)
class LoadVector:
    """Positive weights ``m`` on the a-side and ``w`` on the b-side."""

    m: np.ndarray
    w: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        m = np.array(self.m, dtype=float).ravel()
        w = np.array(self.w, dtype=float).ravel()
        if m.size == 0 or w.size == 0:
            raise InvalidSimplex("load vector needs weights on both sides")
        if not (np.all(m > 0) and np.all(w > 0)):
            raise InvalidSimplex("load weights must be strictly positive")
        if self.normalized and (
            abs(m.sum() - 1.0) > NORMALIZATION_TOL or abs(w.sum() - 1.0) > NORMALIZATION_TOL
        ):
            raise UnnormalizedLoads(f"side sums are {m.sum()!r} and {w.sum()!r}, expected 1")
        m.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "w", w)

    @classmethod
    def normalize(cls, m, w) -> "LoadVector":
        m = np.asarray(m, dtype=float)
        w = np.asarray(w, dtype=float)
        return cls(m / m.sum(), w / w.sum(), normalized=True)

    @classmethod
    def uniform(cls, q: int, t: int) -> "LoadVector":
        return cls(np.full(q, 1.0 / q), np.full(t, 1.0 / t), normalized=True)

    def swapped(self) -> "LoadVector":
        return LoadVector(self.w, self.m, self.normalized)

    def __eq__(self, other):
        if not isinstance(other, LoadVector):
            return NotImplemented
        return (
            self.normalized == other.normalized
            and np.array_equal(self.m, other.m)
            and np.array_equal(self.w, other.w)
        )

    __hash__ = None


@dataclass(frozen=True)
class GapBreakdown:
    L: float
    R: float
    gamma: float
    p: float


@dataclass(frozen=True)
class GapResult:
    gamma_star: float
    witness_simplex: Simplex
    witness_loads: LoadVector
    method: GapMethod
    p: float
    converged: bool = True
    simplices_examined: int = 1


def _check_exponent(p):
    if p < 0:
        raise NegativeExponent(f"exponent must be >= 0, got {p}")


def _blocks(a: np.ndarray, simplex: Simplex):
    ia = np.asarray(simplex.a_side)
    ib = np.asarray(simplex.b_side)
    return a[np.ix_(ia, ia)], a[np.ix_(ia, ib)], a[np.ix_(ib, ib)]


def _gap_matrix(a: np.ndarray, simplex: Simplex) -> np.ndarray:
    paa, pab, pbb = _blocks(a, simplex)
    return np.block([[-paa, pab], [pab.T, -pbb]])


def _breakdown(paa, pab, pbb, m, w):
    L = 0.5 * (m @ paa @ m) + 0.5 * (w @ pbb @ w)
    R = m @ pab @ w
    return float(L), float(R)


def gap_value(space: SemiMetricSpace, simplex: Simplex, loads: LoadVector, p: float) -> GapBreakdown:
    """Evaluate same-side sum ``L``, cross sum ``R`` and the gap ``R - L``.

    ``loads`` must be normalized and match the simplex side sizes.
    """
    _check_exponent(p)
    simplex.check(space.n)
    if not loads.normalized:
        raise UnnormalizedLoads("gap_value requires a normalized load vector")
    if loads.m.size != simplex.q or loads.w.size != simplex.t:
        raise InvalidSimplex(
            f"loads have sizes ({loads.m.size}, {loads.w.size}) for a ({simplex.q}, {simplex.t})-simplex"
        )
    L, R = _breakdown(*_blocks(power_matrix(space, p).a, simplex), loads.m, loads.w)
    return GapBreakdown(L, R, R - L, float(p))


def closed_form_zero_gap_simplex(q: int, t: int):
    """Minimum of the gap at ``p = 0`` for any (q, t)-simplex and its minimiser.

    At ``p = 0`` the gap reduces to ``(|m|^2 + |w|^2) / 2`` on the feasible set,
    minimised by uniform loads.
    """
    if q < 1 or t < 1:
        raise InvalidSimplex("q and t must be >= 1")
    return 0.5 * (1.0 / q + 1.0 / t), LoadVector.uniform(q, t)


def zero_gap(n: int) -> float:
    """Negative type gap at ``p = 0`` of any ``n``-point space."""
    if n < 2:
        raise TooFewPoints("zero_gap needs n >= 2")
    return 0.5 * (1.0 / (n // 2) + 1.0 / ((n + 1) // 2))


def is_extreme_simplex(n: int, simplex: Simplex, loads: LoadVector, tol: float = 1e-9) -> bool:
    if not loads.normalized:
        raise UnnormalizedLoads("is_extreme_simplex requires a normalized load vector")
    q, t = simplex.q, simplex.t
    if loads.m.size != q or loads.w.size != t:
        return False
    if {q, t} != {n // 2, (n + 1) // 2} or q + t != n:
        return False
    return bool(np.all(np.abs(loads.m - 1.0 / q) <= tol) and np.all(np.abs(loads.w - 1.0 / t) <= tol))


# -- projected gradient -------------------------------------------------------


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum(x) = 1}``, row-wise for 2-D input."""
    v = np.asarray(v, dtype=float)
    rows = np.atleast_2d(v)
    u = -np.sort(-rows, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    k = np.arange(1, rows.shape[1] + 1)
    # Last index where the sorted entry stays above the running threshold.
    rho = rows.shape[1] - 1 - np.argmax((u - css / k > 0)[:, ::-1], axis=1)
    theta = css[np.arange(rows.shape[0]), rho] / (rho + 1)
    out = np.maximum(rows - theta[:, None], 0.0)
    return out.reshape(v.shape)


def _project(x: np.ndarray, q: int) -> np.ndarray:
    return np.concatenate([project_to_simplex(x[..., :q]), project_to_simplex(x[..., q:])], axis=-1)


def _pg_run(h: np.ndarray, q: int, x: np.ndarray, step: float, max_iter: int, step_tol: float):
    """Projected gradient with Armijo backtracking, one independent run per row of ``x``.

    Returns final points, values and iteration counts (``max_iter`` for runs
    that never met the step tolerance).
    """
    x = np.array(x, dtype=float, ndmin=2)
    f = 0.5 * np.einsum("ri,ij,rj->r", x, h, x)
    iters = np.full(len(x), max_iter)
    active = np.arange(len(x))
    for it in range(max_iter):
        xa, fa = x[active], f[active]
        g = xa @ h
        s = np.full(len(active), step)
        y = _project(xa - s[:, None] * g, q)
        while True:
            dx = y - xa
            fy = 0.5 * np.einsum("ri,ij,rj->r", y, h, y)
            bound = fa + np.einsum("ri,ri->r", g, dx) + (0.5 / s) * np.einsum("ri,ri->r", dx, dx)
            # Sufficient decrease for the projected step.
            bad = (fy > bound + 1e-15 * np.abs(fa)) & (s >= 1e-12)
            if not bad.any():
                break
            s[bad] *= 0.5
            y[bad] = _project(xa[bad] - s[bad, None] * g[bad], q)
        x[active], f[active] = y, fy
        done = np.max(np.abs(dx), axis=1) < step_tol
        iters[active[done]] = it + 1
        active = active[~done]
        if active.size == 0:
            break
    return x, f, iters


def _stationarity(h: np.ndarray, q: int, x: np.ndarray) -> float:
    return float(np.max(np.abs(x - _project(x - h @ x, q))))


def _snap(simplex: Simplex, m: np.ndarray, w: np.ndarray):
    keep_m = m >= SNAP_TOL
    keep_w = w >= SNAP_TOL
    sub = Simplex(
        tuple(np.asarray(simplex.a_side)[keep_m]), tuple(np.asarray(simplex.b_side)[keep_w])
    )
    return sub, LoadVector.normalize(m[keep_m], w[keep_w])


def min_gap_over_loads(
    space: SemiMetricSpace,
    simplex: Simplex,
    p: float,
    *,
    method: str = "auto",
    restarts: int = 20,
    seed: int = 0,
    max_iter: int = 10_000,
    step_tol: float = 1e-10,
    grad_tol: float = 1e-8,
) -> GapResult:
    """Minimise the simplex gap over the closed set of normalized loads.

    ``method`` is ``"auto"`` (closed form at ``p = 0``, projected gradient
    otherwise), ``"closed_form"`` (``p = 0`` only), ``"projected_gradient"`` or
    ``"exact"`` (enumeration of the faces of the feasible set).

    The projected-gradient route starts from the uniform loads and from
    ``restarts`` Dirichlet(1) draws seeded by ``seed``.  A minimiser with
    vanishing weights is reported on the corresponding sub-simplex.  If the
    best run stops at ``max_iter`` without being stationary, a
    :class:`ConvergenceFailure` warning is issued and ``converged`` is False.
    """
    _check_exponent(p)
    simplex.check(space.n)
    q, t = simplex.q, simplex.t
    if method == "auto":
        method = "closed_form" if p == 0 else "projected_gradient"

    if method == "closed_form":
        if p != 0:
            raise ValueError("closed_form is only available at p = 0")
        value, loads = closed_form_zero_gap_simplex(q, t)
        return GapResult(value, simplex, loads, GapMethod.CLOSED_FORM, float(p))

    if method == "exact":
        a = power_matrix(space, p).a
        blocks = _chunked(enumerate_faces(simplex))
        value, key, x, fq = _reduce_blocks(a, blocks, threads=1)
        return GapResult(
            value, Simplex(*key), LoadVector(x[:fq], x[fq:], normalized=True),
            GapMethod.ENUMERATION, float(p), simplices_examined=_block_count(blocks),
        )

    if method != "projected_gradient":
        raise ValueError(f"unknown method {method!r}")

    h = _gap_matrix(power_matrix(space, p).a, simplex)
    lipschitz = float(np.linalg.norm(h, 2))
    step = 1.0 / lipschitz if lipschitz > 0 else 1.0
    rng = np.random.default_rng(seed)
    starts = [np.concatenate([np.full(q, 1.0 / q), np.full(t, 1.0 / t)])]
    for _ in range(restarts):
        starts.append(np.concatenate([rng.dirichlet(np.ones(q)), rng.dirichlet(np.ones(t))]))

    xs, fs, its = _pg_run(h, q, np.array(starts), step, max_iter, step_tol)
    k = int(np.argmin(fs))
    x, f, iters = xs[k], fs[k], its[k]
    converged = iters < max_iter or _stationarity(h, q, x) <= grad_tol
    if not converged:
        warnings.warn(
            f"projected gradient hit {max_iter} iterations on {simplex}; best value {f!r}",
            ConvergenceFailure,
            stacklevel=2,
        )
    witness, loads = _snap(simplex, x[:q], x[q:])
    value = gap_value(space, witness, loads, p).gamma
    return GapResult(value, witness, loads, GapMethod.PROJECTED_GRADIENT, float(p), converged)


# -- enumeration over all simplices -------------------------------------------


def _split_patterns(k: int, q: int) -> np.ndarray:
    """Position orders for splitting a sorted k-set into sides of size q and k - q.

    The smallest position always lands on the a-side, which removes the
    a/b swap duplicate.
    """
    rows = []
    for rest in itertools.combinations(range(1, k), q - 1):
        a = (0,) + rest
        b = tuple(i for i in range(1, k) if i not in rest)
        rows.append(a + b)
    return np.array(rows, dtype=np.intp).reshape(-1, k)


def enumerate_simplices(n: int):
    """Yield ``(q, t, idx)`` blocks covering every simplex on ``n`` points once.

    ``idx`` has shape ``(count, q + t)``; the first ``q`` columns are the
    a-side.  Blocks come in decreasing ``q + t``.
    """
    for k in range(n, 1, -1):
        subsets = np.array(list(itertools.combinations(range(n), k)), dtype=np.intp)
        for q in range(1, k):
            patterns = _split_patterns(k, q)
            idx = subsets[:, patterns].reshape(-1, k)
            yield q, k - q, idx


def count_simplices(n: int) -> int:
    return (3**n - 2 ** (n + 1) + 1) // 2


def _interior_stationary(a: np.ndarray, q: int, t: int, idx: np.ndarray):
    """Interior critical points of the gap for a batch of (q, t)-simplices.

    Solves the Lagrange system ``H x + E mu = 0, E^T x = (1, 1)`` for every
    simplex.  Returns ``(values, loads, ok)`` where ``ok`` marks simplices
    whose system is nonsingular and whose solution has all weights > 0.
    """
    k = q + t
    count = idx.shape[0]
    sign = np.ones((k, k))
    sign[:q, :q] = -1.0
    sign[q:, q:] = -1.0
    h = a[idx[:, :, None], idx[:, None, :]] * sign
    kkt = np.zeros((count, k + 2, k + 2))
    kkt[:, :k, :k] = h
    kkt[:, :q, k] = kkt[:, k, :q] = 1.0
    kkt[:, q:k, k + 1] = kkt[:, k + 1, q:k] = 1.0
    rhs = np.zeros((count, k + 2, 1))
    rhs[:, k:, 0] = 1.0
    sol = np.full((count, k + 2), np.nan)
    try:
        sol[:] = np.linalg.solve(kkt, rhs)[:, :, 0]
    except np.linalg.LinAlgError:
        for i in range(count):
            try:
                sol[i] = np.linalg.solve(kkt[i], rhs[i])[:, 0]
            except np.linalg.LinAlgError:
                pass
    x = sol[:, :k]
    with np.errstate(invalid="ignore"):
        ok = np.all(x > 0, axis=1)
    # Evaluate the gap directly on the (renormalized) loads rather than trusting
    # the multipliers, so every accepted value is attained by a feasible point.
    x = np.where(ok[:, None], x, 1.0)
    x[:, :q] /= x[:, :q].sum(axis=1, keepdims=True)
    x[:, q:] /= x[:, q:].sum(axis=1, keepdims=True)
    values = 0.5 * np.einsum("bi,bij,bj->b", x, h, x)
    return values, x, ok


def enumerate_faces(simplex: Simplex):
    """Yield ``(q, t, idx)`` blocks for every face (sub-simplex) of ``simplex``."""
    a_side, b_side = simplex.a_side, simplex.b_side
    for q in range(len(a_side), 0, -1):
        for t in range(len(b_side), 0, -1):
            rows = [
                sa + sb
                for sa in itertools.combinations(a_side, q)
                for sb in itertools.combinations(b_side, t)
            ]
            yield q, t, np.array(rows, dtype=np.intp)


def _chunked(blocks):
    out = []
    for q, t, idx in blocks:
        for start in range(0, idx.shape[0], _CHUNK):
            out.append((q, t, idx[start : start + _CHUNK]))
    return out


def _block_count(blocks) -> int:
    return sum(b[2].shape[0] for b in blocks)


def _best_in_block(a, block):
    q, t, idx = block
    values, x, ok = _interior_stationary(a, q, t, idx)
    if not ok.any():
        return None
    cand = np.flatnonzero(ok)
    best_val = values[cand].min()
    tied = cand[values[cand] == best_val]
    key, i = min(((tuple(idx[i, :q]), tuple(idx[i, q:])), i) for i in tied)
    return float(best_val), key, x[i], q


def _reduce_blocks(a, blocks, threads):
    """Minimum over blocks; equal values resolve to the smallest ``(a_side, b_side)``."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda b: _best_in_block(a, b), blocks))
    else:
        results = [_best_in_block(a, b) for b in blocks]
    best = None
    for r in results:
        if r is None:
            continue
        if best is None or r[0] < best[0] or (r[0] == best[0] and r[1] < best[1]):
            best = r
    return best


def negative_type_gap(
    space: SemiMetricSpace,
    p: float,
    *,
    max_n: int = ENUMERATION_CAP,
    inner: str = "exact",
    threads: int = 1,
    seed: int = 0,
) -> GapResult:
    """Infimum of the simplex gap over every normalized simplex in the space.

    With ``inner="exact"`` (default) each simplex contributes the critical
    point of the gap in the interior of its load set.  Every point of the
    closed load set lies in the relative interior of exactly one face, and
    those faces are themselves simplices of the space, so the minimum over
    these candidates is the exact infimum.  ``inner="projected_gradient"``
    instead calls :func:`min_gap_over_loads` on each simplex (slow; used as a
    cross-check on small spaces).

    Ties are broken towards the lexicographically smallest simplex, so the
    result does not depend on ``threads``.  A negative value means the space
    does not have p-negative type.
    """
    _check_exponent(p)
    n = space.n
    if n < 2:
        raise TooFewPoints("need at least 2 points")
    if n > max_n:
        raise TooLarge(f"{n} points exceeds the enumeration cap {max_n}; raise max_n to override")
    a = power_matrix(space, p).a

    if inner == "projected_gradient":
        return _gap_by_projected_gradient(space, p, seed)
    if inner != "exact":
        raise ValueError(f"unknown inner method {inner!r}")

    blocks = _chunked(enumerate_simplices(n))
    value, key, x, q = _reduce_blocks(a, blocks, threads)
    return GapResult(
        value, Simplex(*key), LoadVector(x[:q], x[q:], normalized=True),
        GapMethod.ENUMERATION, float(p), simplices_examined=_block_count(blocks),
    )


def _gap_by_projected_gradient(space: SemiMetricSpace, p: float, seed: int) -> GapResult:
    best = None
    converged = True
    examined = 0
    for q, t, idx in enumerate_simplices(space.n):
        for row in idx:
            simplex = Simplex(tuple(row[:q]), tuple(row[q:]))
            res = min_gap_over_loads(space, simplex, p, method="projected_gradient", seed=seed)
            examined += 1
            converged &= res.converged
            key = res.witness_simplex.sort_key()
            if best is None or res.gamma_star < best.gamma_star or (
                res.gamma_star == best.gamma_star and key < best.witness_simplex.sort_key()
            ):
                best = res
    return GapResult(
        best.gamma_star, best.witness_simplex, best.witness_loads,
        GapMethod.PROJECTED_GRADIENT, float(p), converged, examined,
    )
