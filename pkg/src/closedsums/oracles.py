"""Brute-force reference computations for the subspace constants.

These deliberately avoid the singular value decomposition used by
:mod:`closedsums.subspaces`: ranks and kernels come from pivoted QR, inner
minimisations are done by shrinking-grid or compass search, and suprema by
dense sweeps or random-restart search.  They are slow and meant for small
instances and for tests.
"""

from __future__ import annotations

import itertools

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from ._search import compass_maximize, multistart_sphere_max

QR_RTOL = 1e-10


def _qr_rank(R: np.ndarray) -> int:
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0:
        return 0
    return int(np.sum(diag > QR_RTOL * diag[0]))


def qr_range_basis(A) -> np.ndarray:
    """Orthonormal basis of the column space of ``A`` (pivoted QR)."""
    A = np.asarray(A, dtype=float)
    Q, R, _ = scipy.linalg.qr(A, pivoting=True, mode="economic")
    return Q[:, : _qr_rank(R)]


def qr_kernel_basis(A) -> np.ndarray:
    """Orthonormal basis of Ker A, from a full pivoted QR of ``A.T``."""
    A = np.asarray(A, dtype=float)
    Q, R, _ = scipy.linalg.qr(A.T, pivoting=True, mode="full")
    return Q[:, _qr_rank(R):]


def qr_particular_solution(A, y) -> np.ndarray:
    """Some ``x`` with ``A x = y`` (y assumed in range), via pivoted QR of ``A.T``.

    With ``A.T P = Q R`` we have ``A = P R.T Q.T``; writing ``x = Q1 w`` gives
    the triangular system ``R1.T w = P.T y`` on the first r rows.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    Q, R, piv = scipy.linalg.qr(A.T, pivoting=True, mode="economic")
    r = _qr_rank(R)
    if r == 0:
        return np.zeros(A.shape[1])
    rhs = y[piv][:r]
    w = scipy.linalg.solve_triangular(R[:r, :r].T, rhs, lower=True)
    return Q[:, :r] @ w


def grid_min(fn, dim, radius, n_grid=11, n_zoom=45, shrink=0.5):
    """Minimise ``fn`` on the box [-radius, radius]^dim by repeated zooming grids."""
    if dim == 0:
        return np.zeros(0), fn(np.zeros(0))
    center = np.zeros(dim)
    half = float(radius) if radius > 0 else 1.0
    best_u, best_f = center, fn(center)
    offsets = np.linspace(-1.0, 1.0, n_grid)
    for _ in range(n_zoom):
        for combo in itertools.product(offsets, repeat=dim):
            u = center + half * np.asarray(combo)
            f = fn(u)
            if f < best_f:
                best_u, best_f = u, f
        center = best_u
        half *= shrink
    return best_u, best_f


def min_over_kernel(x0, K, norm=np.linalg.norm, method="auto"):
    """min ||x0 + K u|| over u.

    ``method='grid'`` uses zooming grids (up to three kernel dimensions);
    ``'auto'`` uses a bounded scalar search for a one-dimensional kernel
    and compass search otherwise.
    """
    x0 = np.asarray(x0, dtype=float)
    q = K.shape[1]
    fn = lambda u: norm(x0 + K @ u)
    radius = float(np.linalg.norm(x0)) + 1.0
    if q == 0:
        return x0, fn(np.zeros(0))
    if method == "grid" and q <= 3:
        u, f = grid_min(fn, q, radius)
    elif q == 1:
        res = minimize_scalar(
            lambda a: fn(np.array([a])),
            bounds=(-radius, radius),
            method="bounded",
            options={"xatol": 1e-13},
        )
        u, f = np.array([res.x]), res.fun
    else:
        u, neg, _ = compass_maximize(lambda v: -fn(v), np.zeros(q), step=radius, min_step=1e-12)
        f = -neg
    return x0 + K @ u, f


def brute_min_norm_preimage(L, y) -> np.ndarray:
    """Particular solution plus a search over the kernel."""
    x0 = qr_particular_solution(L, y)
    K = qr_kernel_basis(L)
    x, _ = min_over_kernel(x0, K, method="grid")
    return x


def brute_quotient_norm(L, x) -> float:
    _, f = min_over_kernel(np.asarray(x, dtype=float), qr_kernel_basis(L), method="grid")
    return float(f)


def brute_range_constant(L, seed=0, n_samples=2000):
    """sup over unit y in Im L of the least preimage norm.

    The least preimage of ``y = Y t`` (Y an orthonormal range basis) is
    linear in ``t``; its columns are computed one by one by kernel projection
    of a QR particular solution, then the ratio is maximised over directions.
    """
    L = np.asarray(L, dtype=float)
    Y = qr_range_basis(L)
    if Y.shape[1] == 0:
        raise ValueError("zero operator")
    K = qr_kernel_basis(L)
    P = np.eye(L.shape[1]) - K @ K.T
    G = np.column_stack([P @ qr_particular_solution(L, Y[:, j]) for j in range(Y.shape[1])])
    ratio = lambda t: float(np.linalg.norm(G @ t) / np.linalg.norm(t))
    t, c = multistart_sphere_max(ratio, Y.shape[1], np.random.default_rng(seed), n_samples=n_samples)
    return c, Y @ t


def split_oracle(BM, BN, norm=np.linalg.norm):
    """Return ``z -> x``: least-norm ``x`` in M with ``z - x`` in N.

    Direct solve of ``[BM BN] w = z`` followed by a search over the kernel of
    ``[BM BN]`` when the decomposition is not unique.
    """
    W = np.hstack([BM, BN])
    k = BM.shape[1]
    Kw = qr_kernel_basis(W)
    KM = BM @ Kw[:k]
    square = W.shape[0] == W.shape[1] and Kw.shape[1] == 0

    def split(z):
        if square:
            w = np.linalg.solve(W, z)
        else:
            w, *_ = np.linalg.lstsq(W, z, rcond=None)
        x0 = BM @ w[:k]
        if KM.shape[1] == 0:
            return x0
        x, _ = min_over_kernel(x0, KM, norm=norm)
        return x

    return split


def brute_sum_constant(BM, BN, seed=0, n_sweep=20_001, n_samples=1000):
    """sup over unit z in M + N of min ||x||.

    ``BM`` and ``BN`` hold spanning vectors as columns.  A two-dimensional
    sum is swept densely by angle and refined with a bounded scalar search;
    higher dimensions use random restarts plus compass search.
    """
    BM = np.asarray(BM, dtype=float)
    BN = np.asarray(BN, dtype=float)
    Zb = qr_range_basis(np.hstack([BM, BN]))
    s = Zb.shape[1]
    if s == 0:
        raise ValueError("M + N = {0}")

    split = split_oracle(BM, BN)

    def ratio_t(t):
        z = Zb @ t
        return float(np.linalg.norm(split(z)) / np.linalg.norm(z))

    if s == 1:
        return ratio_t(np.ones(1)), Zb[:, 0]
    if s == 2:
        phis = np.linspace(0.0, np.pi, n_sweep)
        vals = np.array([ratio_t(np.array([np.cos(p), np.sin(p)])) for p in phis])
        i = int(np.argmax(vals))
        h = phis[1] - phis[0]
        res = minimize_scalar(
            lambda p: -ratio_t(np.array([np.cos(p), np.sin(p)])),
            bounds=(phis[i] - h, phis[i] + h),
            method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(vals[i], -res.fun)
        phi = res.x if -res.fun >= vals[i] else phis[i]
        return best, Zb @ np.array([np.cos(phi), np.sin(phi)])
    t, c = multistart_sphere_max(ratio_t, s, np.random.default_rng(seed), n_samples=n_samples)
    return c, Zb @ t
