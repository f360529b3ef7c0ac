"""Closed-range, quotient-norm, graph-norm and closed-sum constants in R^n.

In finite dimensions every range and every sum of subspaces is closed, so
what is interesting is the size of the constants.  For a linear map ``L``
the best preimage constant is ``1 / sigma_min`` (smallest nonzero singular
value).  For a pair of subspaces ``M, N`` the best constant is

    c(M, N) = sup_{z in M+N, ||z|| = 1}  min { ||x|| : x in M, z - x in N }

and ``d = c + 1`` bounds the ``N`` component as well.

All closed forms use euclidean norms.  The ``sampled`` route of
:func:`sum_constant` accepts any :class:`NormKind`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linprog, minimize

from ._search import multistart_sphere_max
from .errors import (
    DegenerateInputError,
    DomainError,
    InvalidInputError,
    NotInRangeError,
    ShapeError,
)
from .normed import EUCLIDEAN, NormKind, as_vector, norms

RANK_RTOL = 1e-10
ORTHO_TOL = 1e-10


def as_operator(L) -> np.ndarray:
    A = np.asarray(L, dtype=float)
    if A.ndim != 2 or min(A.shape) < 1:
        raise InvalidInputError(f"operator must be an m x n matrix with m, n >= 1, got {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("operator has non-finite entries")
    return A


def numerical_rank(s: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Number of singular values above ``rtol * s.max()``."""
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


@dataclass(frozen=True)
class Subspace:
    """Subspace of R^d given by an orthonormal basis (columns of ``basis``)."""

    basis: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=float).reshape(self.ambient_dim, -1)
        object.__setattr__(self, "basis", B)
        k = B.shape[1]
        if k > self.ambient_dim:
            raise InvalidInputError("more basis vectors than the ambient dimension")
        if k and np.max(np.abs(B.T @ B - np.eye(k))) > ORTHO_TOL:
            raise InvalidInputError("basis vectors are not orthonormal to 1e-10")

    @classmethod
    def span(cls, vectors, ambient_dim: Optional[int] = None) -> "Subspace":
        """Orthonormalise the span of ``vectors`` (one vector per row)."""
        V = np.asarray(vectors, dtype=float)
        if V.ndim == 1:
            V = V[None, :]
        if V.size == 0:
            if ambient_dim is None:
                raise InvalidInputError("ambient dimension needed for the zero subspace")
            return cls(np.zeros((ambient_dim, 0)), ambient_dim)
        d = V.shape[1]
        if ambient_dim is not None and ambient_dim != d:
            raise ShapeError(f"vectors live in R^{d}, expected R^{ambient_dim}")
        U, s, _ = np.linalg.svd(V.T, full_matrices=False)
        r = numerical_rank(s)
        return cls(U[:, :r], d)

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(np.eye(d), d)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def project(self, x) -> np.ndarray:
        return self.basis @ (self.basis.T @ np.asarray(x, dtype=float))

    def residual(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - self.project(x)))


@dataclass
class ConstantReport:
    constant_c: float
    witness: dict
    method: str
    d: Optional[float] = None
    tolerances: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def conv(v):
            if isinstance(v, np.ndarray):
                return v.tolist()
            if isinstance(v, (np.floating, np.integer)):
                return v.item()
            return v

        return {
            "constant_c": float(self.constant_c),
            "d": None if self.d is None else float(self.d),
            "witness": {k: conv(v) for k, v in self.witness.items()},
            "method": self.method,
            "tolerances": dict(self.tolerances),
        }


def _canonical_sign(v: np.ndarray) -> float:
    i = int(np.argmax(np.abs(v)))
    return -1.0 if v[i] < 0 else 1.0


def min_norm_preimage(L, y, tol: float = 1e-8) -> np.ndarray:
    """Least euclidean-norm ``x`` with ``L x = y``.

    Raises :class:`NotInRangeError` when the least-squares residual exceeds
    ``tol * ||y||``.
    """
    A = as_operator(L)
    y = as_vector(y)
    if y.size != A.shape[0]:
        raise ShapeError(f"y has dimension {y.size}, operator has {A.shape[0]} rows")
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    r = numerical_rank(s)
    coef = (U[:, :r].T @ y) / s[:r]
    x = Vt[:r].T @ coef
    resid = float(np.linalg.norm(A @ x - y))
    ny = float(np.linalg.norm(y))
    if resid > tol * max(ny, np.finfo(float).tiny) and resid > 0:
        raise NotInRangeError(f"residual {resid:.3e} exceeds {tol:g} * ||y|| = {tol * ny:.3e}")
    return x


def range_constant(L) -> ConstantReport:
    """Smallest ``c`` such that each ``y`` in Im L has a preimage with
    ``||x|| <= c ||y||`` (euclidean norms).  Equal to ``1 / sigma_min``.
    """
    A = as_operator(L)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    r = numerical_rank(s)
    if r == 0:
        raise DegenerateInputError("zero operator: Im L = {0}, the constant is undefined")
    sig = s[r - 1]
    y = U[:, r - 1]
    sgn = _canonical_sign(y)
    y = sgn * y
    x = sgn * Vt[r - 1] / sig
    return ConstantReport(
        constant_c=1.0 / sig,
        witness={"y": y, "x": x, "sigma_min": sig, "rank": r},
        method="closed_form",
        tolerances={"rank_rtol": RANK_RTOL},
    )


def quotient_norm(L, x) -> float:
    """Distance from ``x`` to Ker L, i.e. the norm of ``x + Ker L`` in E / Ker L."""
    A = as_operator(L)
    x = as_vector(x)
    if x.size != A.shape[1]:
        raise ShapeError(f"x has dimension {x.size}, operator has {A.shape[1]} columns")
    _, s, Vt = np.linalg.svd(A, full_matrices=False)
    r = numerical_rank(s)
    # the orthogonal complement of the kernel is the row space
    return float(np.linalg.norm(Vt[:r] @ x))


@dataclass(frozen=True)
class GraphOperator:
    """Linear operator T defined on a subspace ``domain`` of R^n.

    ``action`` is an ``m x k`` matrix acting on coordinates with respect to
    the domain basis, so ``T(x) = action @ (basis.T @ x)``.
    """

    domain: Subspace
    action: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.action, dtype=float)
        if A.ndim == 1:
            A = A[:, None] if self.domain.dim == 1 else A[None, :]
        if A.ndim != 2 or A.shape[1] != self.domain.dim:
            raise ShapeError(
                f"action must have {self.domain.dim} columns (domain dimension), got shape {A.shape}"
            )
        object.__setattr__(self, "action", A)

    @classmethod
    def from_ambient(cls, domain: Subspace, matrix) -> "GraphOperator":
        """Build from an ``m x n`` matrix acting on ambient coordinates."""
        M = as_operator(matrix)
        if M.shape[1] != domain.ambient_dim:
            raise ShapeError("ambient matrix column count must equal the ambient dimension")
        return cls(domain, M @ domain.basis)

    def coords(self, x, tol: float = ORTHO_TOL) -> np.ndarray:
        x = as_vector(x)
        if x.size != self.domain.ambient_dim:
            raise ShapeError(f"x has dimension {x.size}, expected {self.domain.ambient_dim}")
        if self.domain.residual(x) > tol * max(1.0, float(np.linalg.norm(x))):
            raise DomainError("x is not in the domain of T")
        return self.domain.basis.T @ x

    def apply(self, x) -> np.ndarray:
        return self.action @ self.coords(x)


def graph_norm(T: GraphOperator, x) -> float:
    """``||x||_E + ||T x||_F``."""
    a = T.coords(x)
    return float(np.linalg.norm(np.asarray(x, dtype=float)) + np.linalg.norm(T.action @ a))


def graph_range_constant(T: GraphOperator) -> ConstantReport:
    """Preimage constant of T, and ``d = c + 1`` for the graph-norm version."""
    if T.domain.dim == 0:
        raise DegenerateInputError("operator on the zero subspace")
    rep = range_constant(T.action)
    x = T.domain.basis @ rep.witness["x"]
    y = rep.witness["y"]
    c = rep.constant_c
    rep.witness = {
        "y": y,
        "x": x,
        "graph_norm_x": float(np.linalg.norm(x) + np.linalg.norm(y)),
        "sigma_min": rep.witness["sigma_min"],
        "rank": rep.witness["rank"],
    }
    rep.d = c + 1.0
    return rep


def _sum_geometry(M: Subspace, N: Subspace):
    if M.ambient_dim != N.ambient_dim:
        raise ShapeError(f"subspaces live in R^{M.ambient_dim} and R^{N.ambient_dim}")
    d = M.ambient_dim
    W = np.hstack([M.basis, N.basis])
    if W.shape[1] == 0:
        raise DegenerateInputError("M + N = {0}")
    U, s, _ = np.linalg.svd(W, full_matrices=False)
    r = numerical_rank(s)
    if r == 0:
        raise DegenerateInputError("M + N = {0}")
    Z = U[:, :r]
    Q = np.eye(d) - N.basis @ N.basis.T
    C = Q @ M.basis
    if C.size:
        Uc, sc, Vct = np.linalg.svd(C, full_matrices=True)
        rc = numerical_rank(sc)
    else:
        Uc, sc, Vct, rc = np.zeros((d, 0)), np.zeros(0), np.zeros((0, 0)), 0
    # min-norm coefficients a of x = M.basis @ a for a given z:  a = C^+ Q z
    Cpinv = Vct[:rc].T @ np.diag(1.0 / sc[:rc]) @ Uc[:, :rc].T if rc else np.zeros((M.dim, d))
    K = Vct[rc:].T if M.dim else np.zeros((0, 0))
    return Z, Q, Cpinv, K


def _inner_min(M: Subspace, a0: np.ndarray, K: np.ndarray, kind: NormKind):
    """min ||M.basis @ (a0 + K u)|| over u, for a non-euclidean norm."""
    B = M.basis
    v0 = B @ a0
    if K.shape[1] == 0 or kind == EUCLIDEAN:
        return v0
    W = B @ K
    q = W.shape[1]
    d = B.shape[0]
    if kind.tag == "sup":
        # min s  s.t.  -s <= v0 + W u <= s
        c = np.r_[np.zeros(q), 1.0]
        A = np.block([[W, -np.ones((d, 1))], [-W, -np.ones((d, 1))]])
        b = np.r_[-v0, v0]
        res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * q + [(0, None)], method="highs")
        return v0 + W @ res.x[:q]
    if kind.tag == "p" and kind.p == 1.0:
        c = np.r_[np.zeros(q), np.ones(d)]
        A = np.block([[W, -np.eye(d)], [-W, -np.eye(d)]])
        b = np.r_[-v0, v0]
        res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * q + [(0, None)] * d, method="highs")
        return v0 + W @ res.x[:q]
    p = kind.p
    obj = lambda u: np.sum(np.abs(v0 + W @ u) ** p)
    res = minimize(obj, np.zeros(q), method="BFGS", options={"gtol": 1e-12})
    return v0 + W @ res.x


def decompose_in_sum(M: Subspace, N: Subspace, z, kind: NormKind = EUCLIDEAN):
    """Decomposition ``z = x + y``, ``x in M``, ``y in N`` with ``||x||`` minimal.

    ``z`` must lie in M + N.  For the euclidean norm the minimiser is unique.
    """
    Z, Q, Cpinv, K = _sum_geometry(M, N)
    z = as_vector(z)
    if np.linalg.norm(z - Z @ (Z.T @ z)) > 1e-8 * max(1.0, float(np.linalg.norm(z))):
        raise NotInRangeError("z is not in M + N")
    a0 = Cpinv @ (Q @ z)
    x = _inner_min(M, a0, K, kind)
    return x, z - x


def sum_constant(
    M: Subspace,
    N: Subspace,
    method: str = "auto",
    kind: NormKind = EUCLIDEAN,
    seed: int = 0,
    n_samples: int = 2000,
    n_refine: int = 5,
) -> ConstantReport:
    """Best constant ``c`` for splitting ``z in M + N`` as ``x + y`` with
    ``||x|| <= c ||z||``; also reports ``d = c + 1``.

    ``method='closed_form'`` (euclidean only) takes the largest singular value
    of the linear map ``z -> argmin ||x||``.  ``method='sampled'`` maximises the
    ratio by random restarts plus compass search and works for any norm.
    ``'auto'`` picks the closed form when the norm is euclidean and falls back
    to sampling if the closed form fails.

    ``c`` is the splitting constant itself.  The norm of the inverse of
    ``(x, y) -> x + y`` depends on the norm put on ``M x N`` (max norm, sum
    norm, ...) and is not reported.  If every ``z`` splits with ``x = 0``
    (``M`` inside ``N``) the result is ``c = 0``, ``d = 1``.
    """
    if method not in ("auto", "closed_form", "sampled"):
        raise InvalidInputError(f"unknown method {method!r}")
    if method == "closed_form" and kind != EUCLIDEAN:
        raise InvalidInputError("the closed form needs the euclidean norm")
    Z, Q, Cpinv, K = _sum_geometry(M, N)
    if method in ("auto", "closed_form") and kind == EUCLIDEAN:
        try:
            return _sum_constant_closed(M, Z, Q, Cpinv)
        except np.linalg.LinAlgError:
            if method == "closed_form":
                raise
    return _sum_constant_sampled(M, Z, Q, Cpinv, K, kind, seed, n_samples, n_refine)


def _sum_constant_closed(M, Z, Q, Cpinv) -> ConstantReport:
    G = Cpinv @ Q @ Z  # coefficients of the optimal x, as a linear map of z-coordinates
    if G.size == 0:
        c, t = 0.0, np.eye(Z.shape[1])[0]
    else:
        _, sg, Vgt = np.linalg.svd(G, full_matrices=True)
        c = float(sg[0]) if sg.size else 0.0
        t = Vgt[0]
    z = Z @ t
    sgn = _canonical_sign(z)
    z, t = sgn * z, sgn * t
    x = M.basis @ (G @ t) if G.size else np.zeros_like(z)
    y = z - x
    return ConstantReport(
        constant_c=c,
        d=c + 1.0,
        witness={"z": z, "x": x, "y": y, "sum_dim": Z.shape[1]},
        method="closed_form",
        tolerances={"rank_rtol": RANK_RTOL},
    )


def _sum_constant_sampled(M, Z, Q, Cpinv, K, kind, seed, n_samples, n_refine) -> ConstantReport:
    rng = np.random.default_rng(seed)

    def split(t):
        z = Z @ t
        x = _inner_min(M, Cpinv @ (Q @ z), K, kind)
        return z, x

    def ratio(t):
        z, x = split(t)
        nz = float(norms(z, kind))
        return float(norms(x, kind)) / nz if nz > 0 else 0.0

    t, c = multistart_sphere_max(ratio, Z.shape[1], rng, n_samples=n_samples, n_refine=n_refine)
    z, x = split(t)
    scale = float(norms(z, kind))
    z, x = z / scale, x / scale
    sgn = _canonical_sign(z)
    z, x = sgn * z, sgn * x
    return ConstantReport(
        constant_c=float(c),
        d=float(c) + 1.0,
        witness={"z": z, "x": x, "y": z - x, "sum_dim": Z.shape[1]},
        method="sampled",
        tolerances={"rank_rtol": RANK_RTOL, "seed": seed, "n_samples": n_samples, "norm": kind.label()},
    )
