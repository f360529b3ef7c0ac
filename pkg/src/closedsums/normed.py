"""Finite-dimensional normed vectors, the radial retraction and the
Dunkl-Williams slack.

Vectors are plain 1-D float arrays.  Most functions also accept a stack of
vectors (shape ``(..., d)``) and operate along the last axis, which is what
the signal code uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError

EXACT_TOL = 1e-12


@dataclass(frozen=True)
class NormKind:
    """Which norm to put on R^d: ``euclidean``, ``p`` (with ``p >= 1``) or ``sup``."""

    tag: str = "euclidean"
    p: float = 2.0

    def __post_init__(self):
        if self.tag not in ("euclidean", "p", "sup"):
            raise InvalidInputError(f"unknown norm tag {self.tag!r}")
        if self.tag == "p" and not (self.p >= 1):
            raise InvalidInputError(f"p-norm needs p >= 1, got {self.p}")

    @classmethod
    def euclidean(cls) -> "NormKind":
        return cls("euclidean", 2.0)

    @classmethod
    def pnorm(cls, p: float) -> "NormKind":
        if np.isinf(p):
            return cls.sup()
        return cls("p", float(p))

    @classmethod
    def sup(cls) -> "NormKind":
        return cls("sup", np.inf)

    @classmethod
    def parse(cls, text: str) -> "NormKind":
        """Parse ``euclidean``, ``l2``, ``sup``, ``inf``, ``max``, ``1``, ``p=3``, ``3.5``."""
        s = str(text).strip().lower()
        if s in ("euclidean", "l2", "2"):
            return cls.euclidean()
        if s in ("sup", "inf", "max", "linf"):
            return cls.sup()
        if s.startswith("p="):
            s = s[2:]
        if s.startswith("l"):
            s = s[1:]
        try:
            p = float(s)
        except ValueError:
            raise InvalidInputError(f"cannot parse norm {text!r}") from None
        return cls.pnorm(p)

    @property
    def order(self) -> float:
        """Order as understood by ``numpy.linalg.norm``."""
        if self.tag == "euclidean":
            return 2.0
        if self.tag == "sup":
            return np.inf
        return self.p

    def label(self) -> str:
        if self.tag == "p":
            return f"p={self.p:g}"
        return self.tag


EUCLIDEAN = NormKind.euclidean()


def as_vector(x) -> np.ndarray:
    """Validate and convert to a finite 1-D float array of dimension >= 1."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise InvalidInputError(f"expected a 1-D vector, got shape {v.shape}")
    if v.size == 0:
        raise InvalidInputError("vector of dimension 0")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("vector has non-finite entries")
    return v


def norms(X, kind: NormKind = EUCLIDEAN) -> np.ndarray:
    """Norms along the last axis of an array of vectors."""
    X = np.asarray(X, dtype=float)
    if X.shape[-1] == 0:
        raise InvalidInputError("vectors of dimension 0")
    order = kind.order
    if order == 2.0:
        return np.sqrt(np.einsum("...i,...i->...", X, X))
    if order == 1.0:
        return np.abs(X).sum(axis=-1)
    if np.isinf(order):
        return np.abs(X).max(axis=-1)
    return np.linalg.norm(X, ord=order, axis=-1)


def norm(x, kind: NormKind = EUCLIDEAN) -> float:
    """Norm of a single vector."""
    return float(norms(as_vector(x), kind))


def _retract(X: np.ndarray, R, kind: NormKind) -> np.ndarray:
    n = norms(X, kind)
    R = np.broadcast_to(R, n.shape)
    out = np.array(X, dtype=float, copy=True)
    # identity branch on the boundary ||x|| == R: no division there
    outside = n > R
    if np.any(outside):
        scale = R[outside] / n[outside]
        out[outside] = X[outside] * scale[..., None]
    return out


def radial_retraction(x, R: float, kind: NormKind = EUCLIDEAN) -> np.ndarray:
    """P_R(x): ``x`` if ``||x|| <= R``, otherwise ``(R / ||x||) x``."""
    if not (R >= 0) or not np.isfinite(R):
        raise InvalidInputError(f"retraction radius must be finite and >= 0, got {R}")
    v = as_vector(x)
    return _retract(v[None, :], float(R), kind)[0]


def retract_rows(X, R, kind: NormKind = EUCLIDEAN) -> np.ndarray:
    """Apply P_R to every vector along the last axis.

    ``R`` is a scalar or an array of radii, one per vector.
    """
    X = np.asarray(X, dtype=float)
    R = np.broadcast_to(np.asarray(R, dtype=float), X.shape[:-1])
    if np.any(~(R >= 0)) or not np.all(np.isfinite(R)):
        raise InvalidInputError("retraction radii must be finite and >= 0")
    flat = X.reshape(-1, X.shape[-1])
    return _retract(flat, R.reshape(-1), kind).reshape(X.shape)


def dunkl_williams_slack(x1, x2, kind: NormKind = EUCLIDEAN) -> float:
    """Slack in the Dunkl-Williams inequality

        || x1/||x1|| - x2/||x2|| || <= 4 ||x1 - x2|| / (||x1|| + ||x2||)

    returned as right-hand side minus left-hand side (nonnegative when the
    inequality holds).
    """
    a = as_vector(x1)
    b = as_vector(x2)
    if a.shape != b.shape:
        raise InvalidInputError(f"dimension mismatch {a.shape} vs {b.shape}")
    return float(dunkl_williams_slack_rows(a[None, :], b[None, :], kind)[0])


def dunkl_williams_slack_rows(X1, X2, kind: NormKind = EUCLIDEAN) -> np.ndarray:
    X1 = np.asarray(X1, dtype=float)
    X2 = np.asarray(X2, dtype=float)
    n1 = norms(X1, kind)
    n2 = norms(X2, kind)
    if np.any(n1 == 0) or np.any(n2 == 0):
        raise DomainError("Dunkl-Williams slack is undefined for the zero vector")
    rhs = 4.0 * norms(X1 - X2, kind) / (n1 + n2)
    lhs = norms(X1 / n1[..., None] - X2 / n2[..., None], kind)
    return rhs - lhs
