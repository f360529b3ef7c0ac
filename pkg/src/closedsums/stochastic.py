"""Square-mean (L^2(Omega)) analysis of processes represented by Monte Carlo draws.

Expectations are sample means over ``K`` draws.  Large ensembles are never
materialised: a :class:`ProcessEnsemble` can be backed by a sampler that is
replayed chunk by chunk, each chunk with its own child seed, so every pass
over the draws sees exactly the same numbers.

The probability space is the empirical distribution of the draws.
Continuity in the square mean is assumed; a finite grid cannot certify it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .ergodic import DEFAULT_DECAY, DEFAULT_THRESHOLD, classify_profile, nonneg_mean, quadrature_weights
from .errors import InvalidInputError, NumericalInvariantError, ShapeError
from .signals import Grid, MeasureDensity, SampledSignal

INEQ_TOL = 1e-10
DEFAULT_CHUNK = 1000

# sampler(t, rng, n_draws) -> array of shape (n_draws, len(t), d)
Sampler = Callable[[np.ndarray, np.random.Generator, int], np.ndarray]


@dataclass
class ProcessEnsemble:
    """``K`` sample paths of an R^d-valued process on ``grid``.

    Either ``draws`` (shape ``(K, n, d)``) or ``sampler`` is set.  With a
    sampler, chunk ``i`` of ``chunk_size`` draws is generated from the
    ``i``-th child of ``SeedSequence(seed)``.
    """

    grid: Grid
    K: int
    dim: int
    seed: int = 0
    draws: Optional[np.ndarray] = None
    sampler: Optional[Sampler] = None
    chunk_size: int = DEFAULT_CHUNK
    _m2: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.grid.kind == "z_window":
            raise InvalidInputError("processes live on an R-grid or an R+-grid")
        if self.K < 2:
            raise InvalidInputError("an ensemble needs at least 2 draws")
        if (self.draws is None) == (self.sampler is None):
            raise InvalidInputError("give exactly one of draws or sampler")
        if self.draws is not None:
            D = np.asarray(self.draws, dtype=float)
            if D.ndim == 2:
                D = D[:, :, None]
            if D.shape != (self.K, self.grid.size, self.dim):
                raise ShapeError(f"draws of shape {D.shape}, expected {(self.K, self.grid.size, self.dim)}")
            if not np.all(np.isfinite(D)):
                raise InvalidInputError("draws have non-finite values")
            self.draws = D

    @classmethod
    def from_array(cls, grid: Grid, draws, seed: int = 0) -> "ProcessEnsemble":
        D = np.asarray(draws, dtype=float)
        if D.ndim == 2:
            D = D[:, :, None]
        return cls(grid, D.shape[0], D.shape[2], seed, draws=D)

    @classmethod
    def from_sampler(cls, grid: Grid, sampler: Sampler, K: int, dim: int, seed: int = 0,
                     chunk_size: int = DEFAULT_CHUNK) -> "ProcessEnsemble":
        return cls(grid, int(K), int(dim), int(seed), sampler=sampler, chunk_size=int(chunk_size))

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    def iter_chunks(self) -> Iterator[np.ndarray]:
        if self.draws is not None:
            for start in range(0, self.K, self.chunk_size):
                yield self.draws[start : start + self.chunk_size]
            return
        n_chunks = -(-self.K // self.chunk_size)
        children = np.random.SeedSequence(self.seed).spawn(n_chunks)
        t = self.t
        for i, ss in enumerate(children):
            k = min(self.chunk_size, self.K - i * self.chunk_size)
            block = np.asarray(self.sampler(t, np.random.default_rng(ss), k), dtype=float)
            if block.ndim == 2:
                block = block[:, :, None]
            if block.shape != (k, t.size, self.dim):
                raise ShapeError(f"sampler returned shape {block.shape}, expected {(k, t.size, self.dim)}")
            yield block

    def materialize(self) -> np.ndarray:
        if self.draws is not None:
            return self.draws
        return np.concatenate(list(self.iter_chunks()), axis=0)

    def moments(self):
        """Per-time ``E||x||^2`` and ``E||x||^4`` (chunk sums combined with ``math.fsum``)."""
        s2, s4 = [], []
        for block in self.iter_chunks():
            sq = np.einsum("ktd,ktd->kt", block, block)
            s2.append(sq.sum(axis=0))
            s4.append((sq * sq).sum(axis=0))
        S2 = np.array(s2)
        S4 = np.array(s4)
        m2 = np.array([math.fsum(col) for col in S2.T]) / self.K
        m4 = np.array([math.fsum(col) for col in S4.T]) / self.K
        return m2, m4

    def second_moment(self) -> np.ndarray:
        if self._m2 is None:
            self._m2, _ = self.moments()
        return self._m2


def scaled_gaussian(grid: Grid, sigma, K: int, seed: int = 0, dim: int = 1, shared: bool = True,
                    chunk_size: int = DEFAULT_CHUNK) -> ProcessEnsemble:
    """``x(t) = sigma(t) Z`` with ``Z`` standard normal in R^dim.

    With ``shared=True`` (default) one ``Z`` per draw is used at every time,
    so translates of a path are coupled; otherwise ``Z`` is fresh at each t.
    """
    t = grid.t
    s = np.broadcast_to(np.asarray(sigma(t) if callable(sigma) else sigma, dtype=float), t.shape).copy()

    def sampler(tt, rng, k):
        if shared:
            Z = rng.standard_normal((k, 1, dim))
        else:
            Z = rng.standard_normal((k, tt.size, dim))
        return s[None, :, None] * Z

    return ProcessEnsemble.from_sampler(grid, sampler, K, dim, seed, chunk_size)


def deterministic_process(f: SampledSignal, K: int = 2) -> ProcessEnsemble:
    """Every draw equal to ``f``."""
    D = np.broadcast_to(f.values, (K,) + f.values.shape).copy()
    return ProcessEnsemble.from_array(f.grid, D)


def l2_norm_at(x: ProcessEnsemble, t: float) -> float:
    """Root mean square over draws of ``||x(t)||``."""
    pos = x.grid.position(t)
    return float(np.sqrt(x.second_moment()[pos]))


def sm_ergodic_mean(x: ProcessEnsemble, mu: MeasureDensity, r: float, form: str = "squared") -> float:
    """Average of ``E||x(t)||^2`` (``squared``) or of ``(E||x(t)||^2)^(1/2)``
    (``root``) against ``mu`` over ``[-r, r]`` or ``[0, r]``."""
    m2 = x.second_moment()
    if form == "squared":
        return nonneg_mean(x.t, m2, mu, r)
    if form == "root":
        return nonneg_mean(x.t, np.sqrt(m2), mu, r)
    raise InvalidInputError(f"form must be 'squared' or 'root', got {form!r}")


def _richardson(t, a, mu, r, grid: Grid):
    """|I_h - I_2h| / 3 on the even-index subgrid, or nan if that subgrid cannot cover I_r."""
    even = (grid.indices % 2) == 0
    try:
        coarse = nonneg_mean(t[even], a[even], mu, r)
    except InvalidInputError:
        return float("nan")
    return abs(nonneg_mean(t, a, mu, r) - coarse) / 3.0


@dataclass
class EquivalenceReport:
    radii: list
    squared: list
    root: list
    M: float
    cauchy_schwarz_violation: float
    bounded_violation: float
    inequalities_hold: bool
    mc_stderr_squared: list
    mc_stderr_root: list
    quadrature_tol_squared: list
    quadrature_tol_root: list
    verdict_squared: str
    verdict_root: str
    decay_squared: float
    decay_root: float
    verdicts_agree: bool
    K: int
    seed: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def equivalence_check(
    x: ProcessEnsemble,
    mu: MeasureDensity,
    radii: Sequence[float],
    threshold: float = DEFAULT_THRESHOLD,
    min_decay_ratio: float = DEFAULT_DECAY,
    strict: bool = True,
) -> EquivalenceReport:
    """Both square-mean ergodic profiles and the two inequalities linking them.

    ``root^2 <= squared`` (Cauchy-Schwarz) and ``squared <= M^(1/2) root`` with
    ``M = sup_t E||x(t)||^2``.  Both hold exactly for the empirical
    distribution, so a violation beyond 1e-10 is a numerical failure and
    raises when ``strict``.  Monte Carlo standard errors are reported next to
    each mean: exact for the squared form (it is a mean of per-draw
    integrals), first-order (delta method, integrated) for the root form.
    """
    radii = [float(r) for r in radii]
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
        raise InvalidInputError("radii must be a nonempty increasing list")
    t = x.t
    m2, m4 = x.moments()
    x._m2 = m2
    root_m2 = np.sqrt(m2)
    M = float(m2.max())

    weights = []
    for r in radii:
        c, den = quadrature_weights(t, mu, r)
        if not (den > 0):
            raise InvalidInputError(f"measure has zero mass on the window of radius {r}")
        weights.append(c / den)
    W = np.stack(weights, axis=1)  # (n, n_radii)
    squared = [float(v) for v in m2 @ W]
    root = [float(v) for v in root_m2 @ W]

    # per-draw integrals for the squared form: its estimator is their mean
    s1 = np.zeros(len(radii))
    s2 = np.zeros(len(radii))
    for block in x.iter_chunks():
        Y = np.einsum("ktd,ktd->kt", block, block) @ W
        s1 += Y.sum(axis=0)
        s2 += (Y * Y).sum(axis=0)
    K = x.K
    var = np.maximum(s2 / K - (s1 / K) ** 2, 0.0) * K / (K - 1)
    se_sq = np.sqrt(var / K)
    var_t = np.maximum(m4 - m2 * m2, 0.0) * K / (K - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        se_root_t = np.where(root_m2 > 0, np.sqrt(var_t / K) / (2.0 * np.where(root_m2 > 0, root_m2, 1.0)), 0.0)
    se_root = se_root_t @ W

    quad_sq = [_richardson(t, m2, mu, r, x.grid) for r in radii]
    quad_root = [_richardson(t, root_m2, mu, r, x.grid) for r in radii]

    cs = max(rt * rt - sq for rt, sq in zip(root, squared))
    bd = max(sq - math.sqrt(M) * rt for rt, sq in zip(root, squared))
    holds = cs <= INEQ_TOL and bd <= INEQ_TOL
    if strict and not holds:
        raise NumericalInvariantError(f"square-mean inequalities violated (cs {cs:.3e}, bounded {bd:.3e})")
    v_sq, d_sq = classify_profile(squared, threshold, min_decay_ratio)
    v_rt, d_rt = classify_profile(root, threshold, min_decay_ratio)
    return EquivalenceReport(
        radii=radii,
        squared=squared,
        root=root,
        M=M,
        cauchy_schwarz_violation=float(max(cs, 0.0)),
        bounded_violation=float(max(bd, 0.0)),
        inequalities_hold=bool(holds),
        mc_stderr_squared=[float(v) for v in se_sq],
        mc_stderr_root=[float(v) for v in se_root],
        quadrature_tol_squared=quad_sq,
        quadrature_tol_root=quad_root,
        verdict_squared=v_sq,
        verdict_root=v_rt,
        decay_squared=d_sq,
        decay_root=d_rt,
        verdicts_agree=v_sq == v_rt,
        K=K,
        seed=x.seed,
    )


def reduce_to_signal(x: ProcessEnsemble) -> SampledSignal:
    """The deterministic signal ``t -> (x_1(t), ..., x_K(t)) / sqrt(K)`` in R^(K d).

    Its euclidean norm at ``t`` is the empirical L^2 norm of ``x(t)``, and
    ``||u(t + tau) - u(t)||^2 = E||x(t + tau) - x(t)||^2``, so the deterministic
    probes on it are the square-mean probes.  Needs the full ensemble in memory.
    """
    D = x.materialize()
    V = np.transpose(D, (1, 0, 2)).reshape(x.grid.size, x.K * x.dim) / math.sqrt(x.K)
    return SampledSignal(x.grid, V)
