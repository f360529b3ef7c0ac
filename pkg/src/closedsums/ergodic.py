"""Weighted and measure ergodic means, finite-horizon ergodicity profiles,
restriction operators and the vanishing-at-infinity probe.

The limits r -> infinity (or N -> infinity) cannot be observed on finite
data.  :func:`ergodicity_profile` evaluates the mean on a list of radii and
returns a verdict that is at most "consistent with" ergodicity.

Signals are their grid samples.  Continuity of the underlying function
cannot be seen from samples and is assumed, not checked.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence, Union

import numpy as np

from .errors import GridAlignmentError, InvalidInputError, OutOfRangeError, ShapeError
from .signals import Grid, MeasureDensity, SampledSignal, WeightSeq, require_positive

DEFAULT_THRESHOLD = 1e-2
DEFAULT_DECAY = 0.5
_EDGE_TOL = 1e-9


def ergodic_mean_discrete(u: SampledSignal, p: WeightSeq, N: int) -> float:
    """(sum_{|n|<=N} ||u_n|| p_n) / (sum_{|n|<=N} p_n)."""
    if u.grid.kind != "z_window":
        raise InvalidInputError("discrete ergodic means need a signal on a Z-window")
    N = int(N)
    if N < 0 or N > u.grid.k_max:
        raise OutOfRangeError(f"N = {N} exceeds the signal window {u.grid.k_max}")
    w = p.window(N)
    total = float(w.sum())
    require_positive(total, "weight sequence")
    a = u.norms()[u.grid.k_max - N : u.grid.k_max + N + 1]
    return float(np.dot(a, w) / total)


def _interval(mu: MeasureDensity, r: float):
    return (-r, r) if mu.side == "line" else (0.0, r)


def _interp_weights(t: np.ndarray, x: float):
    """Grid positions and weights of linear interpolation at ``x``."""
    j = int(np.clip(np.searchsorted(t, x), 1, t.size - 1)) if t.size > 1 else 0
    if t.size == 1:
        return (0, 0), (1.0, 0.0)
    i = j - 1
    lam = (x - t[i]) / (t[j] - t[i])
    lam = min(max(lam, 0.0), 1.0)
    return (i, j), (1.0 - lam, lam)


def quadrature_weights(t: np.ndarray, mu: MeasureDensity, r: float):
    """Coefficients ``c`` (one per grid point) and mass ``den`` with
    ``integral over I_r of a dmu ~= c @ a`` for any ``a`` sampled on ``t``.

    Trapezoid rule for the density part; atoms and interval ends that fall
    between grid points use linear interpolation of ``a``.
    """
    if not (r > 0):
        raise InvalidInputError("radius must be positive")
    lo, hi = _interval(mu, r)
    tol = _EDGE_TOL * max(1.0, abs(r))
    if lo < t[0] - tol or hi > t[-1] + tol:
        raise OutOfRangeError(f"interval [{lo}, {hi}] is not covered by the grid [{t[0]}, {t[-1]}]")
    inner = np.flatnonzero((t > lo + tol) & (t < hi - tol))
    nodes = np.concatenate(([lo], t[inner], [hi]))
    w = mu.density_at(nodes)
    dx = np.diff(nodes)
    q = np.zeros(nodes.size)
    q[:-1] += dx / 2
    q[1:] += dx / 2
    q *= w
    c = np.zeros(t.size)
    c[inner] += q[1:-1]
    for x, qx in ((lo, q[0]), (hi, q[-1])):
        idx, lam = _interp_weights(t, x)
        c[idx[0]] += lam[0] * qx
        c[idx[1]] += lam[1] * qx
    den = float(q.sum())
    for point, mass in mu.atoms:
        if lo - tol <= point <= hi + tol and mass > 0:
            idx, lam = _interp_weights(t, min(max(point, t[0]), t[-1]))
            c[idx[0]] += lam[0] * mass
            c[idx[1]] += lam[1] * mass
            den += mass
    return c, den


def _weighted_integrals(t: np.ndarray, a: np.ndarray, mu: MeasureDensity, r: float):
    c, den = quadrature_weights(t, mu, float(r))
    return float(c @ a), den


def ergodic_mean_measure(f: SampledSignal, mu: MeasureDensity, r: float) -> float:
    """(1 / mu(I_r)) * integral over I_r of ||f(t)|| dmu(t), I_r = [-r, r] or [0, r]."""
    if mu.side == "line" and f.grid.kind == "r_plus_grid":
        raise OutOfRangeError("a half-line signal cannot be averaged over [-r, r]")
    num, den = _weighted_integrals(f.t, f.norms(), mu, float(r))
    require_positive(den, "measure")
    return num / den


def nonneg_mean(t: np.ndarray, a: np.ndarray, mu: MeasureDensity, r: float) -> float:
    """Measure mean of an already nonnegative sampled scalar function."""
    num, den = _weighted_integrals(t, a, mu, float(r))
    require_positive(den, "measure")
    return num / den


@dataclass
class ErgodicProfile:
    radii: list
    means: list
    verdict: str
    threshold: float
    min_decay_ratio: float
    decay: float

    def to_dict(self) -> dict:
        return asdict(self)


def classify_profile(means: Sequence[float], threshold: float, min_decay_ratio: float):
    """Verdict for a sequence of means at increasing radii.

    ``decay`` is the fractional drop ``1 - final / reference`` where the
    reference is the mean at the start of the last half of the radii (1 when
    both are zero).  ``ergodic_consistent`` needs ``final < threshold`` and
    ``decay >= min_decay_ratio``; ``not_ergodic`` means every mean is at least
    ``threshold`` and the decay requirement fails; anything else is
    ``inconclusive``.
    """
    m = np.asarray(means, dtype=float)
    ref = m[(m.size - 1) // 2]
    final = m[-1]
    if ref > 0:
        decay = 1.0 - final / ref
    else:
        decay = 1.0 if final == 0 else -np.inf
    decays = decay >= min_decay_ratio
    if final < threshold and decays:
        return "ergodic_consistent", float(decay)
    if np.all(m >= threshold) and not decays:
        return "not_ergodic", float(decay)
    return "inconclusive", float(decay)


def ergodicity_profile(
    signal: SampledSignal,
    weight_or_measure: Union[WeightSeq, MeasureDensity],
    radii: Sequence[float],
    threshold: float = DEFAULT_THRESHOLD,
    min_decay_ratio: float = DEFAULT_DECAY,
) -> ErgodicProfile:
    radii = [float(r) for r in radii]
    if not radii:
        raise InvalidInputError("need at least one radius")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise InvalidInputError("radii must be strictly increasing")
    if not (threshold > 0):
        raise InvalidInputError("threshold must be positive")
    if isinstance(weight_or_measure, WeightSeq):
        for r in radii:
            if r != int(r):
                raise InvalidInputError("discrete radii must be integers")
        means = [ergodic_mean_discrete(signal, weight_or_measure, int(r)) for r in radii]
    elif isinstance(weight_or_measure, MeasureDensity):
        means = [ergodic_mean_measure(signal, weight_or_measure, r) for r in radii]
    else:
        raise InvalidInputError("expected a WeightSeq or a MeasureDensity")
    verdict, decay = classify_profile(means, threshold, min_decay_ratio)
    return ErgodicProfile(radii, means, verdict, float(threshold), float(min_decay_ratio), decay)


def profile_means(signal, weight_or_measure, radii) -> np.ndarray:
    """Just the means of :func:`ergodicity_profile`, without a verdict."""
    if isinstance(weight_or_measure, WeightSeq):
        return np.array([ergodic_mean_discrete(signal, weight_or_measure, int(r)) for r in radii])
    return np.array([ergodic_mean_measure(signal, weight_or_measure, r) for r in radii])


def restrict_to_integers(f: SampledSignal) -> SampledSignal:
    """Values of a line signal at the integers of its window."""
    if f.grid.kind != "r_grid":
        raise InvalidInputError("restriction to Z expects a signal on a symmetric R-grid")
    q = int(round(1.0 / f.grid.step))
    if q < 1 or abs(q * f.grid.step - 1.0) > 1e-12:
        raise GridAlignmentError(f"step {f.grid.step} does not divide 1")
    N = f.grid.k_max // q
    pos = np.arange(-N, N + 1) * q - f.grid.k_min
    return SampledSignal(Grid.z_window(N), f.values[pos].copy(), f.norm_kind)


def restrict_to_halfline(f: SampledSignal) -> SampledSignal:
    """Nonnegative-time part of a line signal."""
    if f.grid.kind != "r_grid":
        raise InvalidInputError("restriction to R+ expects a signal on a symmetric R-grid")
    g = Grid("r_plus_grid", f.grid.step, 0, f.grid.k_max)
    return SampledSignal(g, f.values[-f.grid.k_min :].copy(), f.norm_kind)


@dataclass
class C0ProbeResult:
    verdict: str
    tail_sup: float
    block_sups: list
    threshold: float
    tail_fraction: float

    def to_dict(self) -> dict:
        return asdict(self)


def c0_probe(phi: SampledSignal, threshold: float = 1e-3, tail_fraction: float = 0.2) -> C0ProbeResult:
    """Finite check of ``phi(t) -> 0`` as ``t -> +inf``.

    Accepted iff the sup of ``||phi||`` over the trailing ``tail_fraction`` of
    the grid is below ``threshold`` and the sups over consecutive dyadic
    blocks of that tail (first half, next quarter, ...) do not increase.
    """
    if phi.grid.kind != "r_plus_grid":
        raise InvalidInputError("the c0 probe expects a half-line signal")
    if not (0 < tail_fraction < 1):
        raise InvalidInputError("tail_fraction must lie in (0, 1)")
    a = phi.norms()
    n_tail = max(1, int(np.ceil(tail_fraction * a.size)))
    tail = a[-n_tail:]
    blocks = []
    start = 0
    remaining = tail.size
    while remaining >= 4:
        size = remaining // 2
        blocks.append(float(tail[start : start + size].max()))
        start += size
        remaining -= size
    blocks.append(float(tail[start:].max()))
    monotone = all(b <= a_ + 1e-12 for a_, b in zip(blocks, blocks[1:]))
    tail_sup = float(tail.max())
    verdict = "accepted" if (tail_sup < threshold and monotone) else "rejected"
    return C0ProbeResult(verdict, tail_sup, blocks, float(threshold), float(tail_fraction))


def check_same_grid(*signals: SampledSignal) -> None:
    first = signals[0]
    for s in signals[1:]:
        if not first.same_support(s):
            raise ShapeError("signals must share grid and dimension")
