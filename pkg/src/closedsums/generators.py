"""Example signals: trigonometric polynomials (canonical AP functions),
seeded decaying noise (ergodic parts) and the non-direct-sum sequence with
alternating weights."""

from __future__ import annotations

from typing import Optional, Sequence, Union

import numpy as np

from .ergodic import DEFAULT_DECAY, DEFAULT_THRESHOLD, ergodicity_profile
from .errors import InvalidInputError
from .normed import EUCLIDEAN, NormKind
from .signals import Grid, MeasureDensity, SampledSignal, WeightSeq


def gen_trig_polynomial(freqs, coeff_vectors, grid: Grid, norm_kind: NormKind = EUCLIDEAN) -> SampledSignal:
    """Sample ``sum_k a_k cos(w_k t) + b_k sin(w_k t)`` on ``grid``.

    ``coeff_vectors`` holds one pair ``(a_k, b_k)`` per frequency; each entry is
    a scalar or a vector in R^d.  An empty frequency list gives the zero
    signal (dimension 1 unless coefficients say otherwise).
    """
    freqs = [float(w) for w in freqs]
    if len(coeff_vectors) != len(freqs):
        raise InvalidInputError("need one (a, b) coefficient pair per frequency")
    t = grid.t
    if not freqs:
        return SampledSignal(grid, np.zeros((t.size, 1)), norm_kind)
    pairs = [(np.atleast_1d(np.asarray(a, dtype=float)), np.atleast_1d(np.asarray(b, dtype=float)))
             for a, b in coeff_vectors]
    d = max(max(a.size, b.size) for a, b in pairs)
    out = np.zeros((t.size, d))
    for w, (a, b) in zip(freqs, pairs):
        out += np.cos(w * t)[:, None] * np.broadcast_to(a, (d,)) + np.sin(w * t)[:, None] * np.broadcast_to(b, (d,))
    return SampledSignal(grid, out, norm_kind)


def random_trig_polynomial(rng: np.random.Generator, grid: Grid, n_terms: int = 3, dim: int = 1,
                           max_freq: float = 3.0) -> SampledSignal:
    freqs = rng.uniform(0.1, max_freq, n_terms)
    coeffs = [(rng.standard_normal(dim), rng.standard_normal(dim)) for _ in range(n_terms)]
    return gen_trig_polynomial(freqs, coeffs, grid)


def gen_ergodic_noise(
    grid: Grid,
    envelope,
    seed: int,
    dim: int = 1,
    weight_or_measure: Optional[Union[WeightSeq, MeasureDensity]] = None,
    radii: Optional[Sequence[float]] = None,
    threshold: float = DEFAULT_THRESHOLD,
    min_decay_ratio: float = DEFAULT_DECAY,
    norm_kind: NormKind = EUCLIDEAN,
) -> SampledSignal:
    """Seeded noise bounded pointwise by ``envelope``.

    Each value is a uniformly random direction scaled by ``envelope(t) * U``
    with ``U ~ Uniform[0, 1]``, so ``||value||_2 <= envelope(t)``.  ``envelope``
    is a callable of ``t`` or an array over the grid.  When a weight/measure
    and radii are given, the generated signal's profile is checked and a
    ``ValueError`` raised unless it is ``ergodic_consistent``.
    """
    t = grid.t
    env = np.asarray(envelope(t) if callable(envelope) else envelope, dtype=float)
    env = np.broadcast_to(env, t.shape)
    if np.any(env < 0) or not np.all(np.isfinite(env)):
        raise InvalidInputError("envelope must be finite and nonnegative")
    rng = np.random.default_rng(seed)
    direction = rng.standard_normal((t.size, dim))
    nd = np.linalg.norm(direction, axis=1, keepdims=True)
    nd[nd == 0] = 1.0
    radius = rng.uniform(0.0, 1.0, (t.size, 1))
    sig = SampledSignal(grid, env[:, None] * radius * direction / nd, norm_kind)
    if weight_or_measure is not None and radii is not None:
        prof = ergodicity_profile(sig, weight_or_measure, radii, threshold, min_decay_ratio)
        if prof.verdict != "ergodic_consistent":
            raise InvalidInputError(f"generated noise is {prof.verdict} under the given weights")
    return sig


def alternating_example(N: int):
    """``p_{2n} = 0, p_{2n+1} = 1`` and ``u_{2n} = 1, u_{2n+1} = 0`` on [-N, N].

    ``u`` is periodic (hence almost periodic) and weighted ergodic for ``p``,
    so the sum of the two spaces is not direct.
    """
    n = np.arange(-N, N + 1)
    even = (n % 2 == 0)
    u = SampledSignal(Grid.z_window(N), even.astype(float))
    p = WeightSeq(N, (~even).astype(float))
    return u, p


def periodic_sequence(pattern: Sequence[float], N: int) -> SampledSignal:
    pat = np.asarray(pattern, dtype=float)
    n = np.arange(-N, N + 1)
    return SampledSignal(Grid.z_window(N), pat[n % pat.size])
