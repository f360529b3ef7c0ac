"""Almost-periodicity and almost-automorphy probes on sampled signals.

Both probes work on shifts that are whole numbers of grid steps and only
compare values where both the signal and its translate are sampled (the
overlap).  Acceptance means "the finite data behave like an AP/AA function",
never a proof of membership.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError, NumericalInvariantError
from .normed import norms
from .signals import SampledSignal

DEFAULT_MAX_FRACTION = 0.25
DEFAULT_MIN_OVERLAP = 0.5
MIN_GRID_POINTS = 8


def translation_defect(u: SampledSignal, tau: float) -> float:
    """sup over the overlap of ||u(t + tau) - u(t)||, for a grid-aligned ``tau``."""
    s = abs(u.grid.shift_steps(tau))
    n = u.grid.size
    if s >= n:
        raise InvalidInputError(f"shift {tau} leaves no overlap")
    diff = u.values[s:] - u.values[: n - s]
    return float(norms(diff, u.norm_kind).max())


def _defects(u: SampledSignal, S: int) -> np.ndarray:
    V = u.values
    n = V.shape[0]
    out = np.empty(S + 1)
    for s in range(S + 1):
        out[s] = norms(V[s:] - V[: n - s], u.norm_kind).max()
    return out


@dataclass
class APProbeResult:
    epsilon: float
    window_len: Optional[float]
    window_steps: Optional[int]
    translation_numbers: list
    verdict: str
    max_shift: float
    max_window_len: float
    max_reported_defect: float

    def to_dict(self) -> dict:
        return asdict(self)


def ap_probe(
    u: SampledSignal,
    epsilon: float,
    max_fraction: float = DEFAULT_MAX_FRACTION,
    min_overlap: float = DEFAULT_MIN_OVERLAP,
    min_blocks: float = 2.0,
) -> APProbeResult:
    """Search the smallest inclusion length of epsilon-translation numbers.

    Shifts are tested up to ``S`` steps, the largest shift that keeps at
    least ``min_overlap`` of the grid in the overlap.  A shift ``s`` is an
    epsilon-translation number when its defect is ``< epsilon``; the defect is
    symmetric in ``s``.  The reported length ``l`` is the smallest value such
    that every interval ``[a, a + l]`` inside ``[-S, S]`` contains one, that
    is, the largest gap between consecutive translation numbers (the distance
    from the last one to ``S`` included).

    Verdicts: ``accepted`` if ``l <= max_fraction`` of the grid length,
    ``rejected`` otherwise, ``inconclusive`` when the grid is shorter than
    8 points or the tested shift range cannot hold ``min_blocks`` windows of
    the largest admissible length.
    """
    if not (epsilon > 0):
        raise InvalidInputError("epsilon must be positive")
    if not (0 < max_fraction <= 1) or not (0 < min_overlap < 1):
        raise InvalidInputError("max_fraction must be in (0, 1] and min_overlap in (0, 1)")
    n = u.grid.size
    step = u.grid.step
    S = int(np.floor((1.0 - min_overlap) * (n - 1)))
    max_steps = int(np.floor(max_fraction * (n - 1)))
    if n < MIN_GRID_POINTS or S < 1 or S < min_blocks * max_steps:
        return APProbeResult(float(epsilon), None, None, [], "inconclusive", S * step, max_steps * step, 0.0)

    defects = _defects(u, S)
    good = np.flatnonzero(defects < epsilon)  # always contains 0
    gaps = np.diff(good)
    ell = int(max(gaps.max() if gaps.size else 0, S - good[-1]))
    shifts = np.concatenate((-good[:0:-1], good))
    taus = [float(s * step) for s in shifts]

    # re-verify every reported shift with the standalone defect routine
    worst = 0.0
    for s in good:
        d = translation_defect(u, float(s * step))
        if not d < epsilon:
            raise NumericalInvariantError(f"shift {s * step} fails re-verification ({d} >= {epsilon})")
        worst = max(worst, d)

    verdict = "accepted" if ell <= max_steps else "rejected"
    return APProbeResult(
        epsilon=float(epsilon),
        window_len=float(ell * step),
        window_steps=ell,
        translation_numbers=taus,
        verdict=verdict,
        max_shift=float(S * step),
        max_window_len=float(max_steps * step),
        max_reported_defect=worst,
    )


@dataclass
class AAProbeResult:
    subsequence: list
    forward_increments: list
    backward_residuals: list
    max_forward_residual: float
    max_backward_residual: float
    verdict: str
    tol: float
    window: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def aa_probe(
    u: SampledSignal,
    shifts: Sequence[float],
    tol: float,
    window: Optional[float] = None,
    min_length: int = 3,
) -> AAProbeResult:
    """Look for a pointwise-Cauchy subsequence of translates and test the back-translation.

    1. Translates ``u(. + s_j)`` are compared on a fixed probe window: every
       grid time ``t`` (with ``|t| <= window`` if given) for which all
       translates are sampled.
    2. The subsequence is the set of shifts whose translates lie within
       ``tol / 2`` of the translate with the most such neighbours (later
       shifts win ties), so any two of them differ by at most ``tol``.
    3. The limit candidate ``g`` is the translate by the last selected shift
       ``s*``; backward residuals are ``sup_t ||g(t - s_j) - u(t)||`` with
       ``g(t - s_j) = u(t - s_j + s*)``, evaluated where sampled.

    Accepted when the subsequence has at least ``min_length`` shifts and the
    largest backward residual is ``<= tol``; rejected if the back-translation
    fails; inconclusive when the window is empty or no long enough Cauchy
    subsequence exists among the given shifts.

    Only the given shift family is examined, so acceptance says nothing
    about other sequences of shifts.
    """
    if not (tol > 0):
        raise InvalidInputError("tol must be positive")
    s_idx = np.array([u.grid.shift_steps(s) for s in shifts], dtype=int)
    n = u.grid.size
    step = u.grid.step
    V = u.values

    def empty(reason_window=None):
        return AAProbeResult([], [], [], float("nan"), float("nan"), "inconclusive", float(tol), reason_window or [])

    if s_idx.size == 0:
        return empty()
    pos = np.arange(n)
    ok = (pos + s_idx.min() >= 0) & (pos + s_idx.max() <= n - 1)
    if window is not None:
        ok &= np.abs(u.t) <= window + 1e-12
    W = np.flatnonzero(ok)
    if W.size == 0:
        return empty()

    T = np.stack([V[W + s] for s in s_idx])  # (m, |W|, d)
    m = s_idx.size
    D = np.zeros((m, m))
    for i in range(m):
        D[i] = norms(T - T[i], u.norm_kind).max(axis=1)

    counts = (D <= tol / 2).sum(axis=1)
    best = int(np.flatnonzero(counts == counts.max())[-1])
    members = np.flatnonzero(D[best] <= tol / 2)
    sub = s_idx[members]
    win = [float(u.t[W[0]]), float(u.t[W[-1]])]
    if members.size < min_length:
        return AAProbeResult(
            [float(s * step) for s in sub], [], [], float(D[np.ix_(members, members)].max()),
            float("nan"), "inconclusive", float(tol), win,
        )

    forward = [float(D[a, b]) for a, b in zip(members, members[1:])]
    diameter = float(D[np.ix_(members, members)].max())
    s_last = sub[-1]
    back_shift = s_last - sub
    okb = ok & (pos + back_shift.min() >= 0) & (pos + back_shift.max() <= n - 1)
    Wb = np.flatnonzero(okb)
    if Wb.size == 0:
        return AAProbeResult(
            [float(s * step) for s in sub], forward, [], diameter, float("nan"), "inconclusive", float(tol), win,
        )
    backward = [float(norms(V[Wb + b] - V[Wb], u.norm_kind).max()) for b in back_shift]
    max_back = max(backward)
    verdict = "accepted" if max_back <= tol else "rejected"
    return AAProbeResult(
        subsequence=[float(s * step) for s in sub],
        forward_increments=forward,
        backward_residuals=backward,
        max_forward_residual=diameter,
        max_backward_residual=float(max_back),
        verdict=verdict,
        tol=float(tol),
        window=win,
    )
