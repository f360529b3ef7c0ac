"""Normalising a decomposition f = g + h by retracting g onto the ball of
radius ||f||_inf, and validating pseudo almost periodic / automorphic
candidates built from it.

With ``R = sup ||f||`` we have ``P_R f = f``, so pointwise

    ||h*|| = ||P_R f - P_R g|| <= 2 ||f - g|| = 2 ||h||

which is why an ergodic ``h`` stays ergodic after normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .ergodic import DEFAULT_DECAY, DEFAULT_THRESHOLD, ErgodicProfile, ergodicity_profile
from .errors import InconsistentDecompositionError, InvalidInputError, NumericalInvariantError, ShapeError
from .normed import EXACT_TOL, NormKind, norms, retract_rows
from .probes import aa_probe, ap_probe
from .signals import MeasureDensity, SampledSignal, WeightSeq

CONSISTENCY_TOL = 1e-10


@dataclass
class DecompositionResult:
    g_star: SampledSignal
    h_star: SampledSignal
    R: float
    bounds: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {"R": self.R, "bounds": dict(self.bounds)}


def _check_inputs(f, g, h):
    for s in (g, h):
        if not f.same_support(s):
            raise ShapeError("f, g and h must share grid and dimension")


def normalize_decomposition(
    f: SampledSignal, g: SampledSignal, h: SampledSignal, kind: Optional[NormKind] = None
) -> DecompositionResult:
    """Replace ``(g, h)`` by ``(P_R g, f - P_R g)`` with ``R`` the grid sup of ``f``.

    All invariants are re-checked before returning; a violation raises
    :class:`NumericalInvariantError`.  The pointwise bound on ``h*`` is checked
    against ``2 ||h|| + 2 ||f - g - h||`` so that the tolerated mismatch of the
    input decomposition does not count as a violation.
    """
    _check_inputs(f, g, h)
    kind = kind or f.norm_kind
    F, G, H = f.values, g.values, h.values
    mismatch = norms(F - G - H, kind)
    if mismatch.max() > CONSISTENCY_TOL:
        raise InconsistentDecompositionError(
            f"f differs from g + h by {mismatch.max():.3e} > {CONSISTENCY_TOL:g}"
        )
    nf = norms(F, kind)
    R = float(nf.max())
    G_star = retract_rows(G, R, kind)
    H_star = F - G_star

    recon = float(norms(F - (G_star + H_star), kind).max())
    sup_g = float(norms(G_star, kind).max())
    nh = norms(H, kind)
    nh_star = norms(H_star, kind)
    excess = nh_star - 2.0 * nh - 2.0 * mismatch
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(nh > 0, nh_star / np.where(nh > 0, nh, 1.0), 0.0)
    scale = max(1.0, R)
    bounds = {
        "sup_f": R,
        "sup_g_star": sup_g,
        "reconstruction_residual": recon,
        "factor2_max_ratio": float(ratios.max()),
        "factor2_max_excess": float(excess.max()),
        "input_mismatch": float(mismatch.max()),
    }
    if recon > EXACT_TOL * scale:
        raise NumericalInvariantError(f"reconstruction residual {recon:.3e}")
    if sup_g > R + EXACT_TOL * scale:
        raise NumericalInvariantError(f"sup ||g*|| = {sup_g!r} exceeds R = {R!r}")
    if excess.max() > EXACT_TOL * scale:
        raise NumericalInvariantError(f"pointwise factor-2 bound violated by {excess.max():.3e}")
    return DecompositionResult(g.with_values(G_star), f.with_values(H_star), R, bounds)


@dataclass
class PAPReport:
    verdict: str
    mode: str
    decomposition: dict
    periodic_part: dict
    profile_h: ErgodicProfile
    profile_h_star: ErgodicProfile
    mean_transfer: dict

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "decomposition": self.decomposition,
            "periodic_part": self.periodic_part,
            "profile_h": self.profile_h.to_dict(),
            "profile_h_star": self.profile_h_star.to_dict(),
            "mean_transfer": self.mean_transfer,
        }


def validate_pap_candidate(
    f: SampledSignal,
    g: SampledSignal,
    h: SampledSignal,
    weight_or_measure: Union[WeightSeq, MeasureDensity],
    epsilon: float,
    radii: Sequence[float],
    threshold: float = DEFAULT_THRESHOLD,
    min_decay_ratio: float = DEFAULT_DECAY,
    mode: str = "ap",
    shifts: Optional[Sequence[float]] = None,
    tol: Optional[float] = None,
    kind: Optional[NormKind] = None,
    **probe_kwargs,
) -> PAPReport:
    """Check a candidate ``f = g + h`` with ``g`` almost periodic (``mode='ap'``)
    or almost automorphic (``mode='aa'``) and ``h`` ergodic.

    The decomposition is normalised first; the periodic part is probed on
    ``g*`` and the ergodic profile is taken of ``h*``.  The joint verdict is
    ``accepted`` when both sub-verdicts accept, ``rejected`` when either one
    rejects (``rejected`` / ``not_ergodic``), ``inconclusive`` otherwise.
    """
    if mode not in ("ap", "aa"):
        raise InvalidInputError(f"mode must be 'ap' or 'aa', got {mode!r}")
    dec = normalize_decomposition(f, g, h, kind)
    if mode == "ap":
        probe = ap_probe(dec.g_star, epsilon, **probe_kwargs)
    else:
        if shifts is None:
            raise InvalidInputError("the aa mode needs a list of shifts")
        probe = aa_probe(dec.g_star, shifts, tol if tol is not None else epsilon, **probe_kwargs)

    prof_h = ergodicity_profile(h, weight_or_measure, radii, threshold, min_decay_ratio)
    prof_hs = ergodicity_profile(dec.h_star, weight_or_measure, radii, threshold, min_decay_ratio)
    # the mean of ||f - g - h|| enters through the pointwise slack of the factor-2 bound
    slack = 2.0 * dec.bounds["input_mismatch"]
    excess = [float(b - 2.0 * a - slack) for a, b in zip(prof_h.means, prof_hs.means)]
    transfer_ok = max(excess) <= EXACT_TOL * max(1.0, dec.R)
    if not transfer_ok:
        raise NumericalInvariantError(f"mean(h*) exceeds 2 mean(h) by {max(excess):.3e}")

    if probe.verdict == "accepted" and prof_hs.verdict == "ergodic_consistent":
        verdict = "accepted"
    elif probe.verdict == "rejected" or prof_hs.verdict == "not_ergodic":
        verdict = "rejected"
    else:
        verdict = "inconclusive"
    return PAPReport(
        verdict=verdict,
        mode=mode,
        decomposition=dec.summary(),
        periodic_part=probe.to_dict(),
        profile_h=prof_h,
        profile_h_star=prof_hs,
        mean_transfer={"max_excess": max(excess), "holds": transfer_ok},
    )
