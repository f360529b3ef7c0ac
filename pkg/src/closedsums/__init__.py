"""Bounded decompositions via radial retraction, closed-range and closed-sum
constants, and ergodic / almost periodic analysis of sampled signals and
Monte Carlo processes."""

from .decomposition import DecompositionResult, normalize_decomposition, validate_pap_candidate
from .ergodic import (
    ErgodicProfile,
    c0_probe,
    ergodic_mean_discrete,
    ergodic_mean_measure,
    ergodicity_profile,
    restrict_to_halfline,
    restrict_to_integers,
)
from .errors import ClosedSumsError, InvalidInputError, NumericalInvariantError
from .generators import alternating_example, gen_ergodic_noise, gen_trig_polynomial
from .normed import EUCLIDEAN, NormKind, dunkl_williams_slack, norm, radial_retraction
from .probes import aa_probe, ap_probe, translation_defect
from .signals import Grid, MeasureDensity, SampledSignal, WeightSeq
from .stochastic import (
    ProcessEnsemble,
    equivalence_check,
    l2_norm_at,
    reduce_to_signal,
    scaled_gaussian,
    sm_ergodic_mean,
)
from .subspaces import (
    ConstantReport,
    GraphOperator,
    Subspace,
    graph_norm,
    graph_range_constant,
    min_norm_preimage,
    quotient_norm,
    range_constant,
    sum_constant,
)

__version__ = "0.1.0"

__all__ = [
    "ClosedSumsError",
    "ConstantReport",
    "DecompositionResult",
    "EUCLIDEAN",
    "ErgodicProfile",
    "GraphOperator",
    "Grid",
    "InvalidInputError",
    "MeasureDensity",
    "NormKind",
    "NumericalInvariantError",
    "ProcessEnsemble",
    "SampledSignal",
    "Subspace",
    "WeightSeq",
    "aa_probe",
    "alternating_example",
    "ap_probe",
    "c0_probe",
    "dunkl_williams_slack",
    "equivalence_check",
    "ergodic_mean_discrete",
    "ergodic_mean_measure",
    "ergodicity_profile",
    "gen_ergodic_noise",
    "gen_trig_polynomial",
    "graph_norm",
    "graph_range_constant",
    "l2_norm_at",
    "min_norm_preimage",
    "norm",
    "normalize_decomposition",
    "quotient_norm",
    "radial_retraction",
    "range_constant",
    "reduce_to_signal",
    "restrict_to_halfline",
    "restrict_to_integers",
    "scaled_gaussian",
    "sm_ergodic_mean",
    "sum_constant",
    "translation_defect",
    "validate_pap_candidate",
]
