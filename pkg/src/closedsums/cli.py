"""Command-line front end.

Every subcommand writes one JSON report (schema 1) with the digests of its
inputs, the parameters it ran with, the results and an invariant ledger.
``--format csv`` writes the tabular part of the result instead (profile
curves, vectors, translation numbers) for plotting.

Exit codes: 0 success, 2 invalid input, 3 numerical invariant violated,
4 inconclusive verdict under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from . import io
from .decomposition import normalize_decomposition, validate_pap_candidate
from .ergodic import c0_probe, ergodicity_profile
from .errors import ClosedSumsError, InvalidInputError, NumericalInvariantError
from .generators import alternating_example, gen_ergodic_noise, gen_trig_polynomial
from .normed import EXACT_TOL, NormKind, dunkl_williams_slack, norm, radial_retraction
from .probes import aa_probe, ap_probe
from .signals import Grid, MeasureDensity, SampledSignal
from .stochastic import equivalence_check, l2_norm_at, scaled_gaussian
from .subspaces import (
    GraphOperator,
    Subspace,
    graph_range_constant,
    min_norm_preimage,
    quotient_norm,
    range_constant,
    sum_constant,
)

SCHEMA = 1
SEED_ENV = "CLOSEDSUMS_SEED"
EXIT_OK, EXIT_INVALID, EXIT_INVARIANT, EXIT_INCONCLUSIVE = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    """Argument errors become :class:`InvalidInputError` so they are reported as JSON."""

    def error(self, message):
        raise InvalidInputError(f"{self.prog}: {message}")


class Ledger:
    """Pass/fail record of the invariants a command exercised."""

    def __init__(self):
        self.items = []

    def check(self, name: str, passed: bool, **detail):
        self.items.append({"name": name, "passed": bool(passed), **detail})

    @property
    def ok(self) -> bool:
        return all(item["passed"] for item in self.items)


class Run:
    def __init__(self, args):
        self.args = args
        self.inputs = {}
        self.parameters = {}
        self.results = {}
        self.table = None  # (header, rows) for --format csv
        self.ledger = Ledger()
        self.verdict: Optional[str] = None

    def input(self, name, path):
        if path is None:
            return None
        self.inputs[name] = {"path": str(path), "sha256": io.sha256_file(path)}
        return path


def _floats(text: str):
    try:
        return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise InvalidInputError(f"cannot parse number list {text!r}") from None


def _radii(text: str):
    radii = _floats(text)
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
        raise InvalidInputError("radii must be a nonempty increasing list")
    return radii


def _positive(name, value):
    if not (value > 0):
        raise InvalidInputError(f"{name} must be positive")
    return value


def _measure_arg(run: Run, spec: str, side: str) -> MeasureDensity:
    if spec in ("lebesgue", "lebesgue-line"):
        return MeasureDensity.lebesgue("line" if spec == "lebesgue-line" else side)
    if spec == "lebesgue-half":
        return MeasureDensity.lebesgue("half_line")
    return io.read_measure(run.input("measure", spec), side)


def _weight_or_measure(run: Run):
    a = run.args
    if a.weights and a.measure:
        raise InvalidInputError("give either --weights or --measure, not both")
    if a.weights:
        return io.read_weights(run.input("weights", a.weights))
    if a.measure:
        return _measure_arg(run, a.measure, a.side)
    raise InvalidInputError("need --weights or --measure")


def _norm(run: Run) -> NormKind:
    kind = NormKind.parse(run.args.norm)
    run.parameters["norm"] = kind.label()
    return kind


def _signal(run: Run, name: str, path, kind: Optional[NormKind] = None) -> SampledSignal:
    return io.read_signal(run.input(name, path), kind)


# ---------------------------------------------------------------- handlers


def cmd_retract(run: Run):
    a = run.args
    kind = _norm(run)
    R = float(a.radius)
    run.parameters["radius"] = R
    x = io.read_vector(run.input("x", a.input))
    y = radial_retraction(x, R, kind)
    run.results.update(x=x, retracted=y, norm_x=norm(x, kind), norm_retracted=norm(y, kind))
    run.ledger.check("retraction_norm_bound", norm(y, kind) <= R + EXACT_TOL, value=norm(y, kind), bound=R)
    yy = radial_retraction(y, R, kind)
    run.ledger.check("retraction_idempotent", float(np.max(np.abs(yy - y))) <= EXACT_TOL)
    run.table = (["i", "x", "retracted"], [[i, xi, yi] for i, (xi, yi) in enumerate(zip(x, y))])


def cmd_dunkl_williams(run: Run):
    a = run.args
    kind = _norm(run)
    x1 = io.read_vector(run.input("x1", a.x1))
    x2 = io.read_vector(run.input("x2", a.x2))
    s = dunkl_williams_slack(x1, x2, kind)
    run.results.update(slack=s)
    run.ledger.check("dunkl_williams_nonnegative", s >= -EXACT_TOL, value=s)
    run.table = (["slack"], [[s]])


def _constant_checks(run: Run, rep):
    run.results["report"] = rep.to_dict()
    run.ledger.check("constant_positive", rep.constant_c > 0, value=rep.constant_c)


def cmd_range_constant(run: Run):
    L = io.read_matrix(run.input("matrix", run.args.matrix))
    rep = range_constant(L)
    _constant_checks(run, rep)
    y = np.asarray(rep.witness["y"])
    x = min_norm_preimage(L, y)
    ratio = np.linalg.norm(x) / np.linalg.norm(y)
    run.ledger.check("witness_attains_constant", abs(ratio - rep.constant_c) <= 1e-6 * rep.constant_c, ratio=ratio)
    run.table = (["constant_c"], [[rep.constant_c]])


def cmd_graph_constant(run: Run):
    a = run.args
    A = io.read_matrix(run.input("matrix", a.matrix))
    if a.domain:
        domain = Subspace.span(io.read_matrix(run.input("domain", a.domain)), ambient_dim=A.shape[1])
    else:
        domain = Subspace.full(A.shape[1])
    T = GraphOperator.from_ambient(domain, A)
    rep = graph_range_constant(T)
    _constant_checks(run, rep)
    run.ledger.check("d_equals_c_plus_1", abs(rep.d - (rep.constant_c + 1.0)) <= EXACT_TOL, d=rep.d)
    run.table = (["constant_c", "d"], [[rep.constant_c, rep.d]])


def cmd_sum_constant(run: Run):
    a = run.args
    kind = _norm(run)
    BM = io.read_matrix(run.input("m", a.m))
    BN = io.read_matrix(run.input("n", a.n))
    d = BM.shape[1]
    M = Subspace.span(BM, ambient_dim=d)
    N = Subspace.span(BN, ambient_dim=d)
    run.parameters.update(method=a.method, seed=a.seed)
    rep = sum_constant(M, N, method=a.method, kind=kind, seed=a.seed)
    _constant_checks(run, rep)
    z, x, y = (np.asarray(rep.witness[k]) for k in ("z", "x", "y"))
    nz = norm(z, kind)
    run.ledger.check("witness_x_in_M", M.residual(x) <= 1e-10, residual=M.residual(x))
    run.ledger.check("witness_y_in_N", N.residual(y) <= 1e-10, residual=N.residual(y))
    run.ledger.check("witness_ratio", abs(norm(x, kind) / nz - rep.constant_c) <= 1e-6 * max(1.0, rep.constant_c))
    run.ledger.check("two_sided_bound", norm(y, kind) <= rep.d * nz + 1e-12, y_norm=norm(y, kind), bound=rep.d * nz)
    run.table = (["constant_c", "d"], [[rep.constant_c, rep.d]])


def cmd_quotient_norm(run: Run):
    L = io.read_matrix(run.input("matrix", run.args.matrix))
    x = io.read_vector(run.input("x", run.args.input))
    q = quotient_norm(L, x)
    run.results.update(quotient_norm=q, norm_x=float(np.linalg.norm(x)))
    run.ledger.check("quotient_at_most_norm", q <= np.linalg.norm(x) + EXACT_TOL)
    run.table = (["quotient_norm"], [[q]])


def _profile_checks(run: Run, sig: SampledSignal, prof, label="profile"):
    sup = sig.sup_norm()
    lo = min(prof.means)
    hi = max(prof.means)
    run.ledger.check(f"{label}_means_nonnegative", lo >= 0, min=lo)
    run.ledger.check(f"{label}_means_below_sup", hi <= sup + EXACT_TOL * max(1.0, sup), max=hi, sup=sup)


def cmd_ergodic(run: Run):
    a = run.args
    kind = _norm(run)
    sig = _signal(run, "signal", a.signal, kind)
    wm = _weight_or_measure(run)
    radii = _radii(a.radii)
    run.parameters.update(radii=radii, threshold=a.threshold, min_decay_ratio=a.min_decay)
    prof = ergodicity_profile(sig, wm, radii, a.threshold, a.min_decay)
    run.results["profile"] = prof.to_dict()
    _profile_checks(run, sig, prof)
    run.verdict = prof.verdict
    run.table = (["r", "mean"], [[r, m] for r, m in zip(prof.radii, prof.means)])


def cmd_ap_probe(run: Run):
    a = run.args
    kind = _norm(run)
    sig = _signal(run, "signal", a.signal, kind)
    run.parameters.update(epsilon=a.epsilon, max_fraction=a.max_fraction, min_overlap=a.min_overlap)
    res = ap_probe(sig, _positive("epsilon", a.epsilon), a.max_fraction, a.min_overlap)
    run.results["probe"] = res.to_dict()
    run.ledger.check("translation_numbers_reverified", res.max_reported_defect < res.epsilon,
                     max_defect=res.max_reported_defect)
    run.verdict = res.verdict
    run.table = (["tau"], [[tau] for tau in res.translation_numbers])


def _shifts(run: Run):
    a = run.args
    if a.shifts_file:
        return list(io.read_vector(run.input("shifts", a.shifts_file)))
    if a.shifts:
        return _floats(a.shifts)
    raise InvalidInputError("need --shifts or --shifts-file")


def cmd_aa_probe(run: Run):
    a = run.args
    kind = _norm(run)
    sig = _signal(run, "signal", a.signal, kind)
    shifts = _shifts(run)
    run.parameters.update(shifts=shifts, tol=a.tol, window=a.window)
    res = aa_probe(sig, shifts, _positive("tol", a.tol), a.window)
    run.results["probe"] = res.to_dict()
    if res.forward_increments:
        run.ledger.check("subsequence_cauchy_within_tol", res.max_forward_residual <= a.tol,
                         value=res.max_forward_residual)
    run.verdict = res.verdict
    run.table = (
        ["shift", "forward_increment", "backward_residual"],
        [[s, (res.forward_increments[i - 1] if 0 < i <= len(res.forward_increments) else ""),
          (res.backward_residuals[i] if i < len(res.backward_residuals) else "")]
         for i, s in enumerate(res.subsequence)],
    )


def cmd_c0_probe(run: Run):
    a = run.args
    sig = _signal(run, "signal", a.signal, _norm(run))
    run.parameters.update(threshold=a.threshold, tail_fraction=a.tail_fraction)
    res = c0_probe(sig, a.threshold, a.tail_fraction)
    run.results["probe"] = res.to_dict()
    run.verdict = res.verdict
    run.table = (["block", "sup"], [[i, b] for i, b in enumerate(res.block_sups)])


def _fgh(run: Run, kind):
    a = run.args
    f = _signal(run, "f", a.f, kind)
    g = _signal(run, "g", a.g, kind)
    h = _signal(run, "h", a.h, kind) if a.h else f - g
    return f, g, h


def cmd_decompose(run: Run):
    a = run.args
    kind = _norm(run)
    f, g, h = _fgh(run, kind)
    dec = normalize_decomposition(f, g, h, kind)
    run.results["decomposition"] = dec.summary()
    b = dec.bounds
    scale = max(1.0, dec.R)
    run.ledger.check("exact_reconstruction", b["reconstruction_residual"] <= EXACT_TOL * scale,
                     value=b["reconstruction_residual"])
    run.ledger.check("sup_norm_bound", b["sup_g_star"] <= dec.R + EXACT_TOL * scale, value=b["sup_g_star"], R=dec.R)
    run.ledger.check("pointwise_factor_2", b["factor2_max_excess"] <= EXACT_TOL * scale, value=b["factor2_max_excess"])
    again = normalize_decomposition(f, dec.g_star, dec.h_star, kind)
    drift = float(np.max(np.abs(again.g_star.values - dec.g_star.values)))
    run.ledger.check("renormalisation_idempotent", drift <= EXACT_TOL * scale, value=drift)
    for path, sig, name in ((a.g_star_out, dec.g_star, "g_star"), (a.h_star_out, dec.h_star, "h_star")):
        if path:
            io.write_signal_csv(path, sig)
            run.results.setdefault("outputs", {})[name] = {"path": str(path), "sha256": io.sha256_file(path)}
    nh = dec.h_star.norms()
    run.table = (
        ["t", "norm_g_star", "norm_h_star"],
        [[t, ng, nhs] for t, ng, nhs in zip(f.t, dec.g_star.norms(), nh)],
    )


def cmd_validate_pap(run: Run):
    a = run.args
    kind = _norm(run)
    f, g, h = _fgh(run, kind)
    wm = _weight_or_measure(run)
    radii = _radii(a.radii)
    shifts = _shifts(run) if a.mode == "aa" else None
    run.parameters.update(epsilon=a.epsilon, radii=radii, threshold=a.threshold,
                          min_decay_ratio=a.min_decay, mode=a.mode, tol=a.tol, shifts=shifts)
    rep = validate_pap_candidate(f, g, h, wm, _positive("epsilon", a.epsilon), radii, a.threshold,
                                 a.min_decay, a.mode, shifts, a.tol, kind)
    run.results["validation"] = rep.to_dict()
    run.ledger.check("mean_transfer_factor_2", rep.mean_transfer["holds"], value=rep.mean_transfer["max_excess"])
    run.verdict = rep.verdict
    run.table = (
        ["r", "mean_h", "mean_h_star"],
        [[r, m1, m2] for r, m1, m2 in zip(radii, rep.profile_h.means, rep.profile_h_star.means)],
    )


def _ensemble(run: Run):
    a = run.args
    if a.ensemble:
        return io.read_ensemble(run.input("ensemble", a.ensemble), a.seed)
    grid = Grid.line(a.r_max, a.step)
    run.parameters.update(model=a.model, K=a.K, r_max=a.r_max, step=a.step, seed=a.seed)
    if a.model == "gaussian-exp":
        return scaled_gaussian(grid, lambda t: np.exp(-np.abs(t)), a.K, a.seed)
    if a.model == "gaussian-sin":
        return scaled_gaussian(grid, np.sin, a.K, a.seed)
    raise InvalidInputError(f"unknown model {a.model!r}")


def cmd_stochastic(run: Run):
    a = run.args
    x = _ensemble(run)
    mu = _measure_arg(run, a.measure or "lebesgue", a.side)
    radii = _radii(a.radii)
    run.parameters.update(radii=radii, threshold=a.threshold, min_decay_ratio=a.min_decay)
    rep = equivalence_check(x, mu, radii, a.threshold, a.min_decay, strict=False)
    run.results["equivalence"] = rep.to_dict()
    run.ledger.check("cauchy_schwarz_direction", rep.cauchy_schwarz_violation <= 1e-10,
                     value=rep.cauchy_schwarz_violation)
    run.ledger.check("bounded_direction", rep.bounded_violation <= 1e-10, value=rep.bounded_violation)
    if a.at:
        run.results["l2_norm_at"] = {repr(t): l2_norm_at(x, t) for t in _floats(a.at)}
    run.verdict = "inconclusive" if not rep.verdicts_agree else rep.verdict_squared
    run.table = (
        ["r", "squared", "root", "mc_stderr_squared", "mc_stderr_root"],
        [list(row) for row in zip(radii, rep.squared, rep.root, rep.mc_stderr_squared, rep.mc_stderr_root)],
    )


def _envelope(name: str):
    if name == "exp":
        return lambda t: np.exp(-np.abs(t))
    if name == "harmonic":
        return lambda t: 1.0 / (1.0 + np.abs(t))
    if name == "zero":
        return lambda t: np.zeros_like(t)
    if name == "odd":
        return lambda t: (np.round(t) % 2 != 0).astype(float)
    raise InvalidInputError(f"unknown envelope {name!r}")


def _gen_grid(a) -> Grid:
    if a.N is not None:
        return Grid.z_window(a.N)
    return Grid.line(a.r_max, a.step)


def cmd_generate(run: Run):
    a = run.args
    outputs = {}
    run.parameters.update(kind=a.kind, seed=a.seed)
    if a.kind == "trig":
        grid = _gen_grid(a)
        freqs = _floats(a.freqs) if a.freqs else []
        cos_c = _floats(a.cos) if a.cos else [0.0] * len(freqs)
        sin_c = _floats(a.sin) if a.sin else [1.0] * len(freqs)
        if not (len(cos_c) == len(sin_c) == len(freqs)):
            raise InvalidInputError("--cos and --sin need one coefficient per frequency")
        run.parameters.update(freqs=freqs, cos=cos_c, sin=sin_c, grid=grid.to_dict())
        sig = gen_trig_polynomial(freqs, list(zip(cos_c, sin_c)), grid)
        io.write_signal_csv(a.signal_out, sig)
        outputs["signal"] = a.signal_out
    elif a.kind == "noise":
        grid = _gen_grid(a)
        run.parameters.update(envelope=a.envelope, dim=a.dim, grid=grid.to_dict())
        sig = gen_ergodic_noise(grid, _envelope(a.envelope), a.seed, a.dim)
        io.write_signal_csv(a.signal_out, sig)
        outputs["signal"] = a.signal_out
    elif a.kind == "alternating":
        if a.N is None:
            raise InvalidInputError("the alternating example needs --N")
        u, p = alternating_example(a.N)
        run.parameters["N"] = a.N
        io.write_signal_csv(a.signal_out, u)
        outputs["signal"] = a.signal_out
        if a.weights_out:
            io.write_weights_csv(a.weights_out, p)
            outputs["weights"] = a.weights_out
    elif a.kind == "ensemble":
        x = _ensemble(run)
        io.write_ensemble_csv(a.ensemble_out, x)
        outputs["ensemble"] = a.ensemble_out
    else:
        raise InvalidInputError(f"unknown generator {a.kind!r}")
    run.results["outputs"] = {k: {"path": str(v), "sha256": io.sha256_file(v)} for k, v in outputs.items()}
    run.table = (["output", "path"], [[k, v] for k, v in outputs.items()])


# ---------------------------------------------------------------- parser


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", "-o", help="report path (default: standard output)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--strict", action="store_true", help="exit 4 on an inconclusive verdict")
    common.add_argument("--seed", type=int, default=_default_seed(), help=f"default from ${SEED_ENV}")
    common.add_argument("--norm", default="euclidean", help="euclidean | sup | 1 | p=3 ...")

    ergo = argparse.ArgumentParser(add_help=False)
    ergo.add_argument("--weights")
    ergo.add_argument("--measure", help="JSON/CSV measure file, or lebesgue / lebesgue-half")
    ergo.add_argument("--side", choices=("line", "half_line"), default="line")
    ergo.add_argument("--radii", default="10,100,1000")
    ergo.add_argument("--threshold", type=float, default=1e-2)
    ergo.add_argument("--min-decay", type=float, default=0.5)

    shifts = argparse.ArgumentParser(add_help=False)
    shifts.add_argument("--shifts", help="comma-separated shifts")
    shifts.add_argument("--shifts-file")

    fgh = argparse.ArgumentParser(add_help=False)
    fgh.add_argument("--f", required=True)
    fgh.add_argument("--g", required=True)
    fgh.add_argument("--h", help="defaults to f - g")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--ensemble", help="ensemble CSV (t,draw_id,x1..xd)")
    model.add_argument("--model", default="gaussian-exp", choices=("gaussian-exp", "gaussian-sin"))
    model.add_argument("--K", type=int, default=100_000)
    model.add_argument("--r-max", type=float, default=200.0)
    model.add_argument("--step", type=float, default=0.05)

    p = _Parser(prog="closedsums", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("retract", parents=[common])
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--radius", type=float, required=True)
    s.set_defaults(handler=cmd_retract)

    s = sub.add_parser("dunkl-williams", parents=[common])
    s.add_argument("--x1", required=True)
    s.add_argument("--x2", required=True)
    s.set_defaults(handler=cmd_dunkl_williams)

    s = sub.add_parser("range-constant", parents=[common])
    s.add_argument("--matrix", required=True)
    s.set_defaults(handler=cmd_range_constant)

    s = sub.add_parser("graph-constant", parents=[common])
    s.add_argument("--matrix", required=True, help="action as an ambient m x n matrix")
    s.add_argument("--domain", help="spanning vectors of the domain (rows); default all of R^n")
    s.set_defaults(handler=cmd_graph_constant)

    s = sub.add_parser("sum-constant", parents=[common])
    s.add_argument("--m", required=True)
    s.add_argument("--n", required=True)
    s.add_argument("--method", choices=("auto", "closed_form", "sampled"), default="auto")
    s.set_defaults(handler=cmd_sum_constant)

    s = sub.add_parser("quotient-norm", parents=[common])
    s.add_argument("--matrix", required=True)
    s.add_argument("--in", dest="input", required=True)
    s.set_defaults(handler=cmd_quotient_norm)

    s = sub.add_parser("ergodic", parents=[common, ergo])
    s.add_argument("--signal", required=True)
    s.set_defaults(handler=cmd_ergodic)

    s = sub.add_parser("ap-probe", parents=[common])
    s.add_argument("--signal", required=True)
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--max-fraction", type=float, default=0.25)
    s.add_argument("--min-overlap", type=float, default=0.5)
    s.set_defaults(handler=cmd_ap_probe)

    s = sub.add_parser("aa-probe", parents=[common, shifts])
    s.add_argument("--signal", required=True)
    s.add_argument("--tol", type=float, required=True)
    s.add_argument("--window", type=float)
    s.set_defaults(handler=cmd_aa_probe)

    s = sub.add_parser("c0-probe", parents=[common])
    s.add_argument("--signal", required=True)
    s.add_argument("--threshold", type=float, default=1e-3)
    s.add_argument("--tail-fraction", type=float, default=0.2)
    s.set_defaults(handler=cmd_c0_probe)

    s = sub.add_parser("decompose", parents=[common, fgh])
    s.add_argument("--g-star-out")
    s.add_argument("--h-star-out")
    s.set_defaults(handler=cmd_decompose)

    s = sub.add_parser("validate-pap", parents=[common, fgh, ergo, shifts])
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--mode", choices=("ap", "aa"), default="ap")
    s.add_argument("--tol", type=float)
    s.set_defaults(handler=cmd_validate_pap)

    s = sub.add_parser("stochastic", parents=[common, model])
    s.add_argument("--measure", help="JSON/CSV measure file, or lebesgue (default)")
    s.add_argument("--side", choices=("line", "half_line"), default="line")
    s.add_argument("--radii", default="1,10,100,200")
    s.add_argument("--threshold", type=float, default=1e-2)
    s.add_argument("--min-decay", type=float, default=0.5)
    s.add_argument("--at", help="times at which to report the L2 norm")
    s.set_defaults(handler=cmd_stochastic)

    s = sub.add_parser("generate", parents=[common, model])
    s.add_argument("kind", choices=("trig", "noise", "alternating", "ensemble"))
    s.add_argument("--N", type=int, help="Z-window half-width (integer-indexed output)")
    s.add_argument("--freqs")
    s.add_argument("--cos")
    s.add_argument("--sin")
    s.add_argument("--envelope", default="exp", choices=("exp", "harmonic", "zero", "odd"))
    s.add_argument("--dim", type=int, default=1)
    s.add_argument("--signal-out", default="signal.csv")
    s.add_argument("--weights-out")
    s.add_argument("--ensemble-out", default="ensemble.csv")
    s.set_defaults(handler=cmd_generate)
    return p


def _report(run: Run) -> dict:
    return {
        "schema": SCHEMA,
        "command": run.args.command,
        "inputs": run.inputs,
        "parameters": run.parameters,
        "results": run.results,
        "invariants": run.ledger.items,
        "invariants_ok": run.ledger.ok,
        "verdict": run.verdict,
    }


def _csv_text(run: Run) -> str:
    header, rows = run.table if run.table else (["key", "value"], [])

    def cell(v):
        if isinstance(v, str):
            return v
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            return str(int(v))
        return repr(float(v))

    return "\n".join([",".join(header)] + [",".join(cell(v) for v in row) for row in rows]) + "\n"


def _error(exc: BaseException, code: int) -> int:
    payload = {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except InvalidInputError as exc:
        return _error(exc, EXIT_INVALID)
    run = Run(args)
    try:
        args.handler(run)
    except NumericalInvariantError as exc:
        return _error(exc, EXIT_INVARIANT)
    except (ClosedSumsError, ValueError, OSError, KeyError) as exc:
        return _error(exc, EXIT_INVALID)

    text = _csv_text(run) if args.format == "csv" else io.dumps_report(_report(run))
    if args.out:
        io.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    if not run.ledger.ok:
        failed = [item["name"] for item in run.ledger.items if not item["passed"]]
        return _error(NumericalInvariantError(f"invariants failed: {', '.join(failed)}"), EXIT_INVARIANT)
    if args.strict and run.verdict == "inconclusive":
        return _error(InvalidInputError("verdict is inconclusive and --strict was given"), EXIT_INCONCLUSIVE)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
