import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from closedsums.ergodic import (
    c0_probe,
    classify_profile,
    ergodic_mean_discrete,
    ergodic_mean_measure,
    ergodicity_profile,
    restrict_to_halfline,
    restrict_to_integers,
)
from closedsums.errors import DegenerateInputError, GridAlignmentError, InvalidInputError, OutOfRangeError
from closedsums.generators import (
    alternating_example,
    gen_ergodic_noise,
    gen_trig_polynomial,
    random_trig_polynomial,
)
from closedsums.probes import ap_probe
from closedsums.signals import Grid, MeasureDensity, SampledSignal, WeightSeq

HARMONIC_MEAN_100 = 0.0467390896292401  # (2 H_101 - 1) / 201, exact rational arithmetic


def _seq(values):
    N = (len(values) - 1) // 2
    return SampledSignal(Grid.z_window(N), np.asarray(values, dtype=float))


# ---------------------------------------------------------------- discrete means


def test_alternating_means_are_zero():
    u, p = alternating_example(50)
    assert all(ergodic_mean_discrete(u, p, N) == 0.0 for N in range(1, 51))


def test_constant_sequence_mean():
    u = _seq(np.full(21, 2.5))
    assert ergodic_mean_discrete(u, WeightSeq.constant(10), 7) == pytest.approx(2.5, abs=1e-15)


def test_harmonic_mean_vs_exact_sum():
    n = np.arange(-100, 101)
    u = _seq(1.0 / (1.0 + np.abs(n)))
    oracle = (2 * sum(Fraction(1, k) for k in range(1, 102)) - 1) / 201
    assert float(oracle) == HARMONIC_MEAN_100
    assert ergodic_mean_discrete(u, WeightSeq.constant(100), 100) == pytest.approx(HARMONIC_MEAN_100, abs=1e-12)


def test_zero_weight_window():
    u = _seq(np.ones(5))
    with pytest.raises(DegenerateInputError):
        ergodic_mean_discrete(u, WeightSeq(2, [1, 0, 0, 0, 1]), 1)


def test_window_beyond_signal():
    with pytest.raises(OutOfRangeError):
        ergodic_mean_discrete(_seq(np.ones(5)), WeightSeq.constant(10), 3)


# ---------------------------------------------------------------- measure means


def test_measure_mean_of_zero():
    f = SampledSignal(Grid.line(5, 0.1), np.zeros(101))
    assert ergodic_mean_measure(f, MeasureDensity.lebesgue(), 3.0) == 0.0


def test_measure_mean_of_decaying_exponential():
    f = SampledSignal.from_function(Grid.line(100, 1e-3), lambda t: np.exp(-np.abs(t)))
    for r in (1.0, 10.0, 100.0):
        assert ergodic_mean_measure(f, MeasureDensity.lebesgue(), r) == pytest.approx((1 - math.exp(-r)) / r, abs=1e-6)


def test_integer_atoms_reproduce_discrete_mean(rng):
    grid = Grid.line(20, 0.25)
    f = SampledSignal(grid, rng.standard_normal((grid.size, 2)))
    u = restrict_to_integers(f)
    mu = MeasureDensity.integer_atoms(20)
    for N in (1, 5, 20):
        assert ergodic_mean_measure(f, mu, N) == pytest.approx(ergodic_mean_discrete(u, WeightSeq.constant(20), N), abs=1e-12)


def test_half_line_mean():
    f = SampledSignal.from_function(Grid.half_line(20, 1e-3), lambda t: np.exp(-t))
    r = 5.0
    mean = ergodic_mean_measure(f, MeasureDensity.lebesgue("half_line"), r)
    assert mean == pytest.approx((1 - math.exp(-r)) / r, abs=1e-6)


def test_off_grid_radius_interpolates():
    f = SampledSignal.from_function(Grid.line(10, 0.01), lambda t: np.ones_like(t))
    assert ergodic_mean_measure(f, MeasureDensity.lebesgue(), 3.14159) == pytest.approx(1.0, abs=1e-12)


def test_measure_errors():
    f = SampledSignal(Grid.line(5, 0.5), np.ones(21))
    with pytest.raises(OutOfRangeError):
        ergodic_mean_measure(f, MeasureDensity.lebesgue(), 6.0)
    with pytest.raises(DegenerateInputError):
        ergodic_mean_measure(f, MeasureDensity(0.0), 1.0)
    g = SampledSignal(Grid.half_line(5, 0.5), np.ones(11))
    with pytest.raises(OutOfRangeError):
        ergodic_mean_measure(g, MeasureDensity.lebesgue("line"), 1.0)


def test_measure_dict_roundtrip():
    mu = MeasureDensity((np.array([-1.0, 0.0, 2.0]), np.array([1.0, 2.0, 0.5])), [(0.5, 3.0)], "line")
    back = MeasureDensity.from_dict(mu.to_dict())
    t = np.linspace(-3, 3, 13)
    assert np.array_equal(back.density_at(t), mu.density_at(t)) and back.atoms == mu.atoms


# ---------------------------------------------------------------- profiles


def test_profile_examples():
    u, p = alternating_example(1000)
    assert ergodicity_profile(u, p, [10, 100, 1000]).verdict == "ergodic_consistent"
    one = _seq(np.ones(2001))
    prof = ergodicity_profile(one, WeightSeq.constant(1000), [10, 100, 1000])
    assert prof.means == [1.0, 1.0, 1.0] and prof.verdict == "not_ergodic"
    f = SampledSignal.from_function(Grid.line(1000, 0.01), lambda t: np.exp(-np.abs(t)))
    assert ergodicity_profile(f, MeasureDensity.lebesgue(), [1, 10, 100, 1000]).verdict == "ergodic_consistent"


def test_profile_inconclusive_when_slowly_decaying():
    n = np.arange(-1000, 1001)
    u = _seq(1.0 / (1.0 + np.abs(n)))
    prof = ergodicity_profile(u, WeightSeq.constant(1000), [10, 100])
    assert prof.verdict == "inconclusive"


def test_classify_edge_cases():
    assert classify_profile([0.0, 0.0], 1e-2, 0.5)[0] == "ergodic_consistent"
    assert classify_profile([0.0, 1.0], 1e-2, 0.5) == ("inconclusive", -np.inf)


def test_profile_validation():
    u = _seq(np.ones(21))
    with pytest.raises(InvalidInputError):
        ergodicity_profile(u, WeightSeq.constant(10), [5, 3])
    with pytest.raises(InvalidInputError):
        ergodicity_profile(u, WeightSeq.constant(10), [2.5])


# ---------------------------------------------------------------- restrictions


def test_restrict_to_integers_examples(rng):
    grid = Grid.line(50, 0.125)
    c = SampledSignal(grid, np.full(grid.size, 4.0))
    assert np.all(restrict_to_integers(c).values == 4.0)
    s = restrict_to_integers(SampledSignal.from_function(grid, lambda t: np.sin(2 * np.pi * t)))
    assert np.max(np.abs(s.values)) <= 1e-12 * 50
    freqs = rng.uniform(0.1, 3, 3)
    coeffs = [(rng.standard_normal(2), rng.standard_normal(2)) for _ in freqs]
    f = gen_trig_polynomial(freqs, coeffs, grid)
    u = restrict_to_integers(f)
    n = np.arange(-50, 51).astype(float)
    direct = sum(np.outer(np.cos(w * n), a) + np.outer(np.sin(w * n), b) for w, (a, b) in zip(freqs, coeffs))
    assert np.max(np.abs(u.values - direct)) <= 1e-12


def test_restrict_to_integers_alignment():
    with pytest.raises(GridAlignmentError):
        restrict_to_integers(SampledSignal(Grid.line(3, 0.3), np.zeros(21)))


def test_restrict_to_halfline_examples(rng):
    grid = Grid.line(4, 0.5)
    odd = SampledSignal.from_function(grid, lambda t: t ** 3)
    h = restrict_to_halfline(odd)
    assert h.grid.kind == "r_plus_grid" and h.grid.size == 9
    assert np.array_equal(h.values[:, 0], np.arange(9) ** 3 * 0.125)
    rnd = SampledSignal(grid, rng.standard_normal((grid.size, 3)))
    hr = restrict_to_halfline(rnd)
    for t in hr.t:
        assert np.array_equal(hr.value_at(t), rnd.value_at(t))


# ---------------------------------------------------------------- c0 probe


def test_c0_probe_examples():
    grid = Grid.half_line(50, 0.01)
    assert c0_probe(SampledSignal(grid, np.zeros(grid.size))).verdict == "accepted"
    res = c0_probe(SampledSignal.from_function(grid, lambda t: np.exp(-t)), 1e-3, 0.2)
    assert res.verdict == "accepted" and res.tail_sup == pytest.approx(math.exp(-40), rel=1e-9)
    assert c0_probe(SampledSignal(grid, np.ones(grid.size))).verdict == "rejected"


def test_c0_probe_rejects_growing_tail():
    grid = Grid.half_line(10, 0.01)
    bump = SampledSignal.from_function(grid, lambda t: 1e-5 * t)
    assert c0_probe(bump).verdict == "rejected"


# ---------------------------------------------------------------- generators


def test_trig_polynomial_examples():
    grid = Grid.line(20, 0.01)
    one = gen_trig_polynomial([1.3], [([0.6, 0.0], [0.0, 0.8])], grid)
    assert one.sup_norm() <= 0.8 + 1e-12 + 0.6
    assert gen_trig_polynomial([], [], grid).sup_norm() == 0.0
    two = gen_trig_polynomial([1.0, math.sqrt(2)], [(0, 1), (0, 1)], Grid.line(200, 0.01))
    assert ap_probe(two, 0.5).verdict == "accepted"


def test_noise_examples():
    N = 2000
    grid = Grid.z_window(N)
    env = lambda t: 1.0 / (1.0 + np.abs(t))
    u = gen_ergodic_noise(grid, env, seed=4)
    p = WeightSeq.constant(N)
    prof = ergodicity_profile(u, p, [10, 100, 1000, 2000], threshold=1e-2)
    assert all(b < a for a, b in zip(prof.means, prof.means[1:]))
    # never above the harmonic bound of the envelope itself
    for N_, m in zip(prof.radii, prof.means):
        n = np.arange(-int(N_), int(N_) + 1)
        assert m <= np.mean(env(n)) + 1e-15
    zero = gen_ergodic_noise(grid, lambda t: np.zeros_like(t), seed=1)
    assert zero.sup_norm() == 0.0
    _, p_alt = alternating_example(N)
    even_only = gen_ergodic_noise(grid, lambda t: (np.round(t) % 2 == 0).astype(float), seed=2)
    assert all(ergodic_mean_discrete(even_only, p_alt, k) == 0.0 for k in (1, 10, 100, N))


def test_noise_is_seeded_and_bounded():
    grid = Grid.line(10, 0.01)
    env = lambda t: 2.0 * np.exp(-np.abs(t))
    a = gen_ergodic_noise(grid, env, seed=9, dim=3)
    b = gen_ergodic_noise(grid, env, seed=9, dim=3)
    assert np.array_equal(a.values, b.values)
    assert np.all(a.norms() <= env(grid.t) + 1e-15)


def test_noise_profile_check():
    grid = Grid.z_window(100)
    with pytest.raises(InvalidInputError):
        gen_ergodic_noise(grid, lambda t: np.ones_like(t), seed=0,
                          weight_or_measure=WeightSeq.constant(100), radii=[10, 100])


# ---------------------------------------------------------------- properties


@st.composite
def signals(draw):
    seed = draw(st.integers(0, 2**31 - 1))
    rng = np.random.default_rng(seed)
    dim = draw(st.integers(1, 3))
    if draw(st.booleans()):
        grid = Grid.z_window(60)
        wm = WeightSeq(60, rng.uniform(0, 1, grid.size) + (rng.random(grid.size) < 0.1))
        radii = [3, 10, 60]
    else:
        grid = Grid.line(6.0, 0.05)
        wm = MeasureDensity(lambda t: 1.0 + np.sin(t) ** 2, [(0.3, 1.5)])
        radii = [0.77, 2.0, 6.0]
    u = SampledSignal(grid, rng.standard_normal((grid.size, dim)) * rng.uniform(0, 5))
    v = SampledSignal(grid, rng.standard_normal((grid.size, dim)))
    return u, v, wm, radii


def _means(sig, wm, radii):
    if isinstance(wm, WeightSeq):
        return np.array([ergodic_mean_discrete(sig, wm, r) for r in radii])
    return np.array([ergodic_mean_measure(sig, wm, r) for r in radii])


@given(signals(), st.floats(0, 100))
def test_mean_properties(data, lam):
    u, v, wm, radii = data
    mu = _means(u, wm, radii)
    assert np.all(mu >= 0) and np.all(mu <= u.sup_norm() + 1e-12)
    assert np.allclose(_means(u.scaled(lam), wm, radii), lam * mu, rtol=1e-12, atol=1e-12)
    assert np.all(_means(u + v, wm, radii) <= mu + _means(v, wm, radii) + 1e-12)
    gap = float(np.max((u - v).norms()))
    assert np.all(np.abs(mu - _means(v, wm, radii)) <= gap + 1e-12)


@given(st.integers(0, 2**31 - 1))
def test_restrictions_do_not_increase_sup(seed):
    rng = np.random.default_rng(seed)
    grid = Grid.line(10, 0.25)
    f = random_trig_polynomial(rng, grid, 3, 2)
    assert restrict_to_integers(f).sup_norm() <= f.sup_norm()
    assert restrict_to_halfline(f).sup_norm() <= f.sup_norm()
