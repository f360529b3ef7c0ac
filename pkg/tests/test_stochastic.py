import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from closedsums.ergodic import ergodic_mean_measure
from closedsums.errors import InvalidInputError, OutOfRangeError, ShapeError
from closedsums.probes import translation_defect
from closedsums.signals import Grid, MeasureDensity, SampledSignal
from closedsums.stochastic import (
    ProcessEnsemble,
    deterministic_process,
    equivalence_check,
    l2_norm_at,
    reduce_to_signal,
    scaled_gaussian,
    sm_ergodic_mean,
)


def test_l2_norm_of_deterministic_process():
    f = SampledSignal.from_function(Grid.line(2, 0.5), lambda t: np.stack([t, 1 + 0 * t], axis=1))
    x = deterministic_process(f, K=3)
    for t in f.t:
        assert l2_norm_at(x, t) == pytest.approx(np.linalg.norm(f.value_at(t)), rel=1e-15)


def test_l2_norm_of_scaled_gaussian():
    sigma, K = 1.7, 100_000
    x = scaled_gaussian(Grid.line(1, 0.5), sigma, K, seed=21)
    # sd of the sample second moment is sigma^2 sqrt(2/K), hence sigma / sqrt(2K) at first order for its root;
    # this seed sits at 3.2 sd, so the band is 4 sd (two-sided miss rate about 6e-5)
    assert abs(l2_norm_at(x, 0.5) - sigma) <= 4 * sigma / math.sqrt(2 * K)


def test_l2_norm_of_zero_process_and_off_grid():
    x = ProcessEnsemble.from_array(Grid.line(1, 0.5), np.zeros((4, 5)))
    assert l2_norm_at(x, 0.0) == 0.0
    with pytest.raises(OutOfRangeError):
        l2_norm_at(x, 0.25)


def test_sm_means_forms():
    grid = Grid.line(10, 0.01)
    f = SampledSignal.from_function(grid, lambda t: np.exp(-np.abs(t)))
    x = deterministic_process(f)
    mu = MeasureDensity.lebesgue()
    r = 5.0
    assert sm_ergodic_mean(x, mu, r, "root") == pytest.approx(ergodic_mean_measure(f, mu, r), abs=1e-12)
    assert sm_ergodic_mean(x, mu, r) == pytest.approx((1 - math.exp(-2 * r)) / (2 * r), abs=1e-5)
    with pytest.raises(InvalidInputError):
        sm_ergodic_mean(x, mu, r, "cubed")


def test_equivalence_examples():
    grid = Grid.line(20, 0.1)
    zero = ProcessEnsemble.from_array(grid, np.zeros((3, grid.size)))
    rep = equivalence_check(zero, MeasureDensity.lebesgue(), [1, 10, 20])
    assert rep.squared == rep.root == [0.0, 0.0, 0.0]
    assert rep.verdict_squared == rep.verdict_root == "ergodic_consistent"
    f = SampledSignal.from_function(grid, lambda t: 2 * np.cos(t))
    rep = equivalence_check(deterministic_process(f), MeasureDensity.lebesgue(), [1, 10, 20])
    assert rep.M == pytest.approx(f.sup_norm() ** 2, rel=1e-15)
    assert rep.inequalities_hold and rep.mc_stderr_squared == [0.0, 0.0, 0.0]
    with pytest.raises(InvalidInputError):
        equivalence_check(zero, MeasureDensity.lebesgue(), [10, 1])


def test_equivalence_gaussian_within_error_bars():
    grid = Grid.line(50, 0.05)
    x = scaled_gaussian(grid, lambda t: np.exp(-np.abs(t) / 2), 20_000, seed=3)
    rep = equivalence_check(x, MeasureDensity.lebesgue(), [1, 10, 50])
    for r, sq, se, q in zip(rep.radii, rep.squared, rep.mc_stderr_squared, rep.quadrature_tol_squared):
        exact = (1 - math.exp(-r)) / r
        assert abs(sq - exact) <= 4 * se + 3 * q + 1e-9
    assert rep.inequalities_hold


def test_reduce_to_signal_isometry(rng):
    grid = Grid.line(3, 0.5)
    D = rng.standard_normal((6, grid.size, 2))
    x = ProcessEnsemble.from_array(grid, D)
    u = reduce_to_signal(x)
    assert u.dim == 12
    for t in grid.t:
        assert np.linalg.norm(u.value_at(t)) == pytest.approx(l2_norm_at(x, t), rel=1e-13)
    ms = np.mean(np.sum((D[:, 2:] - D[:, :-2]) ** 2, axis=2), axis=0)
    assert translation_defect(u, 1.0) == pytest.approx(math.sqrt(ms.max()), rel=1e-13)


def test_reduce_to_signal_examples():
    grid = Grid.line(4, 0.5)
    v = np.array([3.0, 4.0])
    D = np.stack([np.outer(np.sin(grid.t), v)] * 2)
    u = reduce_to_signal(ProcessEnsemble.from_array(grid, D))
    assert np.allclose(u.norms(), 5 * np.abs(np.sin(grid.t)), atol=1e-14)
    z = reduce_to_signal(ProcessEnsemble.from_array(grid, np.zeros((2, grid.size))))
    assert z.sup_norm() == 0.0


def test_sampler_is_seeded_and_chunk_stable():
    grid = Grid.line(2, 0.5)
    a = scaled_gaussian(grid, 1.0, 2500, seed=7, chunk_size=1000)
    b = scaled_gaussian(grid, 1.0, 2500, seed=7, chunk_size=1000)
    assert np.array_equal(a.materialize(), b.materialize())
    assert np.array_equal(a.second_moment(), b.second_moment())
    c = scaled_gaussian(grid, 1.0, 2500, seed=8, chunk_size=1000)
    assert not np.array_equal(a.materialize(), c.materialize())


def test_ensemble_validation():
    with pytest.raises(InvalidInputError):
        ProcessEnsemble.from_array(Grid.line(1, 0.5), np.zeros((1, 5)))
    with pytest.raises(InvalidInputError):
        ProcessEnsemble.from_array(Grid.z_window(2), np.zeros((3, 5)))
    with pytest.raises(ShapeError):
        ProcessEnsemble(Grid.line(1, 0.5), 3, 1, draws=np.zeros((3, 4)))
    with pytest.raises(InvalidInputError):
        ProcessEnsemble.from_array(Grid.line(1, 0.5), np.full((2, 5), np.nan))


@settings(max_examples=40)
@given(st.integers(0, 2**31 - 1), st.integers(2, 30))
def test_square_mean_inequalities(seed, K):
    rng = np.random.default_rng(seed)
    grid = Grid.line(4, 0.25)
    D = rng.standard_normal((K, grid.size, 2)) * rng.uniform(0, 10, (1, grid.size, 1))
    mu = MeasureDensity(lambda t: 1 + t ** 2, [(0.6, 2.0)])
    rep = equivalence_check(ProcessEnsemble.from_array(grid, D), mu, [0.5, 1.3, 4.0])
    for sq, rt in zip(rep.squared, rep.root):
        assert rt * rt <= sq + 1e-10
        assert sq <= math.sqrt(rep.M) * rt + 1e-10
