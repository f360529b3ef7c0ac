import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from closedsums.errors import DegenerateInputError, DomainError, NotInRangeError
from closedsums.normed import NormKind
from closedsums.oracles import (
    brute_min_norm_preimage,
    brute_quotient_norm,
    brute_range_constant,
    brute_sum_constant,
    qr_kernel_basis,
    split_oracle,
)
from closedsums.subspaces import (
    GraphOperator,
    Subspace,
    decompose_in_sum,
    graph_norm,
    graph_range_constant,
    min_norm_preimage,
    quotient_norm,
    range_constant,
    sum_constant,
)


def _rank_k(rng, m, n, k):
    return rng.standard_normal((m, k)) @ rng.standard_normal((k, n))


# ---------------------------------------------------------------- preimages


def test_min_norm_preimage_examples():
    assert np.allclose(min_norm_preimage(np.eye(2), [1, 2]), [1, 2])
    assert np.allclose(min_norm_preimage(np.diag([2.0, 0.0]), [2, 0]), [1, 0])


def test_min_norm_preimage_vs_oracle(rng):
    L = _rank_k(rng, 4, 6, 3)
    y = L @ rng.standard_normal(6)
    x = min_norm_preimage(L, y)
    xo = brute_min_norm_preimage(L, y)
    assert np.linalg.norm(x - xo) <= 1e-6 * np.linalg.norm(x)


def test_not_in_range():
    with pytest.raises(NotInRangeError):
        min_norm_preimage(np.diag([1.0, 0.0]), [0.0, 1.0])


def test_preimage_optimality(rng):
    L = _rank_k(rng, 4, 7, 3)
    y = L @ rng.standard_normal(7)
    x = min_norm_preimage(L, y)
    K = qr_kernel_basis(L)
    for _ in range(200):
        k = K @ rng.standard_normal(K.shape[1])
        assert np.linalg.norm(x + k) >= np.linalg.norm(x) - 1e-10


# ---------------------------------------------------------------- range constants


def test_range_constant_examples():
    assert range_constant(np.eye(3)).constant_c == pytest.approx(1.0, abs=1e-15)
    for L, expected in ((np.diag([2.0, 0.0]), 0.5), (np.diag([3.0, 1.0]), 1.0)):
        c = range_constant(L).constant_c
        c_oracle, _ = brute_range_constant(L)
        assert c == pytest.approx(expected, abs=1e-12)
        assert c_oracle == pytest.approx(expected, abs=1e-9)


def test_range_constant_zero_operator():
    with pytest.raises(DegenerateInputError):
        range_constant(np.zeros((2, 3)))


def test_range_constant_consistency(rng):
    L = _rank_k(rng, 5, 7, 3)
    rep = range_constant(L)
    c = rep.constant_c
    for _ in range(1000):
        y = L @ rng.standard_normal(7)
        assert np.linalg.norm(min_norm_preimage(L, y)) <= (c + 1e-8) * np.linalg.norm(y)
    y = np.asarray(rep.witness["y"])
    assert np.linalg.norm(min_norm_preimage(L, y)) / np.linalg.norm(y) == pytest.approx(c, abs=1e-6)


# ---------------------------------------------------------------- quotient norm


def test_quotient_norm_examples(rng):
    L = rng.standard_normal((4, 3))  # injective almost surely
    x = rng.standard_normal(3)
    assert quotient_norm(L, x) == pytest.approx(np.linalg.norm(x), rel=1e-12)
    assert quotient_norm(np.diag([1.0, 0.0]), [-2.5, 7.0]) == pytest.approx(2.5, abs=1e-15)


def test_quotient_norm_vs_oracle(rng):
    L = _rank_k(rng, 3, 5, 2)
    x = rng.standard_normal(5)
    assert quotient_norm(L, x) == pytest.approx(brute_quotient_norm(L, x), abs=1e-6)


# ---------------------------------------------------------------- graph operators


def test_graph_norm_examples():
    x = np.array([1.0, -2.0])
    full = Subspace.full(2)
    assert graph_norm(GraphOperator.from_ambient(full, np.zeros((2, 2))), x) == pytest.approx(np.linalg.norm(x))
    assert graph_norm(GraphOperator.from_ambient(full, np.eye(2)), x) == pytest.approx(2 * np.linalg.norm(x))
    T = GraphOperator(Subspace.span([[1.0, 0.0]]), np.array([[3.0]]))
    assert graph_norm(T, [1.0, 0.0]) == pytest.approx(4.0)


def test_graph_norm_off_domain():
    T = GraphOperator(Subspace.span([[1.0, 0.0]]), np.array([[3.0]]))
    with pytest.raises(DomainError):
        graph_norm(T, [0.0, 1.0])


def test_graph_range_constant_examples():
    rep = graph_range_constant(GraphOperator.from_ambient(Subspace.full(2), np.eye(2)))
    assert rep.constant_c == pytest.approx(1.0) and rep.d == pytest.approx(2.0)
    diag = np.diag([2.0, 0.0])
    rep = graph_range_constant(GraphOperator.from_ambient(Subspace.full(2), diag))
    assert rep.constant_c == pytest.approx(0.5) == brute_range_constant(diag)[0]
    T = GraphOperator(Subspace.span([[1.0, 0.0, 0.0]]), np.array([[5.0]]))
    rep = graph_range_constant(T)
    assert rep.constant_c == pytest.approx(0.2) == brute_range_constant(np.array([[5.0]]))[0]
    assert rep.d == pytest.approx(1.2)


def test_graph_range_constant_zero():
    with pytest.raises(DegenerateInputError):
        graph_range_constant(GraphOperator.from_ambient(Subspace.full(2), np.zeros((2, 2))))


# ---------------------------------------------------------------- sums


def _angle(theta):
    return Subspace.span([[1.0, 0.0]]), Subspace.span([[math.cos(theta), math.sin(theta)]])


def test_sum_constant_examples():
    rep = sum_constant(Subspace.span([[1.0, 0.0]]), Subspace.span([[0.0, 1.0]]))
    assert rep.constant_c == pytest.approx(1.0, abs=1e-12)
    M, N = _angle(math.pi / 6)
    c_oracle, _ = brute_sum_constant(M.basis, N.basis)
    assert sum_constant(M, N).constant_c == pytest.approx(c_oracle, abs=1e-6)
    # frozen from the oracle above
    assert sum_constant(M, N).constant_c == pytest.approx(2.0, abs=1e-6)


def test_sum_constant_methods_agree(rng):
    M = Subspace.span(rng.standard_normal((2, 5)))
    N = Subspace.span(rng.standard_normal((2, 5)))
    closed = sum_constant(M, N, method="closed_form")
    sampled = sum_constant(M, N, method="sampled", seed=3)
    assert closed.method == "closed_form" and sampled.method == "sampled"
    assert sampled.constant_c == pytest.approx(closed.constant_c, rel=1e-6)


def test_sum_constant_intersecting_subspaces():
    M = Subspace.span([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    N = Subspace.span([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    assert sum_constant(M, N).constant_c == pytest.approx(1.0, abs=1e-9)
    c_oracle, _ = brute_sum_constant(M.basis, N.basis)
    assert c_oracle == pytest.approx(1.0, abs=1e-6)


def test_sum_constant_degenerate():
    Z = Subspace(np.zeros((3, 0)), 3)
    with pytest.raises(DegenerateInputError):
        sum_constant(Z, Z)


def test_sum_constant_sup_norm_vs_sweep():
    M, N = _angle(math.pi / 5)
    rep = sum_constant(M, N, method="sampled", kind=NormKind.sup(), seed=1)
    sup = lambda v: float(np.max(np.abs(v)))
    split = split_oracle(M.basis, N.basis, norm=sup)
    phis = np.linspace(0, np.pi, 200_001)
    best = max(sup(split(z)) / sup(z) for z in np.column_stack([np.cos(phis), np.sin(phis)]))
    assert rep.constant_c == pytest.approx(best, rel=1e-6)


def test_decompose_in_sum(rng):
    M = Subspace.span(rng.standard_normal((2, 4)))
    N = Subspace.span(rng.standard_normal((1, 4)))
    z = M.basis @ rng.standard_normal(2) + N.basis @ rng.standard_normal(1)
    x, y = decompose_in_sum(M, N, z)
    assert M.residual(x) <= 1e-10 and N.residual(y) <= 1e-10
    assert np.allclose(x + y, z, atol=1e-12)


def test_angle_family_monotone():
    cs = [sum_constant(*_angle(th)).constant_c for th in np.linspace(0.05, np.pi / 2, 40)]
    assert all(b <= a + 1e-12 for a, b in zip(cs, cs[1:]))


@given(st.integers(0, 10_000), st.floats(1e-3, 1e3))
def test_sum_constant_scale_invariant(seed, scale):
    rng = np.random.default_rng(seed)
    VM = rng.standard_normal((2, 4))
    VN = rng.standard_normal((1, 4))
    c1 = sum_constant(Subspace.span(VM), Subspace.span(VN)).constant_c
    c2 = sum_constant(Subspace.span(scale * VM), Subspace.span(scale * VN)).constant_c
    assert c2 == pytest.approx(c1, abs=1e-9 * max(1.0, c1))


@given(st.integers(0, 10_000))
def test_sum_witness_and_two_sided_bound(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 6))
    M = Subspace.span(rng.standard_normal((int(rng.integers(1, d)), d)))
    N = Subspace.span(rng.standard_normal((int(rng.integers(1, d)), d)))
    rep = sum_constant(M, N)
    z, x, y = (np.asarray(rep.witness[k]) for k in ("z", "x", "y"))
    nz = np.linalg.norm(z)
    assert M.residual(x) <= 1e-10 and N.residual(z - x) <= 1e-10
    if rep.constant_c > 0:
        assert np.linalg.norm(x) / nz == pytest.approx(rep.constant_c, abs=1e-6)
    assert np.linalg.norm(y) <= rep.d * nz + 1e-12
