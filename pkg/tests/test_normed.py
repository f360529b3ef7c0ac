import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from closedsums.errors import DomainError, InvalidInputError
from closedsums.normed import (
    EUCLIDEAN,
    NormKind,
    dunkl_williams_slack,
    norm,
    radial_retraction,
    retract_rows,
)

KINDS = [NormKind.euclidean(), NormKind.pnorm(1), NormKind.pnorm(3.5), NormKind.sup()]


def test_norm_examples():
    assert norm([3, 4]) == 5.0
    for k in KINDS:
        assert norm([0, 0], k) == 0.0
    assert norm([1, -2, 3], NormKind.sup()) == 3.0


def test_norm_rejects_bad_vectors():
    with pytest.raises(InvalidInputError):
        norm([])
    with pytest.raises(InvalidInputError):
        norm([1.0, np.nan])
    with pytest.raises(InvalidInputError):
        NormKind("p", 0.5)


def test_parse_norm_kinds():
    assert NormKind.parse("euclidean") == EUCLIDEAN
    assert NormKind.parse("sup") == NormKind.sup()
    assert NormKind.parse("inf") == NormKind.sup()
    assert NormKind.parse("1") == NormKind.pnorm(1)
    assert NormKind.parse("p=3").p == 3.0
    with pytest.raises(InvalidInputError):
        NormKind.parse("banana")


def test_retraction_examples():
    assert np.array_equal(radial_retraction([3, 4], 10), [3, 4])
    assert np.allclose(radial_retraction([3, 4], 1), [0.6, 0.8], atol=1e-15)
    assert np.array_equal(radial_retraction([0, 0], 0), [0, 0])


def test_retraction_boundary_uses_identity():
    x = np.array([3.0, 4.0])
    assert np.array_equal(radial_retraction(x, 5.0), x)


def test_retraction_rejects_negative_radius():
    with pytest.raises(InvalidInputError):
        radial_retraction([1.0], -1.0)


def test_retract_rows_accepts_radius_per_row():
    X = np.array([[3.0, 4.0], [3.0, 4.0]])
    out = retract_rows(X, [1.0, 10.0])
    assert np.allclose(out, [[0.6, 0.8], [3.0, 4.0]])


def test_dunkl_williams_examples():
    assert dunkl_williams_slack([1, 0], [1, 0]) == 0.0
    assert dunkl_williams_slack([1, 0], [2, 0]) == pytest.approx(4 / 3, abs=1e-15)
    with mpmath.workdps(50):
        s2 = mpmath.sqrt(2)
        oracle = float(4 * s2 / 2 - s2)
    assert dunkl_williams_slack([1, 0], [0, 1]) == pytest.approx(oracle, abs=1e-15)
    assert oracle == pytest.approx(1.4142135623730951, abs=1e-16)


def test_dunkl_williams_zero_vector():
    with pytest.raises(DomainError):
        dunkl_williams_slack([0, 0], [1, 0])


dims = st.integers(1, 8)
kinds = st.sampled_from(KINDS)
finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def vector_pair(draw):
    d = draw(dims)
    x1 = draw(arrays(np.float64, d, elements=finite))
    x2 = draw(arrays(np.float64, d, elements=finite))
    return x1, x2


@given(vector_pair(), st.floats(0, 100), kinds)
def test_two_lipschitz(pair, R, kind):
    x1, x2 = pair
    lhs = norm(radial_retraction(x1, R, kind) - radial_retraction(x2, R, kind), kind)
    assert lhs <= 2 * norm(x1 - x2, kind) + 1e-12 * max(1.0, R)


@given(vector_pair(), st.floats(0, 100), kinds)
def test_bound_and_idempotence(pair, R, kind):
    x = pair[0]
    y = radial_retraction(x, R, kind)
    assert norm(y, kind) <= R + 1e-12 * max(1.0, R)
    assert np.max(np.abs(radial_retraction(y, R, kind) - y)) <= 1e-12 * max(1.0, R)


@given(vector_pair(), kinds)
def test_dunkl_williams_slack_nonnegative(pair, kind):
    x1, x2 = pair
    if norm(x1) == 0 or norm(x2) == 0:
        return
    assert dunkl_williams_slack(x1, x2, kind) >= -1e-12
