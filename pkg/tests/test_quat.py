import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicecauchy.errors import DomainError, ParseError
from slicecauchy.quat import (I, J, K, ONE, Quaternion, decompose, format_components, inv,
                              mul, parse_components, qconj, qdecompose, qinv, qmul, qnorm2)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)


@pytest.mark.parametrize("p, q, want", [
    (I, J, K),
    (J, K, I),
    (K, I, J),
    (J, I, -K),
    (ONE, Quaternion(1, 2, 3, 4), Quaternion(1, 2, 3, 4)),
    (Quaternion(1, 1, 0, 0), Quaternion(1, 0, 1, 0), Quaternion(1, 1, 1, 1)),
])
def test_mul_table(p, q, want):
    assert mul(p, q) == want
    assert p * q == want


def test_units_square_to_minus_one():
    for u in (I, J, K):
        assert u * u == -ONE


@given(quats, quats, quats)
def test_associative_and_distributive(p, q, r):
    scale = (1 + abs(p)) * (1 + abs(q)) * (1 + abs(r))
    assert abs((p * q) * r - p * (q * r)) <= 1e-12 * scale
    assert abs(p * (q + r) - (p * q + p * r)) <= 1e-12 * scale


@given(quats, quats)
def test_norm_multiplicative_and_conj_reverses(p, q):
    assert math.isclose(abs(p * q), abs(p) * abs(q), rel_tol=1e-12, abs_tol=1e-300)
    assert abs((p * q).conj() - q.conj() * p.conj()) <= 1e-12 * (1 + abs(p) * abs(q))


def test_x_times_conj_is_norm2(rng):
    x = rng.normal(size=(1000, 4)) * 10
    prod = qmul(x, qconj(x))
    np.testing.assert_allclose(prod[:, 0], qnorm2(x), rtol=1e-14)
    assert np.all(prod[:, 0] >= 0)
    np.testing.assert_allclose(prod[:, 1:], 0.0, atol=1e-11)


@pytest.mark.parametrize("x, alpha, beta, unit", [
    (Quaternion(3.0), 3.0, 0.0, None),
    (Quaternion(1, 2, 0, 0), 1.0, 2.0, I),
    (Quaternion(0, 1, 1, 0), 0.0, math.sqrt(2), Quaternion(0, 1, 1, 0) / math.sqrt(2)),
])
def test_decompose_examples(x, alpha, beta, unit):
    a, b, u = decompose(x)
    assert a == alpha and math.isclose(b, beta)
    if unit is None:
        assert u is None
    else:
        assert u.isclose(unit, 1e-15)
        assert (u * u).isclose(-ONE, 1e-14)


def test_decompose_reassembles(rng):
    x = rng.normal(size=(500, 4))
    a, b, u = qdecompose(x)
    back = u * b[:, None]
    back[:, 0] += a
    np.testing.assert_allclose(back, x, atol=1e-14)
    np.testing.assert_allclose(qmul(u, u)[:, 0], -1.0, atol=1e-14)


def test_decompose_threshold_counts_tiny_imaginary_as_real():
    assert decompose(Quaternion(1.0, 1e-15, 0, 0))[2] is None
    assert decompose(Quaternion(1.0, 1e-10, 0, 0))[2] is not None


@pytest.mark.parametrize("x, want", [
    (ONE, ONE),
    (I, -I),
    (Quaternion(0, 2, 0, 0), Quaternion(0, -0.5, 0, 0)),
])
def test_inv_examples(x, want):
    assert inv(x).isclose(want, 1e-15)


def test_inv_zero_raises():
    with pytest.raises(DomainError):
        inv(Quaternion())


def test_imaginary_part_inverse(rng):
    x = rng.normal(size=(200, 4))
    x[:, 0] = 0.0
    np.testing.assert_allclose(qmul(x, qinv(x)), np.tile([1.0, 0, 0, 0], (200, 1)), atol=1e-14)


@given(quats)
@settings(max_examples=50)
def test_format_parse_roundtrip(q):
    assert Quaternion.parse(q.format()) == q
    assert parse_components(format_components(tuple(q))) == tuple(q)


@pytest.mark.parametrize("text", ["1,2,3", "1,2,3,4,5", "1,,3,4", "1,2,x,4", ""])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        Quaternion.parse(text)


def test_parse_error_names_position():
    with pytest.raises(ParseError, match="2"):
        parse_components("1,2,x,4")
