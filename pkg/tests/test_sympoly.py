from fractions import Fraction
from math import pi

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slicecauchy.errors import SingularityError
from slicecauchy.fueter import fueter_poly
from slicecauchy.quat import Quaternion, qmul
from slicecauchy.sympoly import (IMNORM2, NORM2, X, X_VARS, XBAR, RationalH, RPoly4,
                                 divide_by_norm2, evaluate, expand_power, laplacian)

x0, x1, x2, x3 = X_VARS
I, J, K = (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)
monos = st.tuples(*[st.integers(0, 3)] * 4)
coeffs = st.tuples(small, small, small, small)
polys = st.dictionaries(monos, coeffs, max_size=6).map(RPoly4)


def test_expand_power_small():
    assert expand_power(0) == RPoly4.constant(1)
    assert expand_power(1) == X
    want = (x0 * x0 - x1 * x1 - x2 * x2 - x3 * x3
            + (x0 * x1 * 2).rmul(I) + (x0 * x2 * 2).rmul(J) + (x0 * x3 * 2).rmul(K))
    assert expand_power(2) == want


def test_expand_power_matches_repeated_product(rng):
    pts = rng.normal(size=(200, 4))
    acc = np.tile([1.0, 0, 0, 0], (200, 1))
    for n in range(13):
        got = expand_power(n).eval_array(pts)
        np.testing.assert_allclose(got, acc, rtol=1e-10, atol=1e-10 * np.abs(acc).max())
        acc = qmul(acc, pts)


@pytest.mark.parametrize("p, x, want", [
    (expand_power(5), Quaternion(2.0), Quaternion(32.0)),
    (expand_power(2), Quaternion(0, 1, 0, 0), Quaternion(-1.0)),
])
def test_eval_examples(p, x, want):
    assert evaluate(p, x) == want


def test_kernel_rational_eval():
    # 2 pi^2 E = xbar / |x|^4
    e = RationalH(XBAR, 2)
    assert e.eval(Quaternion(0, 2, 0, 0)).isclose(Quaternion(0, -1 / 8, 0, 0), 1e-16)
    with pytest.raises(SingularityError):
        e.eval(Quaternion())


def test_eval_rounds_once():
    p = RPoly4.constant((Fraction(1, 3), 0, 0, 0)) * 3
    assert p.eval(Quaternion(0.1, 0.2, 0.3, 0.4)) == Quaternion(1.0)


@pytest.mark.parametrize("p, want", [
    (NORM2, RPoly4.constant(8)),
    (expand_power(2), RPoly4.constant(-4)),
])
def test_laplacian_examples(p, want):
    assert laplacian(p) == want


def test_p_minus_three_is_harmonic():
    assert RationalH(XBAR, 2).laplacian().is_zero()


@pytest.mark.parametrize("p, want", [
    (X, RPoly4.constant(-1)),
    (XBAR, RPoly4.constant(2)),
    (RPoly4.constant(1), RPoly4()),
])
def test_crf_examples(p, want):
    assert p.crf() == want


def test_crf_conj_examples():
    assert X.crf_conj() == RPoly4.constant(2)
    assert RPoly4.constant(1).crf_conj().is_zero()
    assert fueter_poly(-3).crf_conj() == -fueter_poly(-4)


@given(polys)
@settings(max_examples=30, deadline=None)
def test_crf_plus_conj_is_d0(p):
    assert p.crf() + p.crf_conj() == p.diff(0)


@pytest.mark.parametrize("n", range(0, 9))
def test_bilaplacian_order_independent(n):
    p = expand_power(n)
    a = p.laplacian().laplacian()
    b = RPoly4()
    for i in range(4):
        for j in range(4):
            b = b + p.diff(j).diff(j).diff(i).diff(i)
    assert a == b


@given(polys, polys)
@settings(max_examples=30, deadline=None)
def test_product_rule(p, q):
    for k in range(4):
        assert (p * q).diff(k) == p.diff(k) * q + p * q.diff(k)


def test_noncommutative_product_order():
    assert X.lmul(I) != X.rmul(I)
    assert (RPoly4.constant(I) * RPoly4.constant(J)) == RPoly4.constant(K)


def test_divide_by_norm2():
    p = expand_power(3)
    assert divide_by_norm2(p * NORM2) == p
    assert divide_by_norm2(X) is None
    assert divide_by_norm2(IMNORM2) is None


def test_rational_canonical_form():
    r = RationalH(X * NORM2 * NORM2, 3)
    assert r.m == 1 and r.num == X
    assert RationalH(X * NORM2, 1) == RationalH(X, 0)


def test_rational_quotient_rule_matches_fd(rng):
    pts = rng.normal(size=(50, 4))
    pts /= np.linalg.norm(pts, axis=-1, keepdims=True)
    pts *= rng.uniform(0.8, 1.5, size=(50, 1))
    h = 1e-3
    q = RationalH(X, 1)  # x/|x|^2 is not harmonic
    exact = q.laplacian().eval_array(pts)
    fd = -8 * q.eval_array(pts)
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        fd = fd + q.eval_array(pts + e) + q.eval_array(pts - e)
    fd /= h * h
    rel = np.linalg.norm(fd - exact, axis=-1) / np.linalg.norm(exact, axis=-1)
    assert np.max(rel) < 1e-5


def test_kernel_axially_monogenic():
    e = RationalH(XBAR, 2)
    assert e.crf().is_zero()
    assert e.eval(Quaternion(1.0)).isclose(Quaternion(1.0), 0)
    assert abs(float(e.eval(Quaternion(1, 1, 0, 0)).w) * 2 * pi ** 2 - 2 * pi ** 2 / 4) < 1e-12


def test_pretty_is_stable():
    assert expand_power(1).pretty() == X.pretty()
    assert "x0" in expand_power(2).pretty()
    assert RationalH(XBAR, 2).pretty().endswith("/ |x|^4")
