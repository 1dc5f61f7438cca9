from math import factorial, pi

import numpy as np
import pytest

from slicecauchy.errors import NearAxisError, SingularityError
from slicecauchy.fueter import fueter_eval
from slicecauchy.kernels import (NEAR_AXIS_EPS, TWO_PI2, cauchy_fueter_E, combined_integrand,
                                 k1k2, k1k2_deriv, monogenic_integrand)
from slicecauchy.quat import Quaternion, inv, qmul


def random_triples(rng, count, min_im=0.1):
    x = rng.uniform(-0.5, 0.5, size=(count, 4))
    y = rng.normal(size=(count, 4))
    y /= np.linalg.norm(y, axis=-1, keepdims=True)
    y *= 2.0
    small = np.linalg.norm(y[:, 1:], axis=-1) < min_im
    y[small, 1] += 2 * min_im
    n = rng.normal(size=(count, 4))
    n /= np.linalg.norm(n, axis=-1, keepdims=True)
    return x, y, n


@pytest.mark.parametrize("x, want", [
    (Quaternion(1.0), Quaternion(1 / (2 * pi ** 2))),
    (Quaternion(0, 2, 0, 0), Quaternion(0, -1 / (16 * pi ** 2), 0, 0)),
    (Quaternion(1, 1, 0, 0), Quaternion(1, -1, 0, 0) / (8 * pi ** 2)),
])
def test_E_examples(x, want):
    assert cauchy_fueter_E(x).isclose(want, 1e-16)


def test_E_matches_fueter_minus_three(rng):
    x = rng.normal(size=(30, 4))
    np.testing.assert_allclose(cauchy_fueter_E(x), fueter_eval(-3, x) / TWO_PI2, rtol=1e-14)
    with pytest.raises(SingularityError):
        cauchy_fueter_E(Quaternion())


def transcribed_k1k2(x, y, n):
    """Direct quaternion-class transcription of the two kernels."""
    d = y - x
    e = d.conj() / (TWO_PI2 * d.norm2() ** 2)
    w = inv(y - y.conj())
    k1 = (e * n * y - x.conj() * e * n) * w
    k2 = (x.conj() * e * n - e * n * y.conj()) * w
    return k1, k2


def test_k1k2_matches_transcription(rng):
    x, y, n = random_triples(rng, 20)
    k1, k2 = k1k2(x, y, n)
    for i in range(20):
        a, b = transcribed_k1k2(*(Quaternion.from_array(v[i]) for v in (x, y, n)))
        np.testing.assert_allclose(k1[i], a.as_array(), rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(k2[i], b.as_array(), rtol=1e-12, atol=1e-15)


def test_k2_on_zero_value():
    _, k2 = k1k2(Quaternion(), Quaternion(0, 2, 0, 0), Quaternion(0, 1, 0, 0))
    assert k2 * Quaternion() == Quaternion()


@pytest.mark.parametrize("n", range(0, 7))
def test_kernel_sum_identity(n, rng):
    x, y, nrm = random_triples(rng, 100)
    k1, k2 = k1k2_deriv(n, x, y, nrm)
    want = factorial(n) / TWO_PI2 * qmul(fueter_eval(-n - 3, y - x), nrm)
    rel = np.linalg.norm(k1 + k2 - want, axis=-1) / np.linalg.norm(want, axis=-1)
    assert np.max(rel) < 1e-12


def test_deriv_zero_is_base_kernel(rng):
    x, y, n = random_triples(rng, 10)
    a = k1k2(x, y, n)
    b = k1k2_deriv(0, x, y, n)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


@pytest.mark.parametrize("order", [1, 2])
def test_x0_derivative_of_E_by_differences(order, rng):
    x, y, _ = random_triples(rng, 10)
    h = 1e-5 if order == 1 else 1e-3
    e = np.array([h, 0, 0, 0])
    if order == 1:
        fd = (cauchy_fueter_E(y - x - e) - cauchy_fueter_E(y - x + e)) / (2 * h)
    else:
        fd = (cauchy_fueter_E(y - x - e) - 2 * cauchy_fueter_E(y - x)
              + cauchy_fueter_E(y - x + e)) / h ** 2
    want = factorial(order) / TWO_PI2 * fueter_eval(-order - 3, y - x)
    np.testing.assert_allclose(fd, want, rtol=1e-6, atol=1e-8)


def test_real_boundary_point_raises():
    with pytest.raises(NearAxisError):
        k1k2(Quaternion(), Quaternion(2.0), Quaternion(1.0))


def test_combined_far_equals_kernels(rng):
    x, y, n = random_triples(rng, 10)
    y[:, 1:] /= np.linalg.norm(y[:, 1:], axis=-1, keepdims=True)  # |Im y| = 1
    f, sf = rng.normal(size=(10, 4)), rng.normal(size=(10, 4))
    k1, k2 = k1k2(x, y, n)
    np.testing.assert_array_equal(combined_integrand(x, y, n, f, sf),
                                  qmul(k1, f) + qmul(k2, sf))


def test_combined_constant_value(rng):
    x, y, n = random_triples(rng, 10)
    y[:3, 1:] *= 1e-6 / np.linalg.norm(y[:3, 1:], axis=-1, keepdims=True)
    a = np.array([0.3, -1.0, 2.0, 0.5])
    got = combined_integrand(x, y, n, a, a, qval=np.zeros(4))
    want = qmul(qmul(cauchy_fueter_E(y - x), n), a)
    np.testing.assert_allclose(got, want, rtol=1e-11, atol=1e-14)


def test_combined_continuous_across_switch():
    x = np.array([0.1, 0.2, -0.1, 0.05])
    u = np.array([0.0, 0.6, 0.0, 0.8])
    base = np.array([0.9, 0.0, 0.0, 0.0])
    n = np.array([0.8, 0.0, 0.6, 0.0])
    vals = []
    for s in (1 - 1e-3, 1 + 1e-3):
        y = base + s * NEAR_AXIS_EPS * u
        sf = np.array([y[0], 0, 0, 0])
        vals.append(combined_integrand(x, y, n, y, sf, qval=np.array([0.5, 0, 0, 0])))
    assert np.linalg.norm(vals[0] - vals[1]) < 1e-6


def test_combined_near_axis_limit_for_identity():
    # f(x) = x has S f = x0 and q = 1/2; the off-axis values tend linearly in beta
    x = np.array([0.1, 0.2, -0.1, 0.05])
    n = np.array([0.0, 1.0, 0.0, 0.0])
    y_on = np.array([0.9, 0.0, 0.0, 0.0])
    on = combined_integrand(x, y_on, n, y_on, y_on, qval=np.array([0.5, 0, 0, 0]))

    def off(beta):
        y = y_on + np.array([0, beta, 0, 0])
        return combined_integrand(x, y, n, y, np.array([y[0], 0, 0, 0]), eps=0.0)
    limit = 2 * off(1e-5) - off(2e-5)
    assert np.linalg.norm(on - limit) < 1e-8


def test_combined_needs_quotient_near_axis():
    with pytest.raises(NearAxisError):
        combined_integrand(np.zeros(4), np.array([1.0, 1e-6, 0, 0]), np.array([1.0, 0, 0, 0]),
                           np.ones(4), np.ones(4))


def test_monogenic_integrand_constant_reduces_to_E(rng):
    x, y, n = random_triples(rng, 5)
    a = np.array([1.0, 2.0, 0.0, -1.0])
    got = monogenic_integrand(x, y, n, a, np.zeros(4))
    np.testing.assert_allclose(got, qmul(qmul(cauchy_fueter_E(y - x), n), a), rtol=1e-13)
