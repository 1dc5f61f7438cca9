"""Cauchy-Fueter kernel and the two kernels of the slice-regular Cauchy formula.

The 3-form ``Dy`` is realised on an oriented hypersurface as ``n(y) dsigma``
with ``n`` the outward unit normal written as a quaternion; every density
here is the coefficient of ``dsigma``. With

    A = d0^n E(y - x)           = n!/(2 pi^2) P_(-n-3)(y - x)
    B = d0^n (xbar E(y - x))    = n!/(2 pi^2) (P_(-n-2)(y - x) + xbar P_(-n-3)(y - x))

the kernels are ``K1 = (A n y - B n)(y - ybar)^-1`` and
``K2 = (B n - A n ybar)(y - ybar)^-1``; ``n = 0`` is the formula itself.

All functions broadcast over leading axes of ``(..., 4)`` arrays.
"""
from __future__ import annotations

from math import factorial, pi

import numpy as np

from .errors import NearAxisError, SingularityError
from .fueter import fueter_eval
from .quat import Quaternion, as_qarray, qconj, qmul
from .slicefn import _prepare, _wrap

TWO_PI2 = 2.0 * pi * pi
# |Im y| below NEAR_AXIS_EPS * scale switches to the regrouped integrand
NEAR_AXIS_EPS = 1e-4


def cauchy_fueter_E(x):
    """``E(x) = xbar / (2 pi^2 |x|^4)``."""
    x, scalar = _prepare(x)
    r2 = np.sum(x * x, axis=-1)
    if np.any(r2 == 0.0):
        raise SingularityError("Cauchy-Fueter kernel evaluated at 0")
    return _wrap(qconj(x) / (TWO_PI2 * r2 * r2)[..., None], scalar)


def _ab(n: int, x: np.ndarray, y: np.ndarray):
    d = y - x
    if np.any(np.sum(d * d, axis=-1) == 0.0):
        raise SingularityError("kernel evaluated at y == x")
    if n == 0:
        a = cauchy_fueter_E(d)
        return a, qmul(qconj(x), a)
    c = factorial(n) / TWO_PI2
    p3 = fueter_eval(-n - 3, d)
    p2 = fueter_eval(-n - 2, d)
    return c * p3, c * (p2 + qmul(qconj(x), p3))


def _inv_two_im(y: np.ndarray) -> np.ndarray:
    im = np.array(y, dtype=float, copy=True)
    im[..., 0] = 0.0
    im2 = np.sum(im * im, axis=-1)
    if np.any(im2 == 0.0):
        raise NearAxisError("K1/K2 are singular for real y; use combined_integrand")
    return -im / (2.0 * im2)[..., None]


def _broadcast(x, y, normal):
    return np.broadcast_arrays(as_qarray(x), as_qarray(y), as_qarray(normal))


def k1k2_deriv(n: int, x, y, normal):
    """Densities of ``K1^(n)``, ``K2^(n)``; each acts by left multiplication on a value."""
    scalar = isinstance(x, Quaternion) and isinstance(y, Quaternion)
    x, y, normal = _broadcast(x, y, normal)
    a, b = _ab(n, x, y)
    w = _inv_two_im(y)
    an = qmul(a, normal)
    bn = qmul(b, normal)
    k1 = qmul(qmul(an, y) - bn, w)
    k2 = qmul(bn - qmul(an, qconj(y)), w)
    return _wrap(k1, scalar), _wrap(k2, scalar)


def k1k2(x, y, normal):
    return k1k2_deriv(0, x, y, normal)


def monogenic_integrand(x, y, normal, g1val, g2val, deriv: int = 0):
    """``A n g1(y) - B n g2(y)``: the density for ``f = g1 - xbar g2``."""
    x, y, normal = _broadcast(x, y, normal)
    a, b = _ab(deriv, x, y)
    return qmul(qmul(a, normal), as_qarray(g1val)) - qmul(qmul(b, normal), as_qarray(g2val))


def combined_integrand(x, y, normal, fval, sfval, qval=None, deriv: int = 0,
                       eps: float = NEAR_AXIS_EPS):
    """``K1^(n) f(y) + K2^(n) S f(y)``, regular up to and on the real axis.

    Where ``|Im y| < eps`` the regrouped form

        A n (1/2 (f + S f) + y0 q) - B n q,   q = (2 Im y)^-1 (f - S f)

    is used; ``qval`` must then supply ``q`` (its limit on the axis).
    """
    x, y, normal = _broadcast(x, y, normal)
    fval = np.broadcast_to(as_qarray(fval), y.shape)
    sfval = np.broadcast_to(as_qarray(sfval), y.shape)
    beta = np.sqrt(np.sum(y[..., 1:] ** 2, axis=-1))
    near = beta < eps
    out = np.zeros(y.shape)
    far = ~near
    if np.any(far):
        k1, k2 = k1k2_deriv(deriv, x[far], y[far], normal[far])
        out[far] = qmul(k1, fval[far]) + qmul(k2, sfval[far])
    if np.any(near):
        if qval is None:
            raise NearAxisError(f"{int(near.sum())} node(s) within {eps:g} of the real axis "
                                "and no axial quotient supplied")
        q = np.broadcast_to(as_qarray(qval), y.shape)[near]
        yn = y[near]
        g1 = 0.5 * (fval[near] + sfval[near]) + yn[..., :1] * q
        out[near] = monogenic_integrand(x[near], yn, normal[near], g1, q, deriv)
    return out
