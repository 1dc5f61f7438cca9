"""Zonal harmonics Z_n, Fueter functions P_n and the axially monogenic
decomposition ``f = g1 - xbar g2`` of slice-regular functions.

For ``n >= 0``::

    P_n = -1/4 Laplacian(x^(n+2))         (polynomial, degree n)
    Z_n = spherical derivative of x^(n+1)

``P_-1 = P_-2 = 0``, ``P_-3 = xbar / |x|^4`` and lower indices follow from
``crf_conj(P_n) = (n + 2) P_(n-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
import threading

import numpy as np

from .errors import DomainError, UnsupportedError
from .quat import Quaternion, as_qarray, qconj, qdecompose, qinv, qmul, qreal
from .slicefn import (QPoly, SliceFn, _prepare, _wrap, eval_slice, s_operator,
                      slice_dbar_numeric)
from .sympoly import IMNORM2, XBAR, RationalH, RPoly4, expand_power, qexact

# closed forms for g1, g2 lose accuracy as |Im x| -> 0
NEAR_AXIS_DECOMPOSE = 1e-3


def zonal_binomial(n: int) -> RPoly4:
    """``Im((x0 + i b)^(n+1)) / b`` with ``b^2 = x1^2 + x2^2 + x3^2``."""
    if n < 0:
        raise ValueError("zonal harmonics need n >= 0")
    x0 = RPoly4.variable(0)
    out = RPoly4()
    for k in range(n // 2 + 1):
        out = out + (x0 ** (n - 2 * k)) * (IMNORM2 ** k) * (comb(n + 1, 2 * k + 1) * (-1) ** k)
    return out


class ZonalTable:
    def __init__(self):
        self._cache: dict[int, RPoly4] = {}
        self._lock = threading.Lock()

    def get(self, n: int) -> RPoly4:
        with self._lock:
            if n not in self._cache:
                self._cache[n] = zonal_binomial(n)
            return self._cache[n]


class FueterTable:
    """Append-only cache of P_n over all integer n.

    Entries are RPoly4 for n >= 0 and RationalH for n <= -1 (the zero
    RationalH at -1, -2).
    """

    def __init__(self):
        self._cache: dict = {}
        self._lock = threading.RLock()

    def get(self, n: int):
        with self._lock:
            if n not in self._cache:
                self._cache[n] = self._build(n)
            return self._cache[n]

    def _build(self, n: int):
        if n >= 0:
            return expand_power(n + 2).laplacian() * Fraction(-1, 4)
        if n in (-1, -2):
            return RationalH(RPoly4())
        if n == -3:
            return RationalH(XBAR, 2)
        # P_(n) = crf_conj(P_(n+1)) / (n + 3)
        return self.get(n + 1).crf_conj() * Fraction(1, n + 3)

    def override(self, n: int, value):
        """Replace an entry (fault injection in tests)."""
        with self._lock:
            self._cache[n] = value

    def reset(self, n: int | None = None):
        with self._lock:
            if n is None:
                self._cache.clear()
            else:
                self._cache.pop(n, None)


ZONAL = ZonalTable()
FUETER = FueterTable()


def zonal(n: int) -> RPoly4:
    return ZONAL.get(n)


def fueter_poly(n: int, table: FueterTable | None = None):
    """P_n as RPoly4 (n >= 0) or RationalH (n < 0; zero for n = -1, -2)."""
    return (table or FUETER).get(n)


def fueter_eval(n: int, x, table: FueterTable | None = None) -> np.ndarray:
    """Float evaluation of P_n at an array of points."""
    return fueter_poly(n, table).eval_array(as_qarray(x))


def _qf(c) -> np.ndarray:
    return np.array([float(v) for v in qexact(c)])


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonogenicPair:
    """``Q1 = sum P_n q1[n]`` and ``Q2 = sum P_n q2[n]`` (right coefficients, n >= 0)."""
    q1: tuple
    q2: tuple

    def q1_poly(self) -> RPoly4:
        return _p_combination(self.q1)

    def q2_poly(self) -> RPoly4:
        return _p_combination(self.q2)

    def eval_q1(self, x):
        x, scalar = _prepare(x)
        return _wrap(self.q1_poly().eval_array(x), scalar)

    def eval_q2(self, x):
        x, scalar = _prepare(x)
        return _wrap(self.q2_poly().eval_array(x), scalar)

    def eval(self, x):
        """``Q1(x) - xbar Q2(x)``."""
        x, scalar = _prepare(x)
        out = self.q1_poly().eval_array(x) - qmul(qconj(x), self.q2_poly().eval_array(x))
        return _wrap(out, scalar)


def _p_combination(coeffs) -> RPoly4:
    out = RPoly4()
    for n, c in enumerate(coeffs):
        if any(c):
            out = out + fueter_poly(n).rmul(c)
    return out


def decompose_poly(f) -> MonogenicPair:
    """``f = Q1 - xbar Q2`` from ``(n+1) x^n = P_n - xbar P_(n-1)``."""
    p = f.poly if isinstance(f, SliceFn) else f
    if p is None:
        raise UnsupportedError("decompose_poly needs a polynomial")
    q1 = tuple(tuple(v / (n + 1) for v in a) for n, a in enumerate(p.coeffs))
    q2 = tuple(tuple(v / (n + 1) for v in a) for n, a in enumerate(p.coeffs))[1:]
    return MonogenicPair(q1, q2)


def to_p_basis(p: RPoly4) -> list:
    """Coefficients ``b_n`` with ``p = sum P_n b_n``; ValueError if p is not in the span.

    Each homogeneous piece must be a right multiple of P_n; the multiplier
    is read off the ``x0^n`` coefficient (P_n has a nonzero real one).
    """
    if p.is_zero():
        return []
    out = []
    for n in range(p.degree() + 1):
        part = p.homogeneous_part(n)
        lead = fueter_poly(n).coefficient((n, 0, 0, 0))[0]
        b = tuple(v / lead for v in part.coefficient((n, 0, 0, 0)))
        if part != fueter_poly(n).rmul(b):
            raise ValueError(f"degree-{n} part is not a multiple of P_{n}")
        out.append(b)
    return out


def fueter_preimage(coeffs) -> QPoly:
    """Slice-regular polynomial whose Laplacian is ``sum P_n b_n``: ``sum -x^(n+2) b_n / 4``."""
    cs = [qexact(c) for c in coeffs]
    z = (Fraction(0),) * 4
    return QPoly([z, z] + [tuple(v * Fraction(-1, 4) for v in c) for c in cs])


def l_operator_check(n: int) -> bool:
    """Exact check of ``crf(xbar P_n) == (n + 2) Z_n``."""
    return (XBAR * fueter_poly(n)).crf() == zonal(n) * (n + 2)


def powers_identity_residual(n: int, x) -> np.ndarray:
    """Relative residual of ``(n+1) x^n = P_n - xbar P_(n-1)`` at points x (any integer n)."""
    x = as_qarray(x)
    lhs = _qpow(x, n) * (n + 1)
    rhs = fueter_eval(n, x) - qmul(qconj(x), fueter_eval(n - 1, x))
    scale = np.maximum(np.sqrt(np.sum(lhs ** 2, axis=-1)), np.sqrt(np.sum(rhs ** 2, axis=-1)))
    err = np.sqrt(np.sum((lhs - rhs) ** 2, axis=-1))
    return np.where(scale > 0, err / np.where(scale > 0, scale, 1.0), err)


def _qpow(x: np.ndarray, n: int) -> np.ndarray:
    base = x if n >= 0 else qinv(x)
    out = qreal(np.ones(x.shape[:-1]))
    for _ in range(abs(n)):
        out = qmul(out, base)
    return out


# ---------------------------------------------------------------------------

def _lap4(fn, x: np.ndarray, h: float) -> np.ndarray:
    # 5-point fourth-order stencil in each coordinate
    out = -4 * 30.0 * fn(x)
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        out = out + 16.0 * (fn(x + e) + fn(x - e)) - (fn(x + 2 * e) + fn(x - 2 * e))
    return out / (12.0 * h * h)


def decompose_slicefn(f: SliceFn, x, h: float = 1e-3):
    """Values ``(g1(x), g2(x))`` of the axially monogenic components of ``f``.

    Off the axis::

        g1 = (2 Im x)^-1 (x f(x) - xbar S f(x))
        g2 = (2 Im x)^-1 (f(x) - S f(x))

    Within ``1e-3`` of the real axis the Laplacians ``g1 = -1/4 Lap(x g)``,
    ``g2 = -1/4 Lap(g)`` of a primitive ``g`` are differenced instead.
    """
    x, scalar = _prepare(x)
    g = f.primitive()
    alpha, beta, _ = qdecompose(x)
    g1 = np.zeros(x.shape)
    g2 = np.zeros(x.shape)
    far = beta >= NEAR_AXIS_DECOMPOSE
    if np.any(far):
        xf = x[far]
        fv = eval_slice(f, xf)
        sf = s_operator(f, xf)
        im = xf.copy()
        im[..., 0] = 0.0
        inv2im = -im / (2.0 * np.sum(im * im, axis=-1))[..., None]
        g1[far] = qmul(inv2im, qmul(xf, fv) - qmul(qconj(xf), sf))
        g2[far] = qmul(inv2im, fv - sf)
    near = ~far
    if np.any(near):
        xn = x[near]
        gval = lambda p: eval_slice(g, p)  # noqa: E731
        xg = lambda p: qmul(p, eval_slice(g, p))  # noqa: E731
        g1[near] = -0.25 * _lap4(xg, xn, h)
        g2[near] = -0.25 * _lap4(gval, xn, h)
    if scalar:
        return Quaternion.from_array(g1), Quaternion.from_array(g2)
    return g1, g2


def nec_condition_residual(pair: MonogenicPair, x, h: float = 1e-4):
    """``|dg1/dx^c - g2 - xbar dg2/dx^c|`` with numeric slice derivatives."""
    x, scalar = _prepare(x)
    _, beta, _ = qdecompose(x)
    if np.any(beta == 0.0):
        raise DomainError("nec_condition_residual needs a non-real point")
    q1, q2 = pair.q1_poly(), pair.q2_poly()
    d1 = slice_dbar_numeric(q1.eval_array, x, h)
    d2 = slice_dbar_numeric(q2.eval_array, x, h)
    r = d1 - q2.eval_array(x) - qmul(qconj(x), d2)
    res = np.sqrt(np.sum(r * r, axis=-1))
    return float(res) if scalar else res
