"""Slice functions of one quaternionic variable.

A slice function is determined by a stem ``F = F1 + u F2`` on a domain of
the upper half plane: ``f(alpha + J beta) = F1(alpha, beta) + J F2(alpha, beta)``.
Two concrete representations are supported:

* :class:`QPoly`, polynomials ``sum x^n a_n`` with right coefficients, held
  exactly;
* :class:`StemFn`, numeric stems given by two callables.

:class:`SliceFn` wraps either one, optionally together with a known slice
primitive and slice derivative. The primitive is what the operator ``S``
(spherical derivative of a primitive) needs.

All numeric entry points accept a :class:`~slicecauchy.quat.Quaternion` or an
array of shape ``(..., 4)``; Quaternion in gives Quaternion out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, UnsupportedError
from .quat import Quaternion, as_qarray, qdecompose, qmul, qreal
from .sympoly import _fmt_frac, qexact

# below this |Im x| the stem quotient F2/beta is taken as a Richardson limit
NEAR_AXIS_BETA = 1e-6

Stem = Callable[[np.ndarray, np.ndarray], np.ndarray]

EXCLUDE_ORIGIN = "origin"
EXCLUDE_NONPOSITIVE_AXIS = "nonpositive_axis"


def _wrap(result: np.ndarray, scalar: bool):
    return Quaternion.from_array(result) if scalar else result


def _prepare(x):
    return as_qarray(x), isinstance(x, Quaternion)


def im_over_beta(n: int, alpha, beta):
    """``Im((alpha + i beta)^n) / beta`` as a polynomial, exact at ``beta = 0``."""
    alpha = np.asarray(alpha, dtype=float)
    beta2 = np.asarray(beta, dtype=float) ** 2
    out = np.zeros(np.broadcast(alpha, beta2).shape)
    for k in range((n - 1) // 2 + 1 if n > 0 else 0):
        out = out + comb(n, 2 * k + 1) * (-1) ** k * alpha ** (n - 2 * k - 1) * beta2 ** k
    return out


def re_power(n: int, alpha, beta):
    alpha = np.asarray(alpha, dtype=float)
    beta2 = np.asarray(beta, dtype=float) ** 2
    out = np.zeros(np.broadcast(alpha, beta2).shape)
    for k in range(n // 2 + 1):
        out = out + comb(n, 2 * k) * (-1) ** k * alpha ** (n - 2 * k) * beta2 ** k
    return out


# ---------------------------------------------------------------------------

class QPoly:
    """``f(x) = sum_n x^n a_n`` with exact right coefficients ``a_n``."""

    __slots__ = ("coeffs", "_float")

    def __init__(self, coeffs=()):
        cs = [qexact(c) for c in coeffs]
        while cs and not any(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self._float = np.array([[float(v) for v in c] for c in cs], dtype=float).reshape(-1, 4)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "QPoly") -> "QPoly":
        n = max(len(self), len(other))
        z = (Fraction(0),) * 4
        a = self.coeffs + (z,) * (n - len(self))
        b = other.coeffs + (z,) * (n - len(other))
        return QPoly([tuple(u + v for u, v in zip(p, q)) for p, q in zip(a, b)])

    def rmul(self, c) -> "QPoly":
        from .sympoly import qmul_exact
        c = qexact(c)
        return QPoly([qmul_exact(a, c) for a in self.coeffs])

    def float_coeffs(self) -> np.ndarray:
        return self._float

    def eval(self, x):
        """Horner from the left: ``a0 + x (a1 + x (a2 + ...))``."""
        x, scalar = _prepare(x)
        acc = np.zeros(x.shape)
        for a in self._float[::-1]:
            acc = qmul(x, acc) + a
        return _wrap(acc, scalar)

    def stem(self, alpha, beta):
        alpha = np.asarray(alpha, dtype=float)
        f1 = np.zeros(alpha.shape + (4,))
        f2 = np.zeros(alpha.shape + (4,))
        for n, a in enumerate(self._float):
            f1 = f1 + re_power(n, alpha, beta)[..., None] * a
            f2 = f2 + (np.asarray(beta) * im_over_beta(n, alpha, beta))[..., None] * a
        return f1, f2

    def sd_stem(self, alpha, beta):
        """``F2 / beta``, exact polynomial (valid on the axis)."""
        alpha = np.asarray(alpha, dtype=float)
        out = np.zeros(alpha.shape + (4,))
        for n, a in enumerate(self._float):
            out = out + im_over_beta(n, alpha, beta)[..., None] * a
        return out

    def pretty(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for n, c in enumerate(self.coeffs):
            if any(c):
                coeff = "[" + ", ".join(_fmt_frac(v) for v in c) + "]"
                parts.append(("x" if n == 1 else f"x^{n}") + "*" + coeff if n else coeff)
        return " + ".join(parts)

    def __repr__(self):
        return f"QPoly({self.pretty()})"


def slice_derivative(f: QPoly) -> QPoly:
    return QPoly([tuple(v * n for v in a) for n, a in enumerate(f.coeffs)][1:])


def slice_primitive(f: QPoly) -> QPoly:
    z = (Fraction(0),) * 4
    return QPoly([z] + [tuple(v / (n + 1) for v in a) for n, a in enumerate(f.coeffs)])


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StemFn:
    """Numeric stem function.

    ``F1`` and ``F2`` map arrays ``(alpha, beta)`` to quaternion arrays of
    shape ``alpha.shape + (4,)``. ``F1`` must be even and ``F2`` odd in beta.
    ``excludes`` names the closed sets removed from the induced domain.
    """
    F1: Stem
    F2: Stem
    excludes: frozenset = frozenset()
    name: str = "stem"

    def in_domain(self, alpha, beta) -> np.ndarray:
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        ok = np.ones(np.broadcast(alpha, beta).shape, dtype=bool)
        if EXCLUDE_ORIGIN in self.excludes:
            ok &= (alpha != 0.0) | (beta != 0.0)
        if EXCLUDE_NONPOSITIVE_AXIS in self.excludes:
            ok &= (alpha > 0.0) | (beta != 0.0)
        return ok


@dataclass(frozen=True, eq=False)
class SliceFn:
    """A slice function, polynomial or stem-backed.

    Stems may register a slice primitive and a slice derivative as
    zero-argument thunks (they are often self-referential, e.g. exp);
    polynomials compute both exactly.
    """
    poly: Optional[QPoly] = None
    stem_fn: Optional[StemFn] = None
    primitive_thunk: Optional[Callable[[], "SliceFn"]] = field(default=None, repr=False)
    derivative_thunk: Optional[Callable[[], "SliceFn"]] = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        if (self.poly is None) == (self.stem_fn is None):
            raise ValueError("SliceFn needs exactly one of poly / stem_fn")

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_poly(cls, coeffs, name: str = "poly") -> "SliceFn":
        p = coeffs if isinstance(coeffs, QPoly) else QPoly(coeffs)
        return cls(poly=p, name=name)

    @classmethod
    def from_callable(cls, fn, name: str = "callable") -> "SliceFn":
        """Rebuild the stem of a slice function known only by its values.

        Uses the slice through ``i``: ``F1 = (f(z) + f(zbar))/2`` and
        ``F2 = -i (f(z) - f(zbar))/2`` with ``z = alpha + i beta``.
        """
        unit = np.array([0.0, 1.0, 0.0, 0.0])

        def _pts(alpha, beta):
            alpha = np.asarray(alpha, dtype=float)
            beta = np.asarray(beta, dtype=float)
            p = np.zeros(np.broadcast(alpha, beta).shape + (4,))
            p[..., 0] = alpha
            p[..., 1] = beta
            m = p.copy()
            m[..., 1] = -beta
            return fn(p), fn(m)

        def F1(alpha, beta):
            a, b = _pts(alpha, beta)
            return 0.5 * (a + b)

        def F2(alpha, beta):
            a, b = _pts(alpha, beta)
            return -0.5 * qmul(unit, a - b)

        return cls(stem_fn=StemFn(F1, F2, name=name), name=name)

    # -- algebra ---------------------------------------------------------

    @property
    def is_poly(self) -> bool:
        return self.poly is not None

    @property
    def excludes(self) -> frozenset:
        return frozenset() if self.poly is not None else self.stem_fn.excludes

    def stem(self, alpha, beta):
        if self.poly is not None:
            return self.poly.stem(alpha, beta)
        return self.stem_fn.F1(alpha, beta), self.stem_fn.F2(alpha, beta)

    def as_stem(self) -> StemFn:
        if self.stem_fn is not None:
            return self.stem_fn
        p = self.poly
        return StemFn(lambda a, b: p.stem(a, b)[0], lambda a, b: p.stem(a, b)[1],
                      name=self.name)

    def has_primitive(self) -> bool:
        return self.poly is not None or self.primitive_thunk is not None

    def primitive(self) -> "SliceFn":
        if self.poly is not None:
            return SliceFn.from_poly(slice_primitive(self.poly), name=f"prim({self.name})")
        if self.primitive_thunk is None:
            raise UnsupportedError(f"no slice primitive registered for {self.name!r}")
        return self.primitive_thunk()

    def derivative(self) -> Optional["SliceFn"]:
        if self.poly is not None:
            return SliceFn.from_poly(slice_derivative(self.poly), name=f"d({self.name})")
        return self.derivative_thunk() if self.derivative_thunk is not None else None

    def __add__(self, other: "SliceFn") -> "SliceFn":
        name = f"{self.name}+{other.name}"
        if self.poly is not None and other.poly is not None:
            return SliceFn.from_poly(self.poly + other.poly, name=name)
        s1, s2 = self.as_stem(), other.as_stem()
        prim = None
        if self.has_primitive() and other.has_primitive():
            prim = lambda: self.primitive() + other.primitive()  # noqa: E731
        der = None
        if self.derivative() is not None and other.derivative() is not None:
            der = lambda: self.derivative() + other.derivative()  # noqa: E731
        return SliceFn(
            stem_fn=StemFn(lambda a, b: s1.F1(a, b) + s2.F1(a, b),
                           lambda a, b: s1.F2(a, b) + s2.F2(a, b),
                           excludes=s1.excludes | s2.excludes, name=name),
            primitive_thunk=prim, derivative_thunk=der, name=name)

    def rmul(self, c) -> "SliceFn":
        """``x -> f(x) c`` for a constant quaternion ``c`` (stays slice-regular)."""
        if self.poly is not None:
            return SliceFn.from_poly(self.poly.rmul(c), name=f"{self.name}*c")
        cq = as_qarray(Quaternion(*(float(v) for v in qexact(c))))
        s = self.stem_fn
        prim = (lambda: self.primitive().rmul(c)) if self.has_primitive() else None
        der = (lambda: self.derivative().rmul(c)) if self.derivative_thunk is not None else None
        return SliceFn(
            stem_fn=StemFn(lambda a, b: qmul(s.F1(a, b), cq),
                           lambda a, b: qmul(s.F2(a, b), cq),
                           excludes=s.excludes, name=f"{s.name}*c"),
            primitive_thunk=prim, derivative_thunk=der, name=f"{self.name}*c")

    # -- evaluation ------------------------------------------------------

    def in_domain(self, x) -> np.ndarray:
        x = as_qarray(x)
        if self.poly is not None:
            return np.ones(x.shape[:-1], dtype=bool)
        alpha, beta, _ = qdecompose(x)
        return self.stem_fn.in_domain(alpha, beta)

    def _check_domain(self, x):
        if not np.all(self.in_domain(x)):
            raise DomainError(f"point outside the domain of {self.name!r}")

    def __call__(self, x):
        return eval_slice(self, x)


# ---------------------------------------------------------------------------
# elementary functions

def _real_stem(fn) -> tuple:
    """Wrap a complex function into (F1, F2) with values along 1."""

    def F1(alpha, beta):
        z = np.asarray(alpha, dtype=float) + 1j * np.asarray(beta, dtype=float)
        return qreal(fn(z).real)

    def F2(alpha, beta):
        z = np.asarray(alpha, dtype=float) + 1j * np.asarray(beta, dtype=float)
        return qreal(fn(z).imag)

    return F1, F2


def exp_fn() -> SliceFn:
    def F1(alpha, beta):
        return qreal(np.exp(alpha) * np.cos(beta))

    def F2(alpha, beta):
        return qreal(np.exp(alpha) * np.sin(beta))

    f = SliceFn(stem_fn=StemFn(F1, F2, name="exp"),
                primitive_thunk=lambda: f, derivative_thunk=lambda: f, name="exp")
    return f


def log_fn() -> SliceFn:
    def F1(alpha, beta):
        return qreal(0.5 * np.log(np.asarray(alpha) ** 2 + np.asarray(beta) ** 2))

    def F2(alpha, beta):
        return qreal(np.arctan2(beta, alpha))

    stem = StemFn(F1, F2, excludes=frozenset({EXCLUDE_NONPOSITIVE_AXIS}), name="log")
    return SliceFn(stem_fn=stem, derivative_thunk=lambda: power_fn(-1), name="log")


def power_fn(n: int) -> SliceFn:
    """``x^n``; polynomial for ``n >= 0``, stem on ``H minus {0}`` otherwise."""
    if n >= 0:
        return SliceFn.from_poly([0] * n + [1], name=f"x^{n}")
    F1, F2 = _real_stem(lambda z: z ** n)
    stem = StemFn(F1, F2, excludes=frozenset({EXCLUDE_ORIGIN}), name=f"x^{n}")
    if n == -1:
        prim = log_fn
    else:
        prim = lambda: power_fn(n + 1).rmul(Fraction(1, n + 1))  # noqa: E731
    return SliceFn(stem_fn=stem, primitive_thunk=prim,
                   derivative_thunk=lambda: power_fn(n - 1).rmul(n), name=f"x^{n}")


# ---------------------------------------------------------------------------
# operations

def eval_slice(f: SliceFn, x):
    """``f(alpha + J beta) = F1 + J F2``; at real points the F2 term vanishes."""
    x, scalar = _prepare(x)
    if f.poly is not None:
        return _wrap(f.poly.eval(x), scalar)
    f._check_domain(x)
    alpha, beta, unit = qdecompose(x)
    F1, F2 = f.stem(alpha, beta)
    return _wrap(F1 + qmul(unit, F2), scalar)


def spherical_value(f: SliceFn, x):
    x, scalar = _prepare(x)
    f._check_domain(x)
    alpha, beta, _ = qdecompose(x)
    if f.poly is not None:
        return _wrap(f.poly.stem(alpha, beta)[0], scalar)
    return _wrap(f.stem_fn.F1(alpha, beta), scalar)


def _richardson_sd(stem: StemFn, alpha):
    # F2/beta is even in beta: remove the beta^2 and beta^4 terms
    h = NEAR_AXIS_BETA
    g = [stem.F2(alpha, np.full_like(alpha, s * h)) / (s * h) for s in (1.0, 2.0, 4.0)]
    r1 = (4.0 * g[0] - g[1]) / 3.0
    r2 = (4.0 * g[1] - g[2]) / 3.0
    return (16.0 * r1 - r2) / 15.0


def _stem_sd(stem: StemFn, alpha, beta, allow_axis: bool):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if not allow_axis and np.any(beta == 0.0):
        raise DomainError("spherical derivative of a stem function is undefined on the real axis")
    near = beta < NEAR_AXIS_BETA
    safe = np.where(near, 1.0, beta)
    out = stem.F2(alpha, np.where(near, NEAR_AXIS_BETA, beta)) / safe[..., None]
    if np.any(near):
        out = np.array(out, copy=True)
        out[near] = _richardson_sd(stem, alpha[near])
    return out


def spherical_derivative(f: SliceFn, x):
    """``f'_s(x) = 1/2 Im(x)^-1 (f(x) - f(xbar))``.

    Polynomials extend to the real axis (as the slice derivative); stems raise
    DomainError there.
    """
    x, scalar = _prepare(x)
    f._check_domain(x)
    alpha, beta, _ = qdecompose(x)
    if f.poly is not None:
        return _wrap(f.poly.sd_stem(alpha, beta), scalar)
    return _wrap(_stem_sd(f.stem_fn, alpha, beta, allow_axis=False), scalar)


def s_operator(f: SliceFn, x):
    """``S f``: spherical derivative of a slice primitive of ``f``.

    On polynomials this is ``sum Z_n(x) a_n / (n+1)``.
    """
    x, scalar = _prepare(x)
    g = f.primitive()
    g._check_domain(x)
    alpha, beta, _ = qdecompose(x)
    if g.poly is not None:
        return _wrap(g.poly.sd_stem(alpha, beta), scalar)
    return _wrap(_stem_sd(g.stem_fn, alpha, beta, allow_axis=True), scalar)


def axial_quotient(f: SliceFn, x, eps: float = 1e-4):
    """``q = (2 Im x)^-1 (f(x) - S f(x))``, continued smoothly onto the axis.

    ``q`` is the second axially monogenic component of ``f``. Below
    ``|Im x| < eps`` it is extrapolated from the two shells ``beta = eps,
    2 eps`` using the even/odd structure of its stem.
    """
    x, scalar = _prepare(x)
    alpha, beta, unit = qdecompose(x)
    out = np.zeros(x.shape)
    far = beta >= eps
    if np.any(far):
        xf = x[far]
        diff = eval_slice(f, xf) - s_operator(f, xf)
        im = xf.copy()
        im[..., 0] = 0.0
        im2 = np.sum(im * im, axis=-1)
        # (2 Im x)^-1 = -Im x / (2 |Im x|^2)
        out[far] = qmul(-im / (2.0 * im2)[..., None], diff)
    near = ~far
    if np.any(near):
        a = alpha[near]
        b = beta[near]
        u = unit[near].copy()
        u[np.all(u == 0.0, axis=-1)] = [0.0, 1.0, 0.0, 0.0]
        even, odd = [], []
        for s in (1.0, 2.0):
            pts_p = qreal(a) + s * eps * u
            pts_m = qreal(a) - s * eps * u
            qp = axial_quotient(f, pts_p, eps=0.5 * eps)
            qm = axial_quotient(f, pts_m, eps=0.5 * eps)
            even.append(0.5 * (qp + qm))
            odd.append(0.5 * (qp - qm) / (s * eps))
        t = ((b * b - eps * eps) / (3.0 * eps * eps))[..., None]
        A = even[0] + t * (even[1] - even[0])
        JB_over_beta = odd[0] + t * (odd[1] - odd[0])
        out[near] = A + b[..., None] * JB_over_beta
    return _wrap(out, scalar)


def slice_dbar_numeric(f, x, h: float = 1e-4):
    """Central-difference ``df/dx^c = I(dF/dzbar)``.

    The stem is rebuilt along the slice through ``x``: with ``J = I_x``,
    ``F1 = (f(a+Jb) + f(a-Jb))/2`` and ``F2 = -J (f(a+Jb) - f(a-Jb))/2``.
    ``f`` may be a SliceFn or any callable on quaternion arrays.
    """
    x, scalar = _prepare(x)
    if h <= 0:
        raise ValueError("step must be positive")
    fn = f if not isinstance(f, SliceFn) else (lambda p: eval_slice(f, p))
    alpha, beta, unit = qdecompose(x)
    if np.any(beta == 0.0):
        raise DomainError("slice_dbar_numeric needs a non-real point")

    def F(a, b):
        p = qreal(a) + b[..., None] * unit
        m = qreal(a) - b[..., None] * unit
        fp, fm = fn(p), fn(m)
        return 0.5 * (fp + fm), -0.5 * qmul(unit, fp - fm)

    F1ap, F2ap = F(alpha + h, beta)
    F1am, F2am = F(alpha - h, beta)
    F1bp, F2bp = F(alpha, beta + h)
    F1bm, F2bm = F(alpha, beta - h)
    dF1a = (F1ap - F1am) / (2 * h)
    dF2a = (F2ap - F2am) / (2 * h)
    dF1b = (F1bp - F1bm) / (2 * h)
    dF2b = (F2bp - F2bm) / (2 * h)
    out = 0.5 * (dF1a - dF2b) + qmul(unit, 0.5 * (dF2a + dF1b))
    return _wrap(out, scalar)
