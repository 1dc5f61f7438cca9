"""Exact polynomials in x0..x3 with quaternion coefficients.

Coefficients are 4-tuples of :class:`fractions.Fraction`; all identities
among the Fueter and zonal families can therefore be checked as exact
equalities. :class:`RationalH` extends this to ``N(x) / |x|^(2m)``, enough
for the negative-index Fueter functions and the Cauchy-Fueter kernel.

Operators act with the imaginary units on the *left* of the coefficients::

    crf      = 1/2 (d0 + i d1 + j d2 + k d3)
    crf_conj = 1/2 (d0 - i d1 - j d2 - k d3)
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as _iproduct

import numpy as np

from .errors import SingularityError
from .quat import Quaternion, as_qarray

Monomial = tuple  # (e0, e1, e2, e3)

_ZERO = Fraction(0)
_QZERO = (_ZERO, _ZERO, _ZERO, _ZERO)
_UNITS = (
    (Fraction(1), _ZERO, _ZERO, _ZERO),
    (_ZERO, Fraction(1), _ZERO, _ZERO),
    (_ZERO, _ZERO, Fraction(1), _ZERO),
    (_ZERO, _ZERO, _ZERO, Fraction(1)),
)
_EVAL_CHUNK = 4096


def qexact(c) -> tuple:
    """Coerce a scalar, Quaternion or 4-sequence to an exact coefficient."""
    if isinstance(c, (int, Fraction)):
        return (Fraction(c), _ZERO, _ZERO, _ZERO)
    if isinstance(c, float):
        return (Fraction(c), _ZERO, _ZERO, _ZERO)
    if isinstance(c, Quaternion):
        c = tuple(c)
    if len(c) != 4:
        raise ValueError(f"quaternion coefficient needs 4 entries, got {c!r}")
    return tuple(Fraction(v) for v in c)


def qmul_exact(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def _qadd(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def _qscale(a, s):
    return (a[0] * s, a[1] * s, a[2] * s, a[3] * s)


def _is_zero(c) -> bool:
    return not (c[0] or c[1] or c[2] or c[3])


def _fmt_frac(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class RPoly4:
    """Polynomial ``sum_m coeff_m * x0^e0 x1^e1 x2^e2 x3^e3``.

    Immutable; zero coefficients are never stored. Multiplication keeps the
    left/right order of the quaternion coefficients.
    """

    __slots__ = ("terms", "_compiled")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != 4 or min(mono) < 0:
                    raise ValueError(f"bad multi-index {mono!r}")
                coeff = qexact(coeff)
                if not _is_zero(coeff):
                    clean[mono] = coeff
        self.terms = clean
        self._compiled = None

    @classmethod
    def _raw(cls, terms: dict) -> "RPoly4":
        # terms already exact and free of zeros
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._compiled = None
        return obj

    @classmethod
    def constant(cls, c) -> "RPoly4":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def variable(cls, k: int) -> "RPoly4":
        mono = [0, 0, 0, 0]
        mono[k] = 1
        return cls({tuple(mono): 1})

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self, n: int | None = None) -> bool:
        degs = {sum(m) for m in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return n is None or degs == {n}

    def homogeneous_part(self, n: int) -> "RPoly4":
        return RPoly4._raw({m: c for m, c in self.terms.items() if sum(m) == n})

    def coefficient(self, mono) -> tuple:
        return self.terms.get(tuple(mono), _QZERO)

    # -- ring operations -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, RationalH):
            return other == self
        if not isinstance(other, RPoly4):
            try:
                other = RPoly4.constant(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, RationalH):
            return RationalH(self) + other
        if not isinstance(other, RPoly4):
            other = RPoly4.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = _qadd(out.get(m, _QZERO), c)
            if _is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return RPoly4._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return RPoly4._raw({m: _qscale(c, -1) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RPoly4()
            s = Fraction(other)
            return RPoly4._raw({m: _qscale(c, s) for m, c in self.terms.items()})
        if isinstance(other, RationalH):
            return RationalH(self) * other
        if not isinstance(other, RPoly4):
            return NotImplemented
        out: dict = {}
        for (m1, c1), (m2, c2) in _iproduct(self.terms.items(), other.terms.items()):
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
            out[m] = _qadd(out.get(m, _QZERO), qmul_exact(c1, c2))
        return RPoly4._raw({m: c for m, c in out.items() if not _is_zero(c)})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def lmul(self, q) -> "RPoly4":
        """Left multiplication of every coefficient by a constant quaternion."""
        q = qexact(q)
        return RPoly4({m: qmul_exact(q, c) for m, c in self.terms.items()})

    def rmul(self, q) -> "RPoly4":
        q = qexact(q)
        return RPoly4({m: qmul_exact(c, q) for m, c in self.terms.items()})

    def __pow__(self, n: int) -> "RPoly4":
        out = RPoly4.constant(1)
        for _ in range(n):
            out = out * self
        return out

    # -- calculus --------------------------------------------------------

    def diff(self, k: int) -> "RPoly4":
        out = {}
        for m, c in self.terms.items():
            e = m[k]
            if e:
                mm = list(m)
                mm[k] -= 1
                out[tuple(mm)] = _qscale(c, e)
        return RPoly4._raw(out)

    def laplacian(self) -> "RPoly4":
        out = RPoly4()
        for k in range(4):
            out = out + self.diff(k).diff(k)
        return out

    def _dirac(self, sign: int) -> "RPoly4":
        out = self.diff(0)
        for k in (1, 2, 3):
            term = self.diff(k).lmul(_UNITS[k])
            out = out + term if sign > 0 else out - term
        return out * Fraction(1, 2)

    def crf(self) -> "RPoly4":
        return self._dirac(+1)

    def crf_conj(self) -> "RPoly4":
        return self._dirac(-1)

    # -- evaluation ------------------------------------------------------

    def eval_exact(self, x) -> tuple:
        xs = [Fraction(v) for v in Quaternion.from_array(as_qarray(x))]
        acc = _QZERO
        for m, c in self.terms.items():
            mono = xs[0] ** m[0] * xs[1] ** m[1] * xs[2] ** m[2] * xs[3] ** m[3]
            acc = _qadd(acc, _qscale(c, mono))
        return acc

    def eval(self, x) -> Quaternion:
        """Evaluate exactly at the (binary-exact) point ``x``, rounding once."""
        return Quaternion(*(float(v) for v in self.eval_exact(x)))

    def _compile(self):
        if self._compiled is None:
            monos = list(self.terms)
            exps = np.array(monos, dtype=int).reshape(-1, 4)
            coeffs = np.array([[float(v) for v in self.terms[m]] for m in monos],
                              dtype=float).reshape(-1, 4)
            self._compiled = (exps, coeffs)
        return self._compiled

    def eval_array(self, x) -> np.ndarray:
        """Float evaluation at an array of points of shape ``(..., 4)``."""
        x = as_qarray(x)
        shape = x.shape[:-1]
        flat = x.reshape(-1, 4)
        exps, coeffs = self._compile()
        out = np.zeros((flat.shape[0], 4))
        if not len(exps):
            return out.reshape(shape + (4,))
        top = int(exps.max())
        for start in range(0, flat.shape[0], _EVAL_CHUNK):
            blk = flat[start:start + _EVAL_CHUNK]
            pw = blk[:, :, None] ** np.arange(top + 1)[None, None, :]  # (n, 4, top+1)
            mono = np.ones((blk.shape[0], len(exps)))
            for k in range(4):
                mono *= pw[:, k, exps[:, k]]
            out[start:start + _EVAL_CHUNK] = mono @ coeffs
        return out.reshape(shape + (4,))

    # -- printing --------------------------------------------------------

    def sorted_terms(self):
        """By total degree, then lexicographically with high x0 powers first."""
        return sorted(self.terms.items(), key=lambda mc: (sum(mc[0]), tuple(-e for e in mc[0])))

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            coeff = "[" + ", ".join(_fmt_frac(v) for v in c) + "]"
            mono = "*".join(f"x{k}" if e == 1 else f"x{k}^{e}"
                            for k, e in enumerate(m) if e)
            parts.append(coeff + ("*" + mono if mono else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"RPoly4({self.pretty()})"


# ---------------------------------------------------------------------------

X_VARS = tuple(RPoly4.variable(k) for k in range(4))
X = RPoly4({(0, 0, 0, 0): 0, (1, 0, 0, 0): _UNITS[0], (0, 1, 0, 0): _UNITS[1],
            (0, 0, 1, 0): _UNITS[2], (0, 0, 0, 1): _UNITS[3]})
XBAR = RPoly4({(1, 0, 0, 0): _UNITS[0], (0, 1, 0, 0): _qscale(_UNITS[1], -1),
               (0, 0, 1, 0): _qscale(_UNITS[2], -1), (0, 0, 0, 1): _qscale(_UNITS[3], -1)})
NORM2 = RPoly4({(2, 0, 0, 0): 1, (0, 2, 0, 0): 1, (0, 0, 2, 0): 1, (0, 0, 0, 2): 1})
IMNORM2 = RPoly4({(0, 2, 0, 0): 1, (0, 0, 2, 0): 1, (0, 0, 0, 2): 1})


@lru_cache(maxsize=None)
def expand_power(n: int) -> RPoly4:
    """The quaternion power ``x^n`` expanded in the real coordinates."""
    if n < 0:
        raise ValueError("expand_power needs n >= 0")
    if n == 0:
        return RPoly4.constant(1)
    return expand_power(n - 1) * X


def divide_by_norm2(p: RPoly4):
    """Divide ``p`` by ``|x|^2``; return the quotient, or None if it does not divide.

    Long division in x0 against the monic ``x0^2 + (x1^2 + x2^2 + x3^2)``.
    """
    rem = dict(p.terms)
    quot: dict = {}
    while True:
        lead = max((m for m in rem if m[0] >= 2), default=None)
        if lead is None:
            break
        c = rem.pop(lead)
        q = (lead[0] - 2, lead[1], lead[2], lead[3])
        quot[q] = _qadd(quot.get(q, _QZERO), c)
        for k in (1, 2, 3):
            mm = list(q)
            mm[k] += 2
            mm = tuple(mm)
            s = _qadd(rem.get(mm, _QZERO), _qscale(c, -1))
            if _is_zero(s):
                rem.pop(mm, None)
            else:
                rem[mm] = s
    if rem:
        return None
    return RPoly4({m: c for m, c in quot.items()})


class RationalH:
    """``num(x) / |x|^(2m)``, kept with ``num`` not divisible by ``|x|^2``."""

    __slots__ = ("num", "m")

    def __init__(self, num, m: int = 0, canonical: bool = True):
        if not isinstance(num, RPoly4):
            num = RPoly4.constant(num)
        if m < 0:
            raise ValueError("denominator exponent must be nonnegative")
        if canonical:
            if num.is_zero():
                m = 0
            while m > 0:
                q = divide_by_norm2(num)
                if q is None:
                    break
                num, m = q, m - 1
        self.num = num
        self.m = m

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def degree(self) -> int | None:
        """Homogeneity degree, or None if not homogeneous."""
        if not self.num.is_homogeneous() or self.num.is_zero():
            return None
        return self.num.degree() - 2 * self.m

    def _lift(self, m: int) -> RPoly4:
        return self.num * (NORM2 ** (m - self.m))

    def __eq__(self, other):
        if isinstance(other, RPoly4):
            other = RationalH(other)
        if not isinstance(other, RationalH):
            try:
                other = RationalH(RPoly4.constant(other))
            except (TypeError, ValueError):
                return NotImplemented
        m = max(self.m, other.m)
        return self._lift(m) == other._lift(m)

    def __hash__(self):
        return hash((self.num, self.m))

    def __add__(self, other):
        if not isinstance(other, RationalH):
            other = RationalH(other if isinstance(other, RPoly4) else RPoly4.constant(other))
        m = max(self.m, other.m)
        return RationalH(self._lift(m) + other._lift(m), m)

    __radd__ = __add__

    def __neg__(self):
        return RationalH(-self.num, self.m, canonical=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalH(self.num * other, self.m)
        if isinstance(other, RPoly4):
            return RationalH(self.num * other, self.m)
        if isinstance(other, RationalH):
            return RationalH(self.num * other.num, self.m + other.m)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        if isinstance(other, RPoly4):
            return RationalH(other * self.num, self.m)
        return NotImplemented

    def lmul(self, q) -> "RationalH":
        return RationalH(self.num.lmul(q), self.m, canonical=False)

    def diff(self, k: int) -> "RationalH":
        # d_k (N r^-2m) = (r^2 d_k N - 2m x_k N) / r^(2m+2)
        if self.m == 0:
            return RationalH(self.num.diff(k))
        num = NORM2 * self.num.diff(k) - (X_VARS[k] * self.num) * (2 * self.m)
        return RationalH(num, self.m + 1)

    def laplacian(self) -> "RationalH":
        out = RationalH(RPoly4())
        for k in range(4):
            out = out + self.diff(k).diff(k)
        return out

    def _dirac(self, sign: int) -> "RationalH":
        out = self.diff(0)
        for k in (1, 2, 3):
            term = self.diff(k).lmul(_UNITS[k])
            out = out + term if sign > 0 else out - term
        return out * Fraction(1, 2)

    def crf(self) -> "RationalH":
        return self._dirac(+1)

    def crf_conj(self) -> "RationalH":
        return self._dirac(-1)

    def eval(self, x) -> Quaternion:
        xq = Quaternion.from_array(as_qarray(x))
        r2 = sum(Fraction(v) ** 2 for v in xq)
        if self.m and r2 == 0:
            raise SingularityError("rational function evaluated at the origin")
        den = r2 ** self.m
        return Quaternion(*(float(v / den) for v in self.num.eval_exact(xq)))

    def eval_array(self, x) -> np.ndarray:
        x = as_qarray(x)
        r2 = np.sum(x * x, axis=-1)
        if self.m and np.any(r2 == 0.0):
            raise SingularityError("rational function evaluated at the origin")
        return self.num.eval_array(x) / (r2 ** self.m)[..., None]

    def pretty(self) -> str:
        if self.m == 0:
            return self.num.pretty()
        return f"({self.num.pretty()}) / |x|^{2 * self.m}"

    def __repr__(self):
        return f"RationalH({self.pretty()})"


# ---------------------------------------------------------------------------
# operator-style entry points accepting either kind

def laplacian(p):
    return p.laplacian()


def crf(p):
    return p.crf()


def crf_conj(p):
    return p.crf_conj()


def evaluate(p, x):
    """Evaluate an RPoly4/RationalH at a Quaternion (exact) or array (float)."""
    if isinstance(x, Quaternion):
        return p.eval(x)
    return p.eval_array(x)
