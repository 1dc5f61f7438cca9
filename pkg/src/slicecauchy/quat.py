"""Quaternion arithmetic.

Two layers live here: a small immutable :class:`Quaternion` value type for
scalar work, and array helpers (``qmul``, ``qconj``, ...) operating on
``(..., 4)`` float arrays, which the kernels and quadrature use to evaluate
many nodes at once. Component order is always ``(w, x, y, z)`` along
``(1, i, j, k)``.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, ParseError

# |Im x| <= REAL_AXIS_TOL * max(1, |x|) counts as real
REAL_AXIS_TOL = 1e-13


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise ValueError(f"expected shape (4,), got {a.shape}")
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @classmethod
    def parse(cls, text: str) -> "Quaternion":
        return cls(*parse_components(text))

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    def __iter__(self):
        return iter((self.w, self.x, self.y, self.z))

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w / other, self.x / other,
                              self.y / other, self.z / other)
        return NotImplemented

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return abs(self - _coerce(other)) <= tol * max(1.0, abs(self))

    def format(self) -> str:
        return format_components(tuple(self))

    def __str__(self) -> str:
        return self.format()


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def _coerce(v):
    if isinstance(v, Quaternion):
        return v
    if isinstance(v, (int, float)):
        return Quaternion(float(v))
    return None


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q`` (i² = j² = k² = ijk = -1)."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return Quaternion(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def inv(x: Quaternion) -> Quaternion:
    n2 = x.norm2()
    if n2 == 0.0:
        raise DomainError("cannot invert the zero quaternion")
    return x.conj() / n2


def decompose(x: Quaternion):
    """Split ``x = alpha + J*beta`` with ``beta = |Im x|`` and ``J**2 = -1``.

    Returns ``(alpha, beta, J)``; ``J`` is None (and beta 0) when x is real
    up to the axis tolerance.
    """
    beta = math.sqrt(x.x * x.x + x.y * x.y + x.z * x.z)
    if beta <= REAL_AXIS_TOL * max(1.0, abs(x)):
        return x.w, 0.0, None
    return x.w, beta, Quaternion(0.0, x.x / beta, x.y / beta, x.z / beta)


# ---------------------------------------------------------------------------
# array layer: quaternions as trailing axis of length 4

def as_qarray(v) -> np.ndarray:
    if isinstance(v, Quaternion):
        return v.as_array()
    a = np.asarray(v, dtype=float)
    if a.shape[-1:] != (4,):
        raise ValueError(f"quaternion arrays need a trailing axis of 4, got {a.shape}")
    return a


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ], axis=-1)


def qconj(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qnorm2(a: np.ndarray) -> np.ndarray:
    return np.sum(np.asarray(a, dtype=float) ** 2, axis=-1)


def qinv(a: np.ndarray) -> np.ndarray:
    n2 = qnorm2(a)
    if np.any(n2 == 0.0):
        raise DomainError("cannot invert the zero quaternion")
    return qconj(a) / n2[..., None]


def qreal(r) -> np.ndarray:
    """Embed real scalars (any shape) as quaternions."""
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape + (4,))
    out[..., 0] = r
    return out


def qdecompose(a: np.ndarray):
    """Vectorised :func:`decompose`: ``(alpha, beta, J)`` arrays.

    Where a point is real, ``beta`` is 0 and ``J`` is the zero quaternion.
    """
    a = np.asarray(a, dtype=float)
    alpha = a[..., 0]
    beta = np.sqrt(np.sum(a[..., 1:] ** 2, axis=-1))
    real = beta <= REAL_AXIS_TOL * np.maximum(1.0, np.sqrt(qnorm2(a)))
    safe = np.where(real, 1.0, beta)
    unit = np.zeros_like(a)
    unit[..., 1:] = a[..., 1:] / safe[..., None]
    unit[real] = 0.0
    beta = np.where(real, 0.0, beta)
    return alpha, beta, unit


# ---------------------------------------------------------------------------
# text form "w,x,y,z"

def parse_components(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise ParseError(f"quaternion literal {text!r} needs 4 comma-separated fields, got {len(parts)}")
    out = []
    pos = 0
    for part in parts:
        try:
            v = float(part.strip())
        except ValueError:
            raise ParseError(f"bad number {part.strip()!r} at position {pos} in {text!r}") from None
        if not math.isfinite(v):
            raise ParseError(f"non-finite number {part.strip()!r} at position {pos} in {text!r}")
        out.append(v)
        pos += len(part) + 1
    return tuple(out)


def format_components(c) -> str:
    return ",".join(repr(float(v)) for v in c)
