"""Closed hypersurfaces in R^4 and tensor-product quadrature on them.

Two surfaces are supported: the 3-sphere and the boundary of an axis-aligned
box. A rule of order ``m`` uses

* sphere: Gauss-Legendre with m nodes in each polar angle and a 2m-point
  periodic trapezoid (offset by half a step) in the azimuth;
* box: an m x m x m Gauss-Legendre tensor grid on each of the 8 faces.

Integration reduces node contributions by pairwise summation in node order,
so results do not depend on how the density was evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .errors import IntegrationError
from .quat import as_qarray


@dataclass(frozen=True)
class Sphere3:
    center: tuple = (0.0, 0.0, 0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        if len(c) != 4:
            raise ValueError("sphere center needs 4 components")
        object.__setattr__(self, "center", c)
        if not self.radius > 0:
            raise ValueError("sphere radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def scale(self) -> float:
        return self.radius

    def area(self) -> float:
        return 2.0 * math.pi ** 2 * self.radius ** 3

    def signed_distance(self, x) -> np.ndarray:
        """Negative inside, positive outside."""
        x = as_qarray(x)
        return np.sqrt(np.sum((x - np.array(self.center)) ** 2, axis=-1)) - self.radius

    def meets_axis_ray(self, upper: float) -> bool:
        """Does the closed ball meet ``{t real : t <= upper}``?"""
        c = np.array(self.center)
        t = min(c[0], upper)
        return math.hypot(c[0] - t, float(np.linalg.norm(c[1:]))) <= self.radius

    def meets_point(self, p) -> bool:
        return float(self.signed_distance(p)) <= 0.0


@dataclass(frozen=True)
class Box4:
    lo: tuple = (-1.0, -1.0, -1.0, -1.0)
    hi: tuple = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != 4 or len(hi) != 4:
            raise ValueError("box corners need 4 components")
        if not all(a < b for a, b in zip(lo, hi)):
            raise ValueError("box needs min < max in every coordinate")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def scale(self) -> float:
        return max(b - a for a, b in zip(self.lo, self.hi))

    def area(self) -> float:
        side = [b - a for a, b in zip(self.lo, self.hi)]
        return 2.0 * sum(math.prod(side[:k] + side[k + 1:]) for k in range(4))

    def signed_distance(self, x) -> np.ndarray:
        x = as_qarray(x)
        lo, hi = np.array(self.lo), np.array(self.hi)
        outside = np.maximum(np.maximum(lo - x, x - hi), 0.0)
        out_d = np.sqrt(np.sum(outside ** 2, axis=-1))
        in_d = np.min(np.minimum(x - lo, hi - x), axis=-1)
        return np.where(out_d > 0, out_d, -in_d)

    def meets_axis_ray(self, upper: float) -> bool:
        return (all(self.lo[k] <= 0.0 <= self.hi[k] for k in (1, 2, 3))
                and self.lo[0] <= upper)

    def meets_point(self, p) -> bool:
        return float(self.signed_distance(p)) <= 0.0


@dataclass(frozen=True)
class Rule:
    """Nodes of a rule: points ``y``, outward unit ``normal`` and ``weight`` (dsigma)."""
    y: np.ndarray
    normal: np.ndarray
    weight: np.ndarray

    def __len__(self):
        return len(self.weight)


@lru_cache(maxsize=64)
def _gauss(m: int):
    return np.polynomial.legendre.leggauss(m)


def _sphere_rule(s: Sphere3, m: int) -> Rule:
    t, w = _gauss(m)
    psi = 0.5 * math.pi * (t + 1.0)
    wpsi = 0.5 * math.pi * w
    theta, wtheta = psi, wpsi
    nphi = 2 * m
    phi = (np.arange(nphi) + 0.5) * (2.0 * math.pi / nphi)
    wphi = np.full(nphi, 2.0 * math.pi / nphi)
    P, T, F = np.meshgrid(psi, theta, phi, indexing="ij")
    WP, WT, WF = np.meshgrid(wpsi, wtheta, wphi, indexing="ij")
    sp, st = np.sin(P), np.sin(T)
    unit = np.stack([np.cos(P), sp * np.cos(T), sp * st * np.cos(F), sp * st * np.sin(F)],
                    axis=-1).reshape(-1, 4)
    r = s.radius
    weight = (r ** 3 * sp ** 2 * st * WP * WT * WF).reshape(-1)
    y = np.array(s.center) + r * unit
    if s.center[1:] == (0.0, 0.0, 0.0):
        # nodes never sit on the real axis: sin(psi) > 0 at Gauss nodes
        if not np.all(np.sum(y[:, 1:] ** 2, axis=-1) > 0.0):
            raise RuntimeError("sphere rule placed a node on the real axis")
    return Rule(y, unit, weight)


def _box_rule(b: Box4, m: int) -> Rule:
    t, w = _gauss(m)
    ys, ns, ws = [], [], []
    for k in range(4):
        others = [j for j in range(4) if j != k]
        grids, wgrids = [], []
        for j in others:
            half = 0.5 * (b.hi[j] - b.lo[j])
            grids.append(b.lo[j] + half * (t + 1.0))
            wgrids.append(half * w)
        G = np.meshgrid(*grids, indexing="ij")
        W = np.meshgrid(*wgrids, indexing="ij")
        wface = (W[0] * W[1] * W[2]).reshape(-1)
        for side, val in ((-1.0, b.lo[k]), (1.0, b.hi[k])):
            y = np.empty((wface.size, 4))
            y[:, k] = val
            for j, g in zip(others, G):
                y[:, j] = g.reshape(-1)
            n = np.zeros((wface.size, 4))
            n[:, k] = side
            ys.append(y)
            ns.append(n)
            ws.append(wface)
    return Rule(np.concatenate(ys), np.concatenate(ns), np.concatenate(ws))


@lru_cache(maxsize=32)
def _cached_rule(surface, order: int) -> Rule:
    if order < 2:
        raise ValueError("quadrature order must be >= 2")
    if isinstance(surface, Sphere3):
        rule = _sphere_rule(surface, order)
    elif isinstance(surface, Box4):
        rule = _box_rule(surface, order)
    else:
        raise TypeError(f"unsupported surface {surface!r}")
    for a in (rule.y, rule.normal, rule.weight):
        a.setflags(write=False)
    return rule


def nodes(surface, order: int) -> Rule:
    return _cached_rule(surface, int(order))


def pairwise_sum(values: np.ndarray) -> np.ndarray:
    """Sum along axis 0 by a fixed binary tree over the given order."""
    v = np.asarray(values, dtype=float)
    if v.shape[0] == 0:
        return np.zeros(v.shape[1:])
    while v.shape[0] > 1:
        if v.shape[0] % 2:
            v = np.concatenate([v, np.zeros((1,) + v.shape[1:])])
        v = v[0::2] + v[1::2]
    return v[0]


def integrate(surface, order: int, density) -> np.ndarray:
    """``sum_k density(y_k, n_k) w_k`` for a quaternion-valued density.

    ``density`` is called once with all node points and normals, arrays of
    shape ``(N, 4)``, and must return ``(N, 4)``.
    """
    rule = nodes(surface, order)
    vals = np.asarray(density(rule.y, rule.normal), dtype=float)
    if vals.shape != rule.y.shape:
        raise IntegrationError(f"density returned shape {vals.shape}, expected {rule.y.shape}")
    bad = ~np.all(np.isfinite(vals), axis=-1)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise IntegrationError(f"non-finite density at node {k}, y = {rule.y[k].tolist()}")
    return pairwise_sum(vals * rule.weight[:, None])
