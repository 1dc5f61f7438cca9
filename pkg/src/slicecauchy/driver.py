"""Reconstruction of slice-regular functions and their slice derivatives
from boundary values by quadrature of the local Cauchy-type formula."""
from __future__ import annotations

from dataclasses import asdict, dataclass
import logging
import time

import numpy as np

from .errors import DomainError, PreconditionError, UnsupportedError
from .fueter import decompose_poly
from .kernels import NEAR_AXIS_EPS, combined_integrand, monogenic_integrand
from .quadrature import integrate, nodes
from .quat import Quaternion, as_qarray
from .slicefn import (EXCLUDE_NONPOSITIVE_AXIS, EXCLUDE_ORIGIN, SliceFn,
                      axial_quotient, eval_slice, s_operator)

log = logging.getLogger(__name__)

# evaluation points closer than this (times surface scale) to the boundary are rejected
DISTANCE_GUARD = 1e-3
# x0 step (times surface scale) for finite-difference reference derivatives
FD_STEP = 1e-4


@dataclass(frozen=True)
class ReconstructionReport:
    value: Quaternion
    reference: Quaternion
    abs_err: float
    rel_err: float
    order: int
    node_count: int
    runtime_ms: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["value"] = self.value.format()
        d["reference"] = self.reference.format()
        return d


def _check_region(f: SliceFn, surface, x: Quaternion, probe_outside: bool):
    guard = DISTANCE_GUARD * surface.scale
    d = float(surface.signed_distance(x.as_array()))
    if probe_outside:
        if d <= guard:
            raise PreconditionError(f"probe point must lie outside the surface (distance {d:g})")
    elif d >= -guard:
        raise PreconditionError(
            f"point must lie inside the surface at distance > {guard:g} (signed distance {d:g})")
    if not f.has_primitive():
        raise UnsupportedError(f"S f needs a slice primitive; none registered for {f.name!r}")
    excl = set(f.excludes) | set(f.primitive().excludes)
    if EXCLUDE_ORIGIN in excl and surface.meets_point(np.zeros(4)):
        raise DomainError(f"closed region contains 0, outside the domain of {f.name!r}")
    if EXCLUDE_NONPOSITIVE_AXIS in excl and surface.meets_axis_ray(0.0):
        raise DomainError(f"closed region meets the branch cut x <= 0 of {f.name!r}")


def _fd_x0(fn, x: np.ndarray, n: int, h: float) -> np.ndarray:
    # 5-point stencils in x0
    if n == 0:
        return fn(x)
    e = np.array([h, 0.0, 0.0, 0.0])
    if n == 2:
        return (-fn(x + 2 * e) + 16 * fn(x + e) - 30 * fn(x)
                + 16 * fn(x - e) - fn(x - 2 * e)) / (12 * h * h)
    inner = lambda p: _fd_x0(fn, p, n - 1, h)  # noqa: E731
    return (-inner(x + 2 * e) + 8 * inner(x + e) - 8 * inner(x - e) + inner(x - 2 * e)) / (12 * h)


def reference_derivative(f: SliceFn, x: Quaternion, deriv: int, scale: float = 1.0) -> Quaternion:
    """``d^n f / dx^n`` at x: registered derivatives where available, else x0 differences."""
    g = f
    k = 0
    while k < deriv:
        d = g.derivative()
        if d is None:
            break
        g, k = d, k + 1
    xa = x.as_array()
    if k == deriv:
        return Quaternion.from_array(eval_slice(g, xa))
    val = _fd_x0(lambda p: eval_slice(g, p), xa, deriv - k, FD_STEP * scale)
    return Quaternion.from_array(val)


def _density(f: SliceFn, x: np.ndarray, deriv: int, path: str, eps: float):
    if path == "monogenic":
        if not f.is_poly:
            raise UnsupportedError("the monogenic path needs a polynomial")
        pair = decompose_poly(f)
        q1, q2 = pair.q1_poly(), pair.q2_poly()

        def density(y, n):
            return monogenic_integrand(x, y, n, q1.eval_array(y), q2.eval_array(y), deriv)
        return density

    if path != "kernel":
        raise ValueError(f"unknown path {path!r}")

    def density(y, n):
        fval = eval_slice(f, y)
        sfval = s_operator(f, y)
        near = np.sqrt(np.sum(y[:, 1:] ** 2, axis=-1)) < eps
        qval = None
        if np.any(near):
            qval = np.zeros_like(y)
            if f.is_poly:
                qval[near] = decompose_poly(f).q2_poly().eval_array(y[near])
            else:
                qval[near] = axial_quotient(f, y[near], eps=eps)
        return combined_integrand(x, y, n, fval, sfval, qval, deriv=deriv, eps=eps)
    return density


def reconstruct(f: SliceFn, surface, x, deriv: int = 0, order: int = 48,
                probe_outside: bool = False, path: str = "kernel") -> ReconstructionReport:
    """Evaluate the boundary integral for ``d^deriv f/dx^deriv`` at x.

    ``path="kernel"`` integrates ``K1 f + K2 S f``; ``path="monogenic"``
    (polynomials only) integrates ``E n Q1 - xbar E n Q2`` from the exact
    decomposition. With ``probe_outside`` x must lie outside the surface and
    the reference value is 0.
    """
    if deriv < 0:
        raise ValueError("derivative order must be nonnegative")
    x = x if isinstance(x, Quaternion) else Quaternion.from_array(as_qarray(x))
    _check_region(f, surface, x, probe_outside)
    t0 = time.perf_counter()
    eps = NEAR_AXIS_EPS * surface.scale
    value = integrate(surface, order, _density(f, x.as_array(), deriv, path, eps))
    runtime = 1e3 * (time.perf_counter() - t0)
    if probe_outside:
        ref = Quaternion()
    else:
        ref = reference_derivative(f, x, deriv, surface.scale)
    value = Quaternion.from_array(value)
    abs_err = abs(value - ref)
    report = ReconstructionReport(
        value=value, reference=ref, abs_err=abs_err,
        rel_err=abs_err / max(1e-300, abs(ref)), order=int(order),
        node_count=len(nodes(surface, order)), runtime_ms=runtime)
    log.debug("reconstruct %s order=%d abs_err=%.3e", f.name, order, abs_err)
    return report


def convergence_sweep(f: SliceFn, surface, x, deriv: int = 0, orders=(),
                      probe_outside: bool = False, path: str = "kernel") -> list:
    return [reconstruct(f, surface, x, deriv, o, probe_outside, path) for o in orders]
