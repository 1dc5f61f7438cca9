"""The identity suite behind ``slicecauchy identities``.

Exact identities are checked as RPoly4/RationalH equalities; the two
numeric ones (negative-index power identity, kernel sum identity) use
seeded random points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
import time

import numpy as np

from .fueter import FUETER, FueterTable, powers_identity_residual, zonal
from .kernels import TWO_PI2, k1k2_deriv
from .quat import qmul
from .sympoly import XBAR, RationalH, expand_power


@dataclass
class IdentityResult:
    name: str
    range: list
    kind: str
    passed: bool
    failures: list = field(default_factory=list)
    max_error: float | None = None
    seconds: float = 0.0

    def as_dict(self) -> dict:
        # wall-clock time stays off the report so equal seeds give equal documents
        d = {"name": self.name, "range": self.range, "kind": self.kind,
             "passed": self.passed, "failures": self.failures}
        if self.max_error is not None:
            d["max_error"] = self.max_error
        return d


def _exact(name, lo, hi, check, skip=()):
    t0 = time.perf_counter()
    bad = [n for n in range(lo, hi + 1) if n not in skip and not check(n)]
    return IdentityResult(name, [lo, hi], "exact", not bad, bad,
                          seconds=time.perf_counter() - t0)


def random_points(rng, count, rmin=0.5, rmax=2.0):
    v = rng.normal(size=(count, 4))
    v /= np.linalg.norm(v, axis=-1, keepdims=True)
    return v * rng.uniform(rmin, rmax, size=(count, 1))


def run_identities(seed: int = 0, table: FueterTable | None = None) -> list:
    table = table or FUETER
    P = table.get
    rng = np.random.default_rng(seed)
    results = []

    results.append(_exact(
        "eq_powers", 0, 10,
        lambda n: expand_power(n) * (n + 1) == P(n) - XBAR * P(n - 1)))

    t0 = time.perf_counter()
    base_ok = P(-1).is_zero() and P(-2).is_zero() and P(-3) == RationalH(XBAR, 2)
    results.append(IdentityResult("p_negative_base", [-3, -1], "exact", base_ok,
                                  [] if base_ok else ["P_-1, P_-2, P_-3"],
                                  seconds=time.perf_counter() - t0))

    results.append(_exact("harmonic_P", -8, 10, lambda n: P(n).laplacian().is_zero(),
                          skip=(-1, -2)))
    results.append(_exact("monogenic_P", -8, 10, lambda n: P(n).crf().is_zero(),
                          skip=(-1, -2)))
    results.append(_exact("harmonic_Z", 0, 10, lambda n: zonal(n).laplacian().is_zero()))
    results.append(_exact("crf_conj_recurrence", -7, 8,
                          lambda n: P(n).crf_conj() == P(n - 1) * (n + 2), skip=(-2,)))
    results.append(_exact("l_operator", 0, 8,
                          lambda n: (XBAR * P(n)).crf() == zonal(n) * (n + 2)))

    t0 = time.perf_counter()
    pts = random_points(rng, 100)
    worst = 0.0
    bad = []
    for n in range(-8, 0):
        e = float(np.max(powers_identity_residual(n, pts)))
        worst = max(worst, e)
        if not e < 1e-9:
            bad.append(n)
    results.append(IdentityResult("eq_powers_negative", [-8, -1], "numeric", not bad, bad,
                                  worst, time.perf_counter() - t0))

    t0 = time.perf_counter()
    x = random_points(rng, 100, 0.0, 1.0)
    y = random_points(rng, 100, 1.5, 2.5)
    y[:, 1:] += np.sign(y[:, 1:]) * 0.1  # keep |Im y| >= 0.1
    normal = random_points(rng, 100, 1.0, 1.0)
    worst = 0.0
    bad = []
    for n in range(0, 7):
        k1, k2 = k1k2_deriv(n, x, y, normal)
        want = factorial(n) / TWO_PI2 * qmul(P(-n - 3).eval_array(y - x), normal)
        err = np.linalg.norm(k1 + k2 - want, axis=-1) / np.linalg.norm(want, axis=-1)
        e = float(np.max(err))
        worst = max(worst, e)
        if not e < 1e-12:
            bad.append(n)
    results.append(IdentityResult("kernel_sum", [0, 6], "numeric", not bad, bad,
                                  worst, time.perf_counter() - t0))
    return results
