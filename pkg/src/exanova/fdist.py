"""Central and noncentral F distribution in 64-bit floats.

This is the only module that leaves exact arithmetic: rational test
statistics are converted to float here, for p-values, quantiles, and
power.  The central CDF uses the regularized incomplete beta via a
continued fraction; the noncentral CDF is the Poisson-weighted mixture
of incomplete beta terms with a tail-mass stopping rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["FParams", "f_cdf", "f_quantile", "p_value", "p_value_from", "power"]

_BETACF_TOL = 1e-14
_BETACF_MAX_ITER = 400
_POISSON_TAIL = 1e-13
_QUANTILE_TOL = 1e-12


@dataclass(frozen=True)
class FParams:
    """Degrees of freedom and noncentrality of an F distribution."""

    nu1: float
    nu2: float
    ncp: float = 0.0

    def __post_init__(self):
        if not (self.nu1 > 0 and self.nu2 > 0):
            raise ValueError("degrees of freedom must be positive")
        if self.ncp < 0:
            raise ValueError("noncentrality must be nonnegative")


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_TOL:
            return h
    return h


def _betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    lfront = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(lfront)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_cdf(x: float, nu1: float, nu2: float, ncp: float = 0.0) -> float:
    """CDF of the (noncentral) F distribution at x >= 0."""
    params = FParams(nu1, nu2, ncp)
    if x < 0:
        raise ValueError("F statistics are nonnegative")
    if x == 0.0:
        return 0.0
    z = params.nu1 * x / (params.nu1 * x + params.nu2)
    a = params.nu1 / 2.0
    b = params.nu2 / 2.0
    if params.ncp == 0.0:
        return _betainc_reg(a, b, z)
    half = params.ncp / 2.0
    pois = math.exp(-half)
    ibeta = _betainc_reg(a, b, z)
    # increment that steps I_z(a + k, b) down to I_z(a + k + 1, b)
    ldelta = (
        a * math.log(z)
        + b * math.log1p(-z)
        + math.lgamma(a + b)
        - math.lgamma(a + 1.0)
        - math.lgamma(b)
    )
    delta = math.exp(ldelta)
    total = 0.0
    mass = 0.0
    k = 0
    while True:
        total += pois * ibeta
        mass += pois
        if 1.0 - mass < _POISSON_TAIL:
            break
        if k > 100000:  # tail rule always trips long before this
            break
        ibeta -= delta
        if ibeta < 0.0:
            ibeta = 0.0
        delta *= z * (a + b + k) / (a + k + 1.0)
        pois *= half / (k + 1)
        k += 1
    return min(max(total, 0.0), 1.0)


def f_quantile(alpha: float, nu1: float, nu2: float) -> float:
    """Upper-alpha quantile of the central F distribution.

    Returns the point q with f_cdf(q) = 1 - alpha, by bisection.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be strictly between 0 and 1")
    FParams(nu1, nu2)
    target = 1.0 - alpha
    lo, hi = 0.0, 1.0
    while f_cdf(hi, nu1, nu2) < target:
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("quantile bracket overflow")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f_cdf(mid, nu1, nu2) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _QUANTILE_TOL * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def p_value_from(f: float, nu1: float, nu2: float) -> float:
    """Right-tail p-value of an observed central-F statistic."""
    if f < 0:
        raise ValueError("F statistics are nonnegative")
    return 1.0 - f_cdf(f, nu1, nu2)


def p_value(result) -> float:
    """Right-tail p-value for a TestResult with a defined F value."""
    if result.f_value is None:
        raise ValueError("F statistic is undefined; no p-value exists")
    return p_value_from(float(result.f_value), result.nu_num, result.nu_den)


def power(alpha: float, nu1: float, nu2: float, ncp: float) -> float:
    """Rejection probability of the size-alpha F test at noncentrality ncp."""
    crit = f_quantile(alpha, nu1, nu2)
    return 1.0 - f_cdf(crit, nu1, nu2, ncp)
