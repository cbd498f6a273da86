"""Minimal statistical kernel: OLS with inference, one-sample t-test,
Pearson correlation, and the Student-t machinery they share.

Deliberately self-contained (no scipy): the t CDF goes through a
continued-fraction regularized incomplete beta evaluated to 1e-14 relative
tolerance, and t quantiles are found by bisection on that CDF, so numerical
behavior is pinned by this module alone.  All p-values are two-sided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DegenerateInputError(ValueError):
    """Too few points or zero variance where variation is required."""


_BETA_EPS = 1e-14
_BETA_MAX_ITER = 600
_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not (a > 0 and b > 0):
        raise ValueError("shape parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # continued fraction converges fast only for x below the distribution bulk
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_cdf(t: float, df: int) -> float:
    """P(T <= t) for Student's t with ``df`` degrees of freedom.

    cdf(t) + cdf(-t) is exactly 1 up to float rounding, and cdf(0) = 0.5.
    """
    if df < 1:
        raise ValueError(f"df must be >= 1, got {df}")
    if t == 0.0:
        return 0.5
    x = df / (df + t * t)
    tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x)
    return tail if t < 0 else 1.0 - tail


def two_sided_p(t: float, df: int) -> float:
    """Two-sided p-value of a t statistic."""
    return 2.0 * student_t_cdf(-abs(t), df)


def student_t_quantile(p: float, df: int, tol: float = 1e-10) -> float:
    """Inverse CDF by bisection on student_t_cdf, to ``tol`` in t."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    if p == 0.5:
        return 0.0
    lo, hi = -1.0, 1.0
    while student_t_cdf(lo, df) > p:
        lo *= 2.0
        if lo < -1e10:
            break
    while student_t_cdf(hi, df) < p:
        hi *= 2.0
        if hi > 1e10:
            break
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if student_t_cdf(mid, df) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RegressionReport:
    """One line's worth of OLS output: fit, goodness, and inference."""

    slope: float
    intercept: float
    r_squared: float
    slope_ci95: tuple[float, float]
    intercept_p: float
    n: int
    residual_se: float


@dataclass(frozen=True)
class TTestReport:
    t: float
    df: int
    p: float
    mean: float
    n: int


def _moments(xs: list[float]) -> tuple[int, float, float]:
    """(n, mean, centered sum of squares)."""
    n = len(xs)
    mean = math.fsum(xs) / n
    ss = math.fsum((x - mean) ** 2 for x in xs)
    return n, mean, ss


def ols(xs: list[float], ys: list[float]) -> RegressionReport:
    """Ordinary least squares of ys on xs with classical inference.

    The 95% slope CI uses the exact Student-t quantile; intercept_p is the
    two-sided p-value of the intercept against zero.
    """
    if len(xs) != len(ys):
        raise ValueError("xs and ys must have equal length")
    n = len(xs)
    if n < 3:
        raise DegenerateInputError(f"need at least 3 points, got {n}")
    n, xbar, sxx = _moments(list(map(float, xs)))
    if sxx == 0.0:
        raise DegenerateInputError("xs must not all be equal")
    ybar = math.fsum(ys) / n
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    syy = math.fsum((y - ybar) ** 2 for y in ys)
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    ss_res = math.fsum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    if syy == 0.0:
        r_squared = 1.0
    else:
        r_squared = min(1.0, max(0.0, 1.0 - ss_res / syy))
    df = n - 2
    residual_se = math.sqrt(ss_res / df)
    se_slope = residual_se / math.sqrt(sxx)
    se_intercept = residual_se * math.sqrt(1.0 / n + xbar * xbar / sxx)
    tq = student_t_quantile(0.975, df)
    ci = (slope - tq * se_slope, slope + tq * se_slope)
    if se_intercept == 0.0:
        intercept_p = 1.0 if intercept == 0.0 else 0.0
    else:
        intercept_p = two_sided_p(intercept / se_intercept, df)
    return RegressionReport(
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
        slope_ci95=ci,
        intercept_p=intercept_p,
        n=n,
        residual_se=residual_se,
    )


def t_test_one_sample(xs: list[float], mu0: float) -> TTestReport:
    """One-sample two-sided t-test of mean(xs) against mu0."""
    n = len(xs)
    if n < 2:
        raise DegenerateInputError(f"need at least 2 observations, got {n}")
    n, mean, ss = _moments(list(map(float, xs)))
    if ss == 0.0:
        raise DegenerateInputError("sample variance is zero")
    s = math.sqrt(ss / (n - 1))
    t = (mean - mu0) / (s / math.sqrt(n))
    return TTestReport(t=t, df=n - 1, p=two_sided_p(t, n - 1), mean=mean, n=n)


def pearson(xs: list[float], ys: list[float]) -> tuple[float, float]:
    """Sample correlation with its two-sided significance.

    p comes from t = r * sqrt((n-2) / (1-r^2)) against a t distribution with
    n-2 degrees of freedom; |r| = 1 maps to p = 0.
    """
    if len(xs) != len(ys):
        raise ValueError("xs and ys must have equal length")
    n = len(xs)
    if n < 3:
        raise DegenerateInputError(f"need at least 3 points, got {n}")
    n, xbar, sxx = _moments(list(map(float, xs)))
    _, ybar, syy = _moments(list(map(float, ys)))
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInputError("both variables need nonzero variance")
    sxy = math.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    r = sxy / math.sqrt(sxx * syy)
    r = min(1.0, max(-1.0, r))
    if abs(r) == 1.0:
        return r, 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return r, two_sided_p(t, n - 2)
