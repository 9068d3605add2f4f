"""Numerical core: standardization, density estimation, correlation,
quantiles, and normalization.

All functions are pure and deterministic. Standardization uses the
population standard deviation, and quantiles interpolate linearly between
order statistics at position (n - 1) * q.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import (
    ConstantVector,
    DegenerateDistribution,
    EmptyInput,
    InvalidBandwidth,
    LengthMismatch,
)

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))


@dataclass(frozen=True)
class ZScoreSet:
    """Standardized values for one indicator.

    scores[k] = (raw[k] - mean) / stddev with the population standard
    deviation, so the scores have zero mean and unit spread by construction.
    """

    mean: float
    stddev: float
    scores: tuple[float, ...]
    source_indicator: str
    raw: tuple[float, ...]


@dataclass(frozen=True)
class KdeCurve:
    """A kernel density estimate sampled on an ordered grid."""

    bandwidth: float
    eval_points: tuple[float, ...]
    densities: tuple[float, ...]


@dataclass(frozen=True)
class CorrelationResult:
    """Pearson correlation with its two-sided significance."""

    r: float
    n: int
    p_value: float
    standard_error: float


def zscores(raw, source_indicator: str = "") -> ZScoreSet:
    """Standardize a vector: (value - mean) / population stddev.

    Raises DegenerateDistribution when fewer than two values are given or
    all values are equal.
    """
    arr = np.asarray(list(raw), dtype=float)
    if arr.size < 2:
        raise DegenerateDistribution(
            "need at least 2 values, got %d" % arr.size)
    mean = float(arr.mean())
    stddev = float(arr.std())
    if stddev == 0.0:
        raise DegenerateDistribution("all values equal; stddev is 0")
    scores = (arr - mean) / stddev
    return ZScoreSet(mean=mean, stddev=stddev,
                     scores=tuple(float(s) for s in scores),
                     source_indicator=source_indicator,
                     raw=tuple(float(v) for v in arr))


def silverman_bandwidth(raw) -> float:
    """Rule-of-thumb bandwidth: 0.9 * min(stddev, IQR/1.34) * n^(-1/5).

    Falls back to 1.06 * stddev * n^(-1/5) when the interquartile range is
    zero. Raises DegenerateDistribution when the spread is zero entirely.
    """
    values = [float(v) for v in raw]
    n = len(values)
    if n < 2:
        raise DegenerateDistribution("need at least 2 values")
    sd = float(np.std(values))
    if sd == 0.0:
        raise DegenerateDistribution("all values equal; no spread")
    q1, _, q3 = statistics.quantiles(values, n=4, method="exclusive")
    iqr = q3 - q1
    if iqr > 0.0:
        h = 0.9 * min(sd, iqr / 1.34) * n ** (-0.2)
    else:
        h = 1.06 * sd * n ** (-0.2)
    return float(h)


def kde(raw, eval_points, bandwidth: float | None = None) -> KdeCurve:
    """Gaussian kernel density estimate evaluated at the given points.

    density(x) = (1 / (n h)) * sum_k phi((x - raw[k]) / h) where phi is the
    standard normal pdf. When no bandwidth is supplied the Silverman rule is
    used.
    """
    samples = np.asarray(list(raw), dtype=float)
    if samples.size < 1:
        raise EmptyInput("kde requires at least one sample")
    h = silverman_bandwidth(samples) if bandwidth is None else float(bandwidth)
    if h <= 0.0:
        raise InvalidBandwidth("bandwidth must be positive, got %r" % h)
    grid = np.asarray(list(eval_points), dtype=float)
    u = (grid[:, None] - samples[None, :]) / h
    dens = np.exp(-0.5 * u * u).sum(axis=1) / (samples.size * h * _SQRT_2PI)
    return KdeCurve(bandwidth=float(h),
                    eval_points=tuple(float(x) for x in grid),
                    densities=tuple(float(d) for d in dens))


def kde_grid(raw, bandwidth: float | None = None,
             points: int = 512) -> KdeCurve:
    """KDE on an evenly spaced grid spanning [min - 4h, max + 4h]."""
    samples = [float(v) for v in raw]
    if not samples:
        raise EmptyInput("kde requires at least one sample")
    h = silverman_bandwidth(samples) if bandwidth is None else float(bandwidth)
    if h <= 0.0:
        raise InvalidBandwidth("bandwidth must be positive, got %r" % h)
    lo = min(samples) - 4.0 * h
    hi = max(samples) + 4.0 * h
    grid = np.linspace(lo, hi, points)
    return kde(samples, grid, bandwidth=h)


def pearson(x, y) -> CorrelationResult:
    """Sample Pearson correlation with a two-sided p-value.

    The p-value comes from t = r * sqrt((n - 2) / (1 - r^2)) referred to a
    Student's t distribution with n - 2 degrees of freedom; the standard
    error is sqrt((1 - r^2) / (n - 2)).
    """
    xa = np.asarray(list(x), dtype=float)
    ya = np.asarray(list(y), dtype=float)
    if xa.size != ya.size:
        raise LengthMismatch("length %d vs %d" % (xa.size, ya.size))
    n = int(xa.size)
    if n < 3:
        raise DegenerateDistribution("correlation needs at least 3 pairs")
    xd = xa - xa.mean()
    yd = ya - ya.mean()
    sx = float(np.sqrt((xd * xd).sum()))
    sy = float(np.sqrt((yd * yd).sum()))
    if sx == 0.0 or sy == 0.0:
        raise ConstantVector("correlation undefined for a constant vector")
    r = float((xd * yd).sum() / (sx * sy))
    r = max(-1.0, min(1.0, r))
    df = n - 2
    if abs(r) >= 1.0:
        p = 0.0
    else:
        t2 = r * r * df / (1.0 - r * r)
        # two-sided tail of Student's t via the regularized incomplete beta
        p = float(special.betainc(0.5 * df, 0.5, df / (df + t2)))
    se = float(np.sqrt((1.0 - r * r) / df))
    return CorrelationResult(r=r, n=n, p_value=p, standard_error=se)


def quantile_lower_bound(values, q: float) -> float:
    """The q-th quantile by linear interpolation on sorted order statistics.

    With n values the quantile sits at position (n - 1) * q; fractional
    positions interpolate between the neighbouring order statistics.
    """
    vals = sorted(float(v) for v in values)
    if not vals:
        raise EmptyInput("quantile of empty input")
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1), got %r" % q)
    pos = (len(vals) - 1) * q
    lo = int(np.floor(pos))
    hi = int(np.ceil(pos))
    if lo == hi:
        return vals[lo]
    frac = pos - lo
    return vals[lo] + frac * (vals[hi] - vals[lo])


def minmax_normalize(values) -> list[float]:
    """Map values affinely onto [0, 1]; requires max > min."""
    vals = [float(v) for v in values]
    if not vals:
        raise EmptyInput("cannot normalize empty input")
    lo = min(vals)
    hi = max(vals)
    if hi <= lo:
        raise DegenerateDistribution("max must exceed min for normalization")
    span = hi - lo
    return [(v - lo) / span for v in vals]


def summary(values) -> dict:
    """Max, mean, and median of a non-empty vector.

    The median uses midpoint interpolation for even lengths.
    """
    vals = [float(v) for v in values]
    if not vals:
        raise EmptyInput("summary of empty input")
    return {
        "max": float(np.max(vals)),
        "mean": float(np.mean(vals)),
        "median": float(np.median(vals)),
    }
