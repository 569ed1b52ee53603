"""Symbolic behaviour patterns and the approximate-match relation.

Two partial behaviours are summarised here: the trend of one element's
attribute over a time interval, and the distribution of an attribute over a
set of elements at one time point. The two aspectual behaviours compose
them: trends collected over the graph, and the evolution of distribution
statistics over time. Every summary is a small closed vocabulary so that
"approximately equal" is decidable and deterministic.

Trend classification rules, applied in priority order to the defined
samples (x = time index, y = value):

1. fewer than 2 samples                          -> DEGENERATE
2. zero value range, or |LS slope| <= eps*range  -> CONSTANT
3. non-decreasing / non-increasing steps         -> INCREASING / DECREASING
4. rise to a single interior maximum, then fall  -> PEAK (TROUGH mirrored)
5. anything else                                 -> FLUCTUATING

The slope epsilon is relative to the observed value range, which makes the
class invariant under y -> a*y + b for a > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .config import Config
from .errors import (
    EMPTY_SCOPE,
    KIND_MISMATCH,
    TYPE_ERROR,
    TgqError,
)
from .graph import AttrKind, GraphElementRef, TemporalGraph, TimeInterval


class TrendClass(str, Enum):
    INCREASING = "INCREASING"
    DECREASING = "DECREASING"
    CONSTANT = "CONSTANT"
    PEAK = "PEAK"
    TROUGH = "TROUGH"
    FLUCTUATING = "FLUCTUATING"
    DEGENERATE = "DEGENERATE"


class DistClass(str, Enum):
    UNIFORM = "UNIFORM"
    CONCENTRATED = "CONCENTRATED"
    BIMODAL = "BIMODAL"
    SKEWED_LEFT = "SKEWED_LEFT"
    SKEWED_RIGHT = "SKEWED_RIGHT"


class AspectAxis(str, Enum):
    TRENDS_OVER_GRAPH = "TRENDS_OVER_GRAPH"
    DISTRIBUTION_OVER_TIME = "DISTRIBUTION_OVER_TIME"


_OPPOSITE_TRENDS = {
    (TrendClass.INCREASING, TrendClass.DECREASING),
    (TrendClass.DECREASING, TrendClass.INCREASING),
    (TrendClass.PEAK, TrendClass.TROUGH),
    (TrendClass.TROUGH, TrendClass.PEAK),
}


@dataclass(frozen=True)
class TrendPattern:
    cls: TrendClass
    slope: float = 0.0  # least-squares slope divided by the value range
    extremum_pos: Optional[float] = None  # fraction of the interval, PEAK/TROUGH only

    def to_dict(self) -> dict:
        return {
            "kind": "trend",
            "class": self.cls.value,
            "slope": self.slope,
            "extremum_pos": self.extremum_pos,
        }


@dataclass(frozen=True)
class DistributionPattern:
    count: int
    mean: float
    stddev: float
    min: float
    max: float
    histogram: tuple  # normalized bin shares over [min, max]
    class_hint: DistClass

    def to_dict(self) -> dict:
        return {
            "kind": "distribution",
            "count": self.count,
            "mean": self.mean,
            "stddev": self.stddev,
            "min": self.min,
            "max": self.max,
            "histogram": list(self.histogram),
            "class_hint": self.class_hint.value,
        }


@dataclass(frozen=True)
class AspectualPattern:
    axis: AspectAxis
    # TRENDS_OVER_GRAPH: trend-class name -> element count
    frequencies: Optional[tuple] = None  # tuple of (class name, count), sorted
    # DISTRIBUTION_OVER_TIME: trends of the distribution statistics
    mean_trend: Optional[TrendPattern] = None
    stddev_trend: Optional[TrendPattern] = None

    def frequency_dict(self) -> dict:
        return dict(self.frequencies or ())

    def to_dict(self) -> dict:
        if self.axis == AspectAxis.TRENDS_OVER_GRAPH:
            return {
                "kind": "aspectual",
                "axis": self.axis.value,
                "frequencies": {k: v for k, v in (self.frequencies or ())},
            }
        return {
            "kind": "aspectual",
            "axis": self.axis.value,
            "mean_trend": self.mean_trend.to_dict() if self.mean_trend else None,
            "stddev_trend": self.stddev_trend.to_dict() if self.stddev_trend else None,
        }


# --- pattern literals (partially specified targets used by searches) --------


@dataclass(frozen=True)
class TrendLiteral:
    cls: TrendClass

    def to_dict(self) -> dict:
        return {"kind": "trend_literal", "class": self.cls.value}


@dataclass(frozen=True)
class DistLiteral:
    class_hint: DistClass

    def to_dict(self) -> dict:
        return {"kind": "distribution_literal", "class_hint": self.class_hint.value}


@dataclass(frozen=True)
class AspectFreqLiteral:
    frequencies: tuple  # tuple of (trend class name, count)

    def to_dict(self) -> dict:
        return {"kind": "aspectual_literal", "axis": AspectAxis.TRENDS_OVER_GRAPH.value,
                "frequencies": {k: v for k, v in self.frequencies}}


@dataclass(frozen=True)
class AspectTrendLiteral:
    mean_cls: TrendClass
    stddev_cls: TrendClass

    def to_dict(self) -> dict:
        return {"kind": "aspectual_literal", "axis": AspectAxis.DISTRIBUTION_OVER_TIME.value,
                "mean_class": self.mean_cls.value, "stddev_class": self.stddev_cls.value}


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def classify_trend(samples, cfg: Config) -> TrendPattern:
    """Classify a sequence of (x, y) samples; x must be strictly increasing."""
    if len(samples) < 2:
        return TrendPattern(TrendClass.DEGENERATE)
    xs = [float(x) for x, _ in samples]
    ys = [float(y) for _, y in samples]
    lo, hi = min(ys), max(ys)
    value_range = hi - lo
    slope = _ls_slope(xs, ys)
    norm_slope = slope / value_range if value_range > 0 else 0.0
    if value_range == 0.0:
        return TrendPattern(TrendClass.CONSTANT, 0.0)
    if abs(slope) <= cfg.slope_epsilon * value_range:
        return TrendPattern(TrendClass.CONSTANT, norm_slope)
    diffs = [ys[i + 1] - ys[i] for i in range(len(ys) - 1)]
    if all(d >= 0 for d in diffs):
        return TrendPattern(TrendClass.INCREASING, norm_slope)
    if all(d <= 0 for d in diffs):
        return TrendPattern(TrendClass.DECREASING, norm_slope)
    for extremum, cls in ((hi, TrendClass.PEAK), (lo, TrendClass.TROUGH)):
        first = ys.index(extremum)
        last = len(ys) - 1 - ys[::-1].index(extremum)
        if not (0 < first and last < len(ys) - 1):
            continue
        if any(v != extremum for v in ys[first:last + 1]):
            continue  # the extremum is revisited after a dip: no single apex
        rising = cls == TrendClass.PEAK
        before_ok = all(d >= 0 for d in diffs[:first]) if rising else all(d <= 0 for d in diffs[:first])
        after_ok = all(d <= 0 for d in diffs[last:]) if rising else all(d >= 0 for d in diffs[last:])
        if before_ok and after_ok:
            pos = (xs[first] - xs[0]) / (xs[-1] - xs[0])
            return TrendPattern(cls, norm_slope, pos)
    return TrendPattern(TrendClass.FLUCTUATING, norm_slope)


def trend(
    graph: TemporalGraph,
    cfg: Config,
    ref: GraphElementRef,
    interval: TimeInterval,
    attr: str,
) -> TrendPattern:
    """Trend of one element's attribute over a time interval."""
    if graph.attr_kind(attr) != AttrKind.NUMERIC:
        raise TgqError(TYPE_ERROR, f"trend needs a numeric attribute, '{attr}' is not")
    samples = []
    for t in interval.indices():
        if graph.defined_at(t, ref, attr, cfg):
            samples.append((t, graph.value_at(t, ref, attr, cfg)))
    return classify_trend(samples, cfg)


def classify_distribution(values, cfg: Config) -> DistributionPattern:
    if not values:
        raise TgqError(EMPTY_SCOPE, "no defined values in scope")
    values = sorted(float(v) for v in values)
    n = len(values)
    mean = math.fsum(values) / n
    variance = math.fsum((v - mean) ** 2 for v in values) / n
    stddev = math.sqrt(variance)
    lo, hi = values[0], values[-1]
    if lo == hi:
        histogram = (1.0,)
    else:
        bins = [0] * cfg.histogram_bins
        width = (hi - lo) / cfg.histogram_bins
        for v in values:
            idx = min(int((v - lo) / width), cfg.histogram_bins - 1)
            bins[idx] += 1
        histogram = tuple(b / n for b in bins)
    return DistributionPattern(
        count=n, mean=mean, stddev=stddev, min=lo, max=hi,
        histogram=histogram,
        class_hint=_hint(values, mean, variance, histogram),
    )


def _hint(values, mean, variance, histogram) -> DistClass:
    """Deterministic shape hint. Rules in priority order: degenerate mass in
    one spot; strong skew; two histogram modes; dominant bin; near-flat."""
    n = len(values)
    if n == 1 or values[0] == values[-1]:
        return DistClass.CONCENTRATED
    denom = variance ** 1.5
    if denom > 0:
        m3 = math.fsum((v - mean) ** 3 for v in values) / n
        skew = m3 / denom
        if skew >= 1.0:
            return DistClass.SKEWED_RIGHT
        if skew <= -1.0:
            return DistClass.SKEWED_LEFT
    if _local_maxima(histogram) >= 2:
        return DistClass.BIMODAL
    top = max(histogram)
    if top >= 0.5:
        return DistClass.CONCENTRATED
    if top - min(histogram) <= 0.5 / len(histogram):
        return DistClass.UNIFORM
    return DistClass.CONCENTRATED


def _local_maxima(histogram) -> int:
    count = 0
    h = list(histogram)
    for i, share in enumerate(h):
        if share <= 0:
            continue
        left = h[i - 1] if i > 0 else -1.0
        right = h[i + 1] if i < len(h) - 1 else -1.0
        if share > left and share > right:
            count += 1
    return count


def distribution(
    graph: TemporalGraph,
    cfg: Config,
    members,
    t: int,
    attr: str,
) -> DistributionPattern:
    """Distribution of an attribute over a set of elements at one time point."""
    if graph.attr_kind(attr) != AttrKind.NUMERIC:
        raise TgqError(TYPE_ERROR, f"distribution needs a numeric attribute, '{attr}' is not")
    values = [
        graph.value_at(t, m, attr, cfg)
        for m in members
        if graph.defined_at(t, m, attr, cfg)
    ]
    if not values:
        raise TgqError(
            EMPTY_SCOPE, f"no member has a value of '{attr}' at t={graph.label_of(t)}"
        )
    return classify_distribution(values, cfg)


def aspectual(
    graph: TemporalGraph,
    cfg: Config,
    members,
    interval: TimeInterval,
    attr: str,
    axis: AspectAxis,
) -> AspectualPattern:
    if axis == AspectAxis.TRENDS_OVER_GRAPH:
        counts: dict = {}
        for m in members:
            p = trend(graph, cfg, m, interval, attr)
            counts[p.cls.value] = counts.get(p.cls.value, 0) + 1
        return AspectualPattern(
            axis=axis, frequencies=tuple(sorted(counts.items()))
        )
    mean_series, std_series = [], []
    for t in interval.indices():
        try:
            d = distribution(graph, cfg, members, t, attr)
        except TgqError as err:
            if err.code == EMPTY_SCOPE:
                continue
            raise
        mean_series.append((t, d.mean))
        std_series.append((t, d.stddev))
    if not mean_series:
        raise TgqError(EMPTY_SCOPE, "no time point in the interval has any defined value")
    return AspectualPattern(
        axis=axis,
        mean_trend=classify_trend(mean_series, cfg),
        stddev_trend=classify_trend(std_series, cfg),
    )


# ---------------------------------------------------------------------------
# Similarity ("approximates")
# ---------------------------------------------------------------------------


def similarity(p1, p2, cfg: Config) -> float:
    """Score in [0, 1]; 1 means the observed behaviours match exactly.

    Both arguments must summarise the same behaviour kind.
    """
    score, _ = similarity_detail(p1, p2, cfg)
    return score


def opposite(p1, p2) -> bool:
    """True when two patterns are opposites (e.g. rising vs falling)."""
    _, flag = similarity_detail(p1, p2, Config())
    return flag


def similarity_detail(p1, p2, cfg: Config):
    """(score, opposite flag) for two patterns of the same kind."""
    if isinstance(p1, TrendPattern) and isinstance(p2, TrendPattern):
        return _trend_pair(p1.cls, p2.cls)
    if isinstance(p1, DistributionPattern) and isinstance(p2, DistributionPattern):
        hist = histogram_similarity(p1.histogram, p2.histogram)
        loc = _location_similarity(p1, p2)
        return cfg.dist_weight_histogram * hist + cfg.dist_weight_location * loc, False
    if isinstance(p1, AspectualPattern) and isinstance(p2, AspectualPattern):
        if p1.axis != p2.axis:
            raise TgqError(KIND_MISMATCH, "aspectual patterns have different axes")
        if p1.axis == AspectAxis.TRENDS_OVER_GRAPH:
            return _frequency_similarity(p1.frequency_dict(), p2.frequency_dict()), False
        s1, o1 = _trend_pair(p1.mean_trend.cls, p2.mean_trend.cls)
        s2, o2 = _trend_pair(p1.stddev_trend.cls, p2.stddev_trend.cls)
        return (s1 + s2) / 2.0, o1 and o2
    raise TgqError(
        KIND_MISMATCH,
        f"cannot compare {type(p1).__name__} with {type(p2).__name__}",
    )


_LITERAL_KINDS = (TrendLiteral, DistLiteral, AspectFreqLiteral, AspectTrendLiteral)


def match_score(target, candidate, cfg: Config):
    """(score, opposite) of a candidate pattern against a search target.

    The target may be a full pattern or a literal that pins only the class
    (trend class, distribution hint, aspectual table); a literal may appear
    on either side.
    """
    if isinstance(candidate, _LITERAL_KINDS) and not isinstance(target, _LITERAL_KINDS):
        target, candidate = candidate, target
    if isinstance(target, TrendLiteral):
        if isinstance(candidate, TrendLiteral):
            return _trend_pair(target.cls, candidate.cls)
        if not isinstance(candidate, TrendPattern):
            raise TgqError(KIND_MISMATCH, "trend literal vs non-trend candidate")
        return _trend_pair(target.cls, candidate.cls)
    if isinstance(target, DistLiteral):
        if not isinstance(candidate, DistributionPattern):
            raise TgqError(KIND_MISMATCH, "distribution literal vs non-distribution candidate")
        return (1.0 if target.class_hint == candidate.class_hint else 0.0), False
    if isinstance(target, AspectFreqLiteral):
        if not (isinstance(candidate, AspectualPattern)
                and candidate.axis == AspectAxis.TRENDS_OVER_GRAPH):
            raise TgqError(KIND_MISMATCH, "aspectual frequency literal vs other candidate")
        return _frequency_similarity(dict(target.frequencies), candidate.frequency_dict()), False
    if isinstance(target, AspectTrendLiteral):
        if not (isinstance(candidate, AspectualPattern)
                and candidate.axis == AspectAxis.DISTRIBUTION_OVER_TIME):
            raise TgqError(KIND_MISMATCH, "aspectual trend literal vs other candidate")
        s1, o1 = _trend_pair(target.mean_cls, candidate.mean_trend.cls)
        s2, o2 = _trend_pair(target.stddev_cls, candidate.stddev_trend.cls)
        return (s1 + s2) / 2.0, o1 and o2
    return similarity_detail(target, candidate, cfg)


def histogram_similarity(h1, h2) -> float:
    """1 - L1/2 over bin shares. Degenerate single-bin histograms denote a
    point mass: alike if both degenerate, else padded with empty bins."""
    a, b = list(h1), list(h2)
    if len(a) != len(b):
        width = max(len(a), len(b))
        a = a + [0.0] * (width - len(a))
        b = b + [0.0] * (width - len(b))
    l1 = math.fsum(abs(x - y) for x, y in zip(a, b))
    return 1.0 - 0.5 * l1


def _location_similarity(p1: DistributionPattern, p2: DistributionPattern) -> float:
    scale = max(p1.max, p2.max) - min(p1.min, p2.min)
    if scale <= 0:
        return 1.0 if p1.mean == p2.mean else 0.0
    mean_prox = 1.0 - min(1.0, abs(p1.mean - p2.mean) / scale)
    std_prox = 1.0 - min(1.0, abs(p1.stddev - p2.stddev) / scale)
    return (mean_prox + std_prox) / 2.0


def _trend_pair(c1: TrendClass, c2: TrendClass):
    if c1 == c2:
        return 1.0, False
    return 0.0, (c1, c2) in _OPPOSITE_TRENDS


def _frequency_similarity(f1: dict, f2: dict) -> float:
    """Total-variation similarity of two frequency tables."""
    n1 = sum(f1.values())
    n2 = sum(f2.values())
    if n1 == 0 or n2 == 0:
        return 1.0 if n1 == n2 else 0.0
    keys = set(f1) | set(f2)
    tv = 0.5 * math.fsum(abs(f1.get(k, 0) / n1 - f2.get(k, 0) / n2) for k in keys)
    return 1.0 - tv


def _ls_slope(xs, ys) -> float:
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    if sxx == 0.0:
        return 0.0
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx
