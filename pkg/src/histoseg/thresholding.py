"""Recursive variable-block multilevel thresholding and segment mapping.

Two placements are provided.  The nested recursion narrows the working
range toward the weighted mean, producing wide segments at the histogram
ends and fine ones mid-gray.  The chain recursion walks from the global
weighted mean outward to the ends, producing the opposite layout.  A
multilevel Otsu (maximum between-class variance) placement is included
as the comparison baseline.

Thresholds are integer gray levels in [1, 254], strictly increasing.
Pixel ownership is half-open: segment i covers [T_i, T_{i+1}) with the
last segment closed at 255, so every pixel has exactly one label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError
from .histogram_stats import Histogram, kappa_thresholds, range_stats, validate_kappa
from .image_core import GrayImage, round_half_away


class Methodology(str, Enum):
    M1 = "m1"
    M2 = "m2"
    OTSU = "otsu"


@dataclass(frozen=True)
class ThresholdSet:
    method: Methodology
    n: int
    kappa1: float
    kappa2: float
    thresholds: tuple[int, ...]
    segment_means: tuple[int, ...]
    segment_bounds: tuple[int, ...]
    degenerate: bool = False

    def __post_init__(self):
        t = self.thresholds
        if len(t) != self.n or any(b <= a for a, b in zip(t, t[1:])):
            raise DomainError("thresholds must be n strictly increasing levels")
        if t and (t[0] < 1 or t[-1] > 254):
            raise DomainError("thresholds must lie in [1, 254]")
        if len(self.segment_means) != self.n + 1:
            raise DomainError("need one segment mean per segment")

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "n": self.n,
            "kappa1": self.kappa1,
            "kappa2": self.kappa2,
            "thresholds": list(self.thresholds),
            "segment_means": list(self.segment_means),
            "degenerate": self.degenerate,
        }


@dataclass
class SegmentedImage:
    labels: np.ndarray
    mapped: GrayImage
    source_thresholds: ThresholdSet

    @property
    def height(self) -> int:
        return self.mapped.height

    @property
    def width(self) -> int:
        return self.mapped.width


def _validate_odd_n(n: int) -> int:
    n = int(n)
    if n < 1 or n % 2 == 0:
        raise DomainError("N must be odd and >= 1")
    if n > 253:
        raise DomainError("N must leave room for strictly increasing thresholds")
    return n


def _segment_bin_range(bounds: tuple[int, ...], i: int) -> tuple[int, int]:
    """Inclusive bin range owned by segment i under the half-open rule."""
    lo = bounds[i]
    hi = bounds[i + 1] - 1 if i < len(bounds) - 2 else bounds[i + 1]
    return lo, hi


def _segment_mean(h: Histogram, lo: int, hi: int) -> int:
    st = range_stats(h, lo, hi)
    value = st.mean  # midpoint already when the segment is empty
    return int(round_half_away(value))


def _segment_means(h: Histogram, bounds: tuple[int, ...]) -> tuple[int, ...]:
    means = []
    for i in range(len(bounds) - 1):
        lo, hi = _segment_bin_range(bounds, i)
        means.append(_segment_mean(h, lo, hi))
    return tuple(means)


def _resolve_thresholds(h: Histogram, candidates: list[int], n: int) -> tuple[list[int], bool]:
    """Force a candidate list into n strictly increasing levels in [1, 254].

    Duplicates are shifted up by one level where possible, otherwise
    dropped.  Missing levels are recovered by splitting the widest
    remaining segment at its weighted mean.  Returns the levels and a
    flag marking whether any repair was needed.
    """
    degenerate = False
    levels: list[int] = []
    for t in sorted(min(max(int(t), 1), 254) for t in candidates):
        while t in levels:
            t += 1
            degenerate = True
        if 1 <= t <= 254:
            levels.append(t)
        else:
            degenerate = True
    levels.sort()
    if len(levels) > n:  # can only happen after shift collisions
        levels = levels[:n]
        degenerate = True
    while len(levels) < n:
        degenerate = True
        bounds = [0] + levels + [255]
        widths = [bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1)]
        order = sorted(range(len(widths)), key=lambda i: (-widths[i], bounds[i]))
        placed = False
        for i in order:
            lo, hi = bounds[i], bounds[i + 1]
            if hi - lo < 2:
                continue
            seg_hi = hi - 1 if i < len(widths) - 1 else hi
            t = _segment_mean(h, lo, seg_hi)
            t = min(max(t, lo + 1), hi - 1)
            t = min(max(t, 1), 254)
            if t not in levels:
                levels.append(t)
                levels.sort()
                placed = True
                break
        if not placed:
            raise DomainError("cannot place the requested number of thresholds")
    return levels, degenerate


def _make_set(
    h: Histogram,
    method: Methodology,
    n: int,
    kappa1: float,
    kappa2: float,
    candidates: list[int],
    degenerate: bool,
) -> ThresholdSet:
    levels, repaired = _resolve_thresholds(h, candidates, n)
    bounds = tuple([0] + levels + [255])
    return ThresholdSet(
        method=method,
        n=n,
        kappa1=kappa1,
        kappa2=kappa2,
        thresholds=tuple(levels),
        segment_means=_segment_means(h, bounds),
        segment_bounds=bounds,
        degenerate=degenerate or repaired,
    )


def thresholds_m1(h: Histogram, n: int, kappa1: float, kappa2: float) -> ThresholdSet:
    """Nested-range recursion converging toward the weighted mean."""
    n = _validate_odd_n(n)
    kappa1 = validate_kappa(kappa1, "kappa1")
    kappa2 = validate_kappa(kappa2, "kappa2")
    if h.total == 0:
        raise DomainError("histogram is empty")
    degenerate = False
    lows: list[int] = []
    highs: list[int] = []
    a, b = 0, 255
    mid: int | None = None
    for _ in range((n - 1) // 2):
        st = range_stats(h, a, b)
        if st.mass == 0 or b - a < 2:
            degenerate = True
            mid = int(round_half_away((a + b) / 2.0))
            break
        low, high = kappa_thresholds(st, kappa1, kappa2)
        if low >= high:
            degenerate = True
            mid = int(round_half_away((a + b) / 2.0))
            break
        lows.append(low)
        highs.append(high)
        a, b = low, high
    if mid is None:
        st = range_stats(h, a, b)
        if st.mass == 0:
            degenerate = True
            mid = int(round_half_away((a + b) / 2.0))
        else:
            mid = int(round_half_away(st.mean))
    return _make_set(h, Methodology.M1, n, kappa1, kappa2, lows + [mid] + highs, degenerate)


def thresholds_m2(h: Histogram, n: int, kappa1: float, kappa2: float) -> ThresholdSet:
    """Chain recursion diverging from the weighted mean toward the ends."""
    n = _validate_odd_n(n)
    kappa1 = validate_kappa(kappa1, "kappa1")
    kappa2 = validate_kappa(kappa2, "kappa2")
    if h.total == 0:
        raise DomainError("histogram is empty")
    degenerate = False
    mid = int(round_half_away(range_stats(h, 0, 255).mean))
    k = (n - 1) // 2

    left: list[int] = []
    prev = mid
    for _ in range(k):
        st = range_stats(h, 0, prev)
        if st.mass == 0:
            degenerate = True
            t = int(round_half_away(prev / 2.0))
        else:
            t = int(round_half_away(st.mean - kappa1 * st.std))
            t = min(max(t, 0), prev)
        if t >= prev or t < 1:
            degenerate = True
            break
        left.append(t)
        prev = t

    right: list[int] = []
    prev = mid
    for _ in range(k):
        st = range_stats(h, prev, 255)
        if st.mass == 0:
            degenerate = True
            t = int(round_half_away((prev + 255) / 2.0))
        else:
            t = int(round_half_away(st.mean + kappa2 * st.std))
            t = min(max(t, prev), 255)
        if t <= prev or t > 254:
            degenerate = True
            break
        right.append(t)
        prev = t

    return _make_set(h, Methodology.M2, n, kappa1, kappa2, left + [mid] + right, degenerate)


def _class_score_table(h: Histogram) -> np.ndarray:
    """table[a, b] = (sum of i*count in a..b)^2 / (mass in a..b), 0 when empty.

    Between-class variance over a partition equals the sum of these
    terms up to a constant, so maximizing the sum maximizes it.
    """
    counts = h.counts.astype(np.float64)
    levels = np.arange(256, dtype=np.float64)
    cs = np.concatenate([[0.0], np.cumsum(counts)])
    cm = np.concatenate([[0.0], np.cumsum(counts * levels)])
    a = np.arange(256)[:, None]
    b = np.arange(256)[None, :]
    mass = cs[b + 1] - cs[a]
    moment = cm[b + 1] - cm[a]
    with np.errstate(divide="ignore", invalid="ignore"):
        table = np.where(mass > 0, moment * moment / np.where(mass > 0, mass, 1.0), 0.0)
    table[b < a] = 0.0
    return table


def _otsu_exhaustive(h: Histogram, n: int) -> list[int]:
    table = _class_score_table(h)
    if n == 1:
        scores = table[0, :255] + table[1:256, 255]
        return [int(np.argmax(scores))]
    if n == 2:
        best, best_t = -np.inf, None
        t2 = np.arange(1, 255)
        for t1 in range(0, 254):
            valid = t2 > t1
            scores = table[0, t1] + table[t1 + 1, t2] + table[t2 + 1, 255]
            scores = np.where(valid, scores, -np.inf)
            j = int(np.argmax(scores))
            if scores[j] > best:
                best, best_t = scores[j], [t1, int(t2[j])]
        return best_t
    # n == 3
    best, best_t = -np.inf, None
    idx = np.arange(256)
    for t1 in range(0, 253):
        t2 = idx[t1 + 1 : 254]
        t3 = idx[:255]
        scores = (
            table[0, t1]
            + table[t1 + 1, t2][:, None]
            + table[np.minimum(t2[:, None] + 1, 255), t3[None, :]]
            + table[t3 + 1, 255][None, :]
        )
        scores[t3[None, :] <= t2[:, None]] = -np.inf
        j = int(np.argmax(scores))
        r, c = divmod(j, scores.shape[1])
        if scores[r, c] > best:
            best, best_t = scores[r, c], [t1, int(t2[r]), int(t3[c])]
    return best_t


def _otsu_iterative(h: Histogram, n: int, max_sweeps: int = 100) -> list[int]:
    """Fixed-point refinement: thresholds move to midpoints of adjacent
    class means, seeded at equal-mass quantiles."""
    counts = h.counts.astype(np.float64)
    total = counts.sum()
    cum = np.cumsum(counts)
    t = []
    for j in range(1, n + 1):
        target = total * j / (n + 1)
        t.append(int(np.searchsorted(cum, target)))
    for i in range(1, n):  # enforce strictly increasing seeds
        t[i] = max(t[i], t[i - 1] + 1)
    t = [min(max(v, i + 1), 254 - (n - 1 - i)) for i, v in enumerate(t)]

    for _ in range(max_sweeps):
        bounds = [-1] + t + [255]
        means = []
        for i in range(n + 1):
            lo, hi = bounds[i] + 1, bounds[i + 1]
            st = range_stats(h, min(lo, 255), max(hi, min(lo, 255)))
            means.append(st.mean)
        new_t = []
        for i in range(n):
            v = int(round_half_away((means[i] + means[i + 1]) / 2.0))
            lo = new_t[-1] + 1 if new_t else 1
            hi = 254 - (n - 1 - i)
            new_t.append(min(max(v, lo), hi))
        if new_t == t:
            break
        t = new_t
    return t


def thresholds_otsu(h: Histogram, n: int) -> ThresholdSet:
    """Maximum between-class variance placement (recursive Otsu baseline).

    Exhaustive for n <= 3 with lexicographically-smallest tie-break,
    iterated conditional means for larger n.
    """
    n = int(n)
    if n < 1:
        raise DomainError("N must be >= 1")
    populated = int((h.counts > 0).sum())
    if populated < n + 1:
        raise DomainError(f"need at least {n + 1} populated bins, found {populated}")
    if n <= 3:
        levels = _otsu_exhaustive(h, n)
    else:
        levels = _otsu_iterative(h, n)
    return _make_set(h, Methodology.OTSU, n, 0.0, 0.0, levels, False)


def compute_thresholds(
    h: Histogram, method: Methodology, n: int, kappa1: float = 1.0, kappa2: float = 1.0
) -> ThresholdSet:
    if method == Methodology.M1:
        return thresholds_m1(h, n, kappa1, kappa2)
    if method == Methodology.M2:
        return thresholds_m2(h, n, kappa1, kappa2)
    return thresholds_otsu(h, n)


def apply_segmentation(img: GrayImage, ts: ThresholdSet) -> SegmentedImage:
    """Label each pixel by its segment and map it to the segment mean."""
    thresholds = np.asarray(ts.thresholds)
    labels = np.searchsorted(thresholds, img.values, side="right")
    mapped = np.asarray(ts.segment_means, dtype=np.uint8)[labels]
    return SegmentedImage(labels=labels, mapped=GrayImage(mapped), source_thresholds=ts)
