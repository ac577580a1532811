"""256-bin histograms and the weighted sub-range statistics driving
threshold placement.

A threshold pair is placed at mean -/+ kappa * std of the populated bins
inside a range.  Empty ranges degrade to (midpoint, std 0) with a zero
mass so that callers can detect and handle sparse histograms instead of
dividing by zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .image_core import GrayImage, round_half_away

KAPPA_MAX = 8.0


@dataclass(frozen=True)
class Histogram:
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (256,):
            raise DomainError("histogram needs exactly 256 bins")
        if (counts < 0).any():
            raise DomainError("bin counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_csv(self) -> str:
        """One "value,count" line per bin, all 256 bins."""
        return "\n".join(f"{v},{int(c)}" for v, c in enumerate(self.counts)) + "\n"


@dataclass(frozen=True)
class RangeStats:
    a: int
    b: int
    mass: int
    mean: float
    std: float


def build_histogram(img: GrayImage) -> Histogram:
    return Histogram(np.bincount(img.values.ravel(), minlength=256))


def range_stats(h: Histogram, a: int, b: int) -> RangeStats:
    """Weighted mean and standard deviation of bins a..b inclusive."""
    if not (0 <= a <= b <= 255):
        raise DomainError(f"invalid bin range [{a}, {b}]")
    counts = h.counts[a : b + 1].astype(np.float64)
    mass = counts.sum()
    if mass == 0:
        return RangeStats(a, b, 0, (a + b) / 2.0, 0.0)
    levels = np.arange(a, b + 1, dtype=np.float64)
    mean = float((counts * levels).sum() / mass)
    var = float((counts * (levels - mean) ** 2).sum() / mass)
    return RangeStats(a, b, int(mass), mean, np.sqrt(max(var, 0.0)))


def validate_kappa(kappa: float, name: str = "kappa") -> float:
    kappa = float(kappa)
    if not (0.0 <= kappa <= KAPPA_MAX) or not np.isfinite(kappa):
        raise DomainError(f"{name} must lie in [0, {KAPPA_MAX}]")
    return kappa


def kappa_thresholds(stats: RangeStats, kappa1: float, kappa2: float) -> tuple[int, int]:
    """Gray levels at mean -/+ kappa*std, clamped into the stats range."""
    kappa1 = validate_kappa(kappa1, "kappa1")
    kappa2 = validate_kappa(kappa2, "kappa2")
    if stats.mass <= 0:
        raise DomainError("kappa thresholds need a populated range")
    low = int(round_half_away(stats.mean - kappa1 * stats.std))
    high = int(round_half_away(stats.mean + kappa2 * stats.std))
    low = min(max(low, stats.a), stats.b)
    high = min(max(high, stats.a), stats.b)
    return low, high
