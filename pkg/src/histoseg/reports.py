"""Matplotlib renderings of the delimited outputs.

Figures are written without software/date metadata so repeated runs
with identical inputs produce byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import ComparisonRow
from .histogram_stats import Histogram
from .thresholding import Methodology, ThresholdSet

_PNG_META = {"Software": None}


def save_histogram_figure(
    original: Histogram,
    segmented: Histogram,
    ts: ThresholdSet,
    path: Path,
) -> None:
    """Side-by-side original histogram and its delta-spike counterpart."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4), sharex=True)
    levels = np.arange(256)
    ax1.fill_between(levels, original.counts, step="mid", color="#4878a8", alpha=0.8)
    ax1.set_title("original Y histogram")
    for t in ts.thresholds:
        ax1.axvline(t, color="#c44e52", lw=0.8, ls="--")
    ax2.vlines(levels[segmented.counts > 0], 0, segmented.counts[segmented.counts > 0],
               color="#55a868", lw=2)
    ax2.set_title(f"segmented ({ts.method.value}, n={ts.n})")
    for ax in (ax1, ax2):
        ax.set_xlim(0, 255)
        ax.set_xlabel("gray level")
        ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)


def save_comparison_figure(rows: list[ComparisonRow], path: Path) -> None:
    """MSSIM against threshold count, one line per method."""
    fig, ax = plt.subplots(figsize=(6, 4))
    styles = {Methodology.M1: "o-", Methodology.M2: "s-", Methodology.OTSU: "^--"}
    for method in (Methodology.M1, Methodology.M2, Methodology.OTSU):
        pts = sorted((r.n, r.mssim) for r in rows if r.method == method)
        if pts:
            ax.plot([p[0] for p in pts], [p[1] for p in pts], styles[method],
                    label=method.value)
    ax.set_xlabel("number of thresholds")
    ax.set_ylabel("MSSIM")
    ax.set_ylim(0, 1.02)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)
