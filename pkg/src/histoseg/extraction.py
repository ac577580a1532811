"""Object separation: binarize chosen segments, gate the YIQ planes,
fill the background and reconstruct RGB.

The same binary mask gates all three planes.  Masked-out chroma is set
to 0 (neutral) and masked-out luminance to the fill constant, so a
white fill reconstructs as true white and a black fill as true black.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .histogram_stats import Histogram, build_histogram
from .image_core import GrayImage, RgbImage, YiqImage, luminance_gray, rgb_to_yiq, yiq_to_rgb
from .thresholding import Methodology, SegmentedImage, ThresholdSet, apply_segmentation, compute_thresholds


class Fill(str, Enum):
    BLACK = "black"
    WHITE = "white"

    @property
    def level(self) -> int:
        return 0 if self is Fill.BLACK else 255


@dataclass(frozen=True)
class SegmentSelection:
    selected: frozenset[int]
    fill: Fill = Fill.BLACK

    def __post_init__(self):
        object.__setattr__(self, "selected", frozenset(int(i) for i in self.selected))
        if not self.selected:
            raise DomainError("segment selection must be nonempty")
        if any(i < 0 for i in self.selected):
            raise DomainError("segment indices must be non-negative")


@dataclass
class BinaryMask:
    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.ndim != 2 or not np.isin(self.bits, (0, 1)).all():
            raise DomainError("mask must be a 2-D array of 0/1")

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    def to_gray(self) -> GrayImage:
        """0/255 rendering for PNG output."""
        return GrayImage(self.bits * np.uint8(255))


@dataclass
class ExtractionResult:
    mask: BinaryMask
    extracted_rgb: RgbImage
    extracted_y: GrayImage


@dataclass
class PipelineResult:
    yiq: YiqImage
    gray: GrayImage
    histogram: Histogram
    threshold_set: ThresholdSet
    segmented: SegmentedImage
    extraction: ExtractionResult


def binarize(seg: SegmentedImage, sel: SegmentSelection) -> BinaryMask:
    n_segments = len(seg.source_thresholds.segment_means)
    if any(i >= n_segments for i in sel.selected):
        raise DomainError(f"segment index out of range (have {n_segments} segments)")
    bits = np.isin(seg.labels, sorted(sel.selected)).astype(np.uint8)
    return BinaryMask(bits)


def extract_object(yiq: YiqImage, mask: BinaryMask, fill: Fill) -> ExtractionResult:
    if (yiq.height, yiq.width) != (mask.height, mask.width):
        raise DomainError("mask dimensions must match the image")
    keep = mask.bits.astype(bool)
    y_s = np.where(keep, yiq.y_plane, float(fill.level))
    i_s = np.where(keep, yiq.i_plane, 0.0)
    q_s = np.where(keep, yiq.q_plane, 0.0)
    gated = YiqImage(y_s, i_s, q_s)
    gray = luminance_gray(yiq)
    extracted_y = GrayImage(np.where(keep, gray.values, np.uint8(fill.level)))
    return ExtractionResult(mask=mask, extracted_rgb=yiq_to_rgb(gated), extracted_y=extracted_y)


def run_pipeline(
    img: RgbImage,
    method: Methodology,
    n: int,
    kappa1: float,
    kappa2: float,
    sel: SegmentSelection,
) -> PipelineResult:
    """Full decode-to-extraction composition, returning every
    intermediate artifact for reporting."""
    yiq = rgb_to_yiq(img)
    gray = luminance_gray(yiq)
    hist = build_histogram(gray)
    ts = compute_thresholds(hist, method, n, kappa1, kappa2)
    seg = apply_segmentation(gray, ts)
    mask = binarize(seg, sel)
    extraction = extract_object(yiq, mask, sel.fill)
    return PipelineResult(
        yiq=yiq,
        gray=gray,
        histogram=hist,
        threshold_set=ts,
        segmented=seg,
        extraction=extraction,
    )
