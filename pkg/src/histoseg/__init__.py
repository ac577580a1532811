"""Statistical image segmentation and object separation toolkit."""

from .analysis import (
    ComparisonRow,
    MssimReport,
    SsimParams,
    canny_edges,
    compare_methods,
    comparison_csv,
    mssim,
)
from .errors import DecodeError, DomainError, HistosegError
from .extraction import (
    BinaryMask,
    ExtractionResult,
    Fill,
    PipelineResult,
    SegmentSelection,
    binarize,
    extract_object,
    run_pipeline,
)
from .histogram_stats import (
    Histogram,
    RangeStats,
    build_histogram,
    kappa_thresholds,
    range_stats,
)
from .image_core import (
    GrayImage,
    RgbImage,
    YiqImage,
    decode_image,
    encode_png,
    luminance_gray,
    rgb_to_yiq,
    yiq_to_rgb,
)
from .thresholding import (
    Methodology,
    SegmentedImage,
    ThresholdSet,
    apply_segmentation,
    compute_thresholds,
    thresholds_m1,
    thresholds_m2,
    thresholds_otsu,
)

__all__ = [
    "BinaryMask",
    "ComparisonRow",
    "DecodeError",
    "DomainError",
    "ExtractionResult",
    "Fill",
    "GrayImage",
    "Histogram",
    "HistosegError",
    "Methodology",
    "MssimReport",
    "PipelineResult",
    "RangeStats",
    "RgbImage",
    "SegmentSelection",
    "SegmentedImage",
    "SsimParams",
    "ThresholdSet",
    "YiqImage",
    "apply_segmentation",
    "binarize",
    "build_histogram",
    "canny_edges",
    "compare_methods",
    "comparison_csv",
    "compute_thresholds",
    "decode_image",
    "encode_png",
    "extract_object",
    "kappa_thresholds",
    "luminance_gray",
    "mssim",
    "range_stats",
    "rgb_to_yiq",
    "run_pipeline",
    "thresholds_m1",
    "thresholds_m2",
    "thresholds_otsu",
    "yiq_to_rgb",
]
