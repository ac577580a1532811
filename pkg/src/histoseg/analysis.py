"""Segmentation quality evaluation: windowed MSSIM and Canny edge maps.

MSSIM tiles both images into non-overlapping square windows (partial
edge blocks dropped) and averages the per-window similarity.  The
stabilizers are C1 = (k1*L)^2 and C2 = (k2*L)^2 with L the dynamic
range, i.e. the standard form of the cited metric.

The edge detector exists purely for visual verification of extraction
results; it plays no role in thresholding or segmentation.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import DomainError
from .extraction import BinaryMask
from .histogram_stats import build_histogram
from .image_core import GrayImage, RgbImage, luminance_gray, rgb_to_yiq
from .thresholding import Methodology, apply_segmentation, compute_thresholds


@dataclass(frozen=True)
class SsimParams:
    window: int = 8
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 255.0

    def __post_init__(self):
        if self.window < 2:
            raise DomainError("window side must be >= 2")
        if self.k1 <= 0 or self.k2 <= 0:
            raise DomainError("stabilizer constants must be positive")


@dataclass
class MssimReport:
    per_window: np.ndarray
    mssim: float
    window_count: int


def _windows(values: np.ndarray, w: int) -> np.ndarray:
    h_blocks = values.shape[0] // w
    w_blocks = values.shape[1] // w
    cropped = values[: h_blocks * w, : w_blocks * w].astype(np.float64)
    blocks = cropped.reshape(h_blocks, w, w_blocks, w).swapaxes(1, 2)
    return blocks.reshape(h_blocks * w_blocks, w * w)


def mssim(ref: GrayImage, test: GrayImage, params: SsimParams = SsimParams()) -> MssimReport:
    if (ref.height, ref.width) != (test.height, test.width):
        raise DomainError("images must share dimensions")
    w = params.window
    if ref.height < w or ref.width < w:
        raise DomainError("image smaller than the SSIM window")
    p = _windows(ref.values, w)
    q = _windows(test.values, w)
    c1 = (params.k1 * params.dynamic_range) ** 2
    c2 = (params.k2 * params.dynamic_range) ** 2
    mu_p = p.mean(axis=1)
    mu_q = q.mean(axis=1)
    var_p = (p * p).mean(axis=1) - mu_p * mu_p
    var_q = (q * q).mean(axis=1) - mu_q * mu_q
    cov = (p * q).mean(axis=1) - mu_p * mu_q
    ssim = ((2.0 * mu_p * mu_q + c1) * (2.0 * cov + c2)) / (
        (mu_p * mu_p + mu_q * mu_q + c1) * (var_p + var_q + c2)
    )
    return MssimReport(per_window=ssim, mssim=float(ssim.mean()), window_count=ssim.size)


def canny_edges(
    img: GrayImage, sigma: float = 1.4, low: float = 0.1, high: float = 0.3
) -> BinaryMask:
    """Gaussian blur, 3x3 gradients, non-maximum suppression and
    hysteresis.  ``low`` and ``high`` are fractions of the maximum
    gradient magnitude."""
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    if not (0 <= low < high):
        raise DomainError("need 0 <= low < high")
    values = img.values.astype(np.float64)
    smoothed = ndimage.gaussian_filter(values, sigma=sigma)
    kx = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
    gx = ndimage.convolve(smoothed, kx, mode="nearest")
    gy = ndimage.convolve(smoothed, kx.T, mode="nearest")
    mag = np.hypot(gx, gy)
    peak = mag.max()
    if peak == 0.0:
        return BinaryMask(np.zeros_like(img.values, dtype=np.uint8))

    # Quantize gradient direction into 4 bins and compare against the
    # two neighbours along that direction.
    angle = np.degrees(np.arctan2(gy, gx)) % 180.0
    padded = np.pad(mag, 1, mode="constant")

    def shifted(dy: int, dx: int) -> np.ndarray:
        return padded[1 + dy : 1 + dy + mag.shape[0], 1 + dx : 1 + dx + mag.shape[1]]

    bins = [
        ((angle < 22.5) | (angle >= 157.5), (0, 1), (0, -1)),
        ((angle >= 22.5) & (angle < 67.5), (1, -1), (-1, 1)),
        ((angle >= 67.5) & (angle < 112.5), (1, 0), (-1, 0)),
        ((angle >= 112.5) & (angle < 157.5), (-1, -1), (1, 1)),
    ]
    suppressed = np.zeros_like(mag)
    for sel, (dy1, dx1), (dy2, dx2) in bins:
        keep = sel & (mag >= shifted(dy1, dx1)) & (mag >= shifted(dy2, dx2))
        suppressed[keep] = mag[keep]

    strong = suppressed >= high * peak
    weak = suppressed >= low * peak
    labels, count = ndimage.label(weak, structure=np.ones((3, 3), dtype=int))
    if count == 0:
        return BinaryMask(np.zeros_like(img.values, dtype=np.uint8))
    keep_ids = np.unique(labels[strong])
    keep_ids = keep_ids[keep_ids > 0]
    edges = np.isin(labels, keep_ids).astype(np.uint8)
    return BinaryMask(edges)


@dataclass(frozen=True)
class ComparisonRow:
    method: Methodology
    n: int
    mssim: float


_METHOD_ORDER = (Methodology.M1, Methodology.M2, Methodology.OTSU)


def compare_methods(
    img: RgbImage,
    n_list: list[int],
    kappa1: float = 1.0,
    kappa2: float = 1.0,
    params: SsimParams = SsimParams(),
) -> list[ComparisonRow]:
    """MSSIM of the mapped Y plane against the original, for every
    method at every requested threshold count."""
    if not n_list:
        raise DomainError("n_list must be nonempty")
    gray = luminance_gray(rgb_to_yiq(img))
    hist = build_histogram(gray)

    def score(method: Methodology, n: int) -> ComparisonRow:
        ts = compute_thresholds(hist, method, n, kappa1, kappa2)
        seg = apply_segmentation(gray, ts)
        return ComparisonRow(method, n, mssim(gray, seg.mapped, params).mssim)

    jobs = [(m, n) for n in n_list for m in _METHOD_ORDER]
    workers = max(1, int(os.environ.get("HISTOSEG_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda j: score(*j), jobs))
    return [score(m, n) for m, n in jobs]


def comparison_csv(rows: list[ComparisonRow], image_name: str) -> str:
    lines = ["image,method,n,mssim"]
    lines += [f"{image_name},{r.method.value},{r.n},{r.mssim:.9f}" for r in rows]
    return "\n".join(lines) + "\n"
