"""Raster types, codecs and RGB <-> YIQ conversion.

All pixel math is done in float64 and only quantized at the edges
(gray plane extraction, RGB reconstruction).  The rounding convention
everywhere in this package is round-half-away-from-zero, so a constant
Y plane of 100.5 becomes 101, not 100.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, DomainError

# NTSC FCC primaries.  The I and Q rows sum to zero, so neutral grays
# have I = Q = 0.
YIQ_FROM_RGB = np.array(
    [
        [0.299, 0.587, 0.114],
        [0.595716, -0.274453, -0.321263],
        [0.211456, -0.522591, 0.311135],
    ]
)
RGB_FROM_YIQ = np.linalg.inv(YIQ_FROM_RGB)

_SUPPORTED_FORMATS = {"PNG", "JPEG", "BMP", "PPM"}


def round_half_away(x):
    """Round to nearest integer, halves away from zero."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


@dataclass
class RgbImage:
    """8-bit RGB raster, shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise DomainError("RgbImage expects an (H, W, 3) array")
        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise DomainError("image must be at least 1x1")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass
class YiqImage:
    """Real-valued YIQ planes, each shape (height, width)."""

    y_plane: np.ndarray
    i_plane: np.ndarray
    q_plane: np.ndarray

    def __post_init__(self):
        self.y_plane = np.asarray(self.y_plane, dtype=np.float64)
        self.i_plane = np.asarray(self.i_plane, dtype=np.float64)
        self.q_plane = np.asarray(self.q_plane, dtype=np.float64)
        if not (self.y_plane.shape == self.i_plane.shape == self.q_plane.shape):
            raise DomainError("YIQ planes must share one shape")
        if self.y_plane.ndim != 2:
            raise DomainError("YIQ planes must be 2-D")

    @property
    def height(self) -> int:
        return self.y_plane.shape[0]

    @property
    def width(self) -> int:
        return self.y_plane.shape[1]


@dataclass
class GrayImage:
    """8-bit gray raster, shape (height, width)."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.uint8)
        if self.values.ndim != 2:
            raise DomainError("GrayImage expects an (H, W) array")
        if self.values.shape[0] < 1 or self.values.shape[1] < 1:
            raise DomainError("image must be at least 1x1")

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def decode_image(data: bytes) -> RgbImage:
    """Decode PNG, JPEG, BMP or binary PPM bytes into an RgbImage."""
    try:
        img = Image.open(io.BytesIO(data))
    except UnidentifiedImageError as exc:
        raise DecodeError(f"unrecognized image container: {exc}") from exc
    if img.format not in _SUPPORTED_FORMATS:
        raise DecodeError(f"unsupported format {img.format!r}")
    try:
        img = img.convert("RGB")
        arr = np.asarray(img)
    except OSError as exc:
        raise DecodeError(f"pixel data decode failed: {exc}") from exc
    return RgbImage(arr)


def encode_png(img: RgbImage | GrayImage) -> bytes:
    """Encode losslessly as PNG.  The output is byte-deterministic."""
    if isinstance(img, RgbImage):
        pil = Image.fromarray(img.pixels, mode="RGB")
    else:
        pil = Image.fromarray(img.values, mode="L")
    buf = io.BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()


def rgb_to_yiq(img: RgbImage) -> YiqImage:
    """Per-pixel NTSC matrix transform; planes stay real valued."""
    rgb = img.pixels.astype(np.float64)
    planes = np.tensordot(rgb, YIQ_FROM_RGB, axes=([2], [1]))
    return YiqImage(planes[..., 0], planes[..., 1], planes[..., 2])


def yiq_to_rgb(img: YiqImage) -> RgbImage:
    """Exact inverse transform, then clamp to [0, 255] and round."""
    planes = np.stack([img.y_plane, img.i_plane, img.q_plane], axis=-1)
    rgb = np.tensordot(planes, RGB_FROM_YIQ, axes=([2], [1]))
    rgb = round_half_away(np.clip(rgb, 0.0, 255.0))
    return RgbImage(rgb.astype(np.uint8))


def luminance_gray(img: YiqImage) -> GrayImage:
    """Quantize the Y plane to uint8 gray levels."""
    vals = round_half_away(np.clip(img.y_plane, 0.0, 255.0))
    return GrayImage(vals.astype(np.uint8))
