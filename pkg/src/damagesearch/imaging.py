"""Image admission checks and lightweight normalization before detection."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyInputError

MIN_PPI = 72.0
TARGET_SIDE = 712

# Rec. 601 luma coefficients for RGB -> grayscale
_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass
class ImageMeta:
    """Listing-image metadata as stored; pixel data stays on disk."""

    image_id: str
    property_id: str
    file_path: str
    width: int
    height: int
    channels: int = 3
    ppi: float | None = None
    uploaded_at: str = ""
    is_detected: bool = False
    section_kind: str | None = None
    note: str | None = None


@dataclass(frozen=True)
class Admission:
    accepted: bool
    reason: str | None = None
    warning: str | None = None


def admit(meta: ImageMeta) -> Admission:
    """Admission gate: images under 72 PPI are rejected.

    A missing PPI admits the image with a warning; consumer photos routinely
    lack resolution metadata and blanket rejection would drop most uploads.
    """
    if meta.ppi is None:
        return Admission(True, warning="ppi unknown, admitted without resolution check")
    if meta.ppi < MIN_PPI:
        return Admission(False, reason=f"low-resolution: {meta.ppi:g} PPI is below {MIN_PPI:g}")
    return Admission(True)


def normalize(pixels: np.ndarray, channels: int | None = None) -> np.ndarray:
    """Collapse to grayscale and apply a linear min-max contrast stretch.

    Four-channel input drops alpha before the luminance conversion. Output
    values are round(255 * (p - min) / (max - min)); a constant image has no
    dynamic range to stretch and comes back unchanged.
    """
    arr = np.asarray(pixels)
    if arr.size == 0:
        raise EmptyInputError("cannot normalize an empty pixel array")

    if arr.ndim == 3:
        bands = channels if channels is not None else arr.shape[2]
        if bands == 4:
            arr = arr[:, :, :3]
            bands = 3
        if bands == 3:
            arr = arr.astype(float) @ _LUMA
        else:
            arr = arr[:, :, 0]
    elif arr.ndim != 2:
        raise ValueError(f"expected a 2-D or 3-D pixel array, got shape {arr.shape}")

    lo = float(arr.min())
    hi = float(arr.max())
    if hi == lo:
        return arr.copy()
    stretched = np.rint(255.0 * (arr.astype(float) - lo) / (hi - lo))
    return stretched.astype(np.uint8)


@dataclass(frozen=True)
class FitPlan:
    """Uniform scale until the short side hits the target, then center crop."""

    scale: float
    scaled_width: int
    scaled_height: int
    crop_x: int
    crop_y: int
    output_width: int = TARGET_SIDE
    output_height: int = TARGET_SIDE


def fit_dims(width: int, height: int, target: int = TARGET_SIDE) -> FitPlan:
    if width <= 0 or height <= 0:
        raise ValueError(f"dimensions must be positive, got {width}x{height}")
    scale = target / min(width, height)
    if width <= height:
        scaled_w, scaled_h = target, round(height * scale)
    else:
        scaled_w, scaled_h = round(width * scale), target
    return FitPlan(
        scale=scale,
        scaled_width=scaled_w,
        scaled_height=scaled_h,
        crop_x=(scaled_w - target) // 2,
        crop_y=(scaled_h - target) // 2,
        output_width=target,
        output_height=target,
    )


def read_image_meta(image_id: str, property_id: str, path: str | Path, uploaded_at: str = "") -> ImageMeta:
    """Build ImageMeta from a raster file on disk (dimensions, bands, DPI)."""
    from PIL import Image

    with Image.open(path) as img:
        width, height = img.size
        channels = len(img.getbands())
        dpi = img.info.get("dpi")
        ppi = float(dpi[0]) if dpi else None
    return ImageMeta(
        image_id=image_id,
        property_id=property_id,
        file_path=str(path),
        width=width,
        height=height,
        channels=channels,
        ppi=ppi,
        uploaded_at=uploaded_at,
    )
