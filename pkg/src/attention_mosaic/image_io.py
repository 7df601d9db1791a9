"""Raster I/O and color utilities.

Supported inputs are PNG (8-bit RGB/RGBA; 16-bit accepted with channels
truncated to their high byte) and binary PPM (P6). All outputs are written
as PNG. Grayscale maps serialize as 16-bit grayscale PNG with values
linearly mapped so the map maximum lands on 65535.
"""

from __future__ import annotations

import io
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import FormatError
from .validation import check_gray_map, check_image

GRAY_MAX = 65535

# BT.709 luma coefficients; they sum to exactly 1.0 in float64
_LUMA_R, _LUMA_G, _LUMA_B = 0.2126, 0.7152, 0.0722


def _read_bytes(path) -> bytes:
    # open()/read() failures stay OSError (I/O); decode failures become FormatError
    with open(path, "rb") as fp:
        return fp.read()


def _decode(data: bytes, path) -> Image.Image:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, SyntaxError, ValueError, OSError) as exc:
        raise FormatError(f"{path}: cannot decode image ({exc})") from exc
    return img


def _composite_white(rgba: np.ndarray) -> np.ndarray:
    """Flatten an (H, W, 4) uint8 array over a white background."""
    rgb = rgba[:, :, :3].astype(np.uint32)
    a = rgba[:, :, 3:4].astype(np.uint32)
    # round-to-nearest of (rgb*a + 255*(255-a)) / 255, exact in integer math
    return ((rgb * a + 255 * (255 - a) + 127) // 255).astype(np.uint8)


def load_image(path) -> np.ndarray:
    """Load a PNG or binary PPM (P6) file as a uint8 RGB array.

    16-bit channels are truncated to their high byte; alpha is composited
    over white; palette images are expanded.
    """
    img = _decode(_read_bytes(path), path)
    if img.format not in ("PNG", "PPM"):
        raise FormatError(f"{path}: unsupported format {img.format!r} (PNG or PPM P6 required)")
    if img.width < 1 or img.height < 1:
        raise FormatError(f"{path}: zero-dimension image")

    mode = img.mode
    if mode == "RGB":
        arr = np.asarray(img, dtype=np.uint8)
    elif mode in ("I;16", "I;16B", "I;16L", "I;16N", "I"):
        gray = np.asarray(img).astype(np.uint32)
        gray8 = (gray >> 8).astype(np.uint8)
        arr = np.repeat(gray8[:, :, None], 3, axis=2)
    elif mode == "L":
        gray8 = np.asarray(img, dtype=np.uint8)
        arr = np.repeat(gray8[:, :, None], 3, axis=2)
    elif mode in ("RGBA", "LA", "PA", "P", "1"):
        arr = _composite_white(np.asarray(img.convert("RGBA"), dtype=np.uint8))
    else:
        raise FormatError(f"{path}: unsupported image mode {mode!r}")
    return check_image(arr)


def save_image(image, path) -> None:
    """Write an RGB image as PNG; decoding the file reproduces it bit-exactly."""
    arr = check_image(image)
    parent = os.path.dirname(os.fspath(path)) or "."
    if not os.path.isdir(parent):
        raise FileNotFoundError(f"directory does not exist: {parent}")
    with open(path, "wb") as fp:
        Image.fromarray(arr, "RGB").save(fp, format="PNG")


def luminance(image) -> np.ndarray:
    """Per-pixel BT.709 luminance on channels scaled to [0, 1]."""
    arr = check_image(image).astype(np.float64) / 255.0
    return _LUMA_R * arr[:, :, 0] + _LUMA_G * arr[:, :, 1] + _LUMA_B * arr[:, :, 2]


def gray_map_to_u16(gray) -> np.ndarray:
    """Quantize a gray map to uint16, mapping the map maximum to 65535.

    An all-zero map quantizes to all zeros. This is the exact value grid the
    16-bit PNG serialization stores, so quantize -> save -> load is lossless.
    """
    arr = check_gray_map(gray)
    peak = float(arr.max())
    if peak == 0.0:
        return np.zeros(arr.shape, dtype=np.uint16)
    scaled = arr * (GRAY_MAX / peak)
    return np.floor(scaled + 0.5).astype(np.uint16)


def save_gray_map(gray, path) -> None:
    """Write a gray map as 16-bit grayscale PNG (max value -> 65535)."""
    u16 = gray_map_to_u16(gray)
    parent = os.path.dirname(os.fspath(path)) or "."
    if not os.path.isdir(parent):
        raise FileNotFoundError(f"directory does not exist: {parent}")
    with open(path, "wb") as fp:
        Image.fromarray(u16).save(fp, format="PNG")


def load_gray_png(path) -> np.ndarray:
    """Load an 8- or 16-bit grayscale PNG as raw float64 values.

    Values are returned as stored (0..255 or 0..65535); callers that need a
    probability density normalize afterwards, which makes the stored scale
    irrelevant.
    """
    img = _decode(_read_bytes(path), path)
    if img.format != "PNG":
        raise FormatError(f"{path}: grayscale maps must be PNG, got {img.format!r}")
    if img.mode == "L":
        return np.asarray(img, dtype=np.float64)
    if img.mode in ("I;16", "I;16B", "I;16L", "I;16N", "I"):
        return np.asarray(img).astype(np.float64)
    raise FormatError(f"{path}: not a grayscale PNG (mode {img.mode!r})")
