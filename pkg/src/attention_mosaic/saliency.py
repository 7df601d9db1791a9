"""Machine attention maps.

Three sources: analytic input-gradient saliency of the toy classifier, a
classical Sobel gradient-magnitude baseline, and externally computed maps
loaded from grayscale PNG.
"""

from __future__ import annotations

import numpy as np

from . import classifier
from .image_io import load_gray_png, luminance
from .validation import check_gray_map, check_image


def input_gradient_saliency(model, image, mode: str = classifier.MAX_LOGIT) -> np.ndarray:
    """Per-pixel L2 norm over channels of the score's input gradient."""
    grad = classifier.input_gradient(model, image, mode)
    return np.sqrt((grad * grad).sum(axis=0))


def sobel_saliency(image) -> np.ndarray:
    """Sobel gradient magnitude of the luminance, edge-replicate padded."""
    arr = check_image(image)
    h, w = arr.shape[:2]
    if h < 3 or w < 3:
        raise ValueError(f"image must be at least 3x3 for Sobel, got {w}x{h}")
    lum = luminance(arr)
    p = np.pad(lum, 1, mode="edge")

    def sl(dy, dx):
        return p[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]

    gx = (sl(-1, 1) + 2.0 * sl(0, 1) + sl(1, 1)) - (sl(-1, -1) + 2.0 * sl(0, -1) + sl(1, -1))
    gy = (sl(1, -1) + 2.0 * sl(1, 0) + sl(1, 1)) - (sl(-1, -1) + 2.0 * sl(-1, 0) + sl(-1, 1))
    return np.sqrt(gx * gx + gy * gy)


def resize_bilinear(gray, width: int, height: int) -> np.ndarray:
    """Bilinear resample with the pixel-center convention, edges replicated."""
    arr = check_gray_map(gray)
    src_h, src_w = arr.shape
    if width < 1 or height < 1:
        raise ValueError("target dimensions must be >= 1")
    if (src_w, src_h) == (width, height):
        return arr.copy()

    x = (np.arange(width, dtype=np.float64) + 0.5) * (src_w / width) - 0.5
    y = (np.arange(height, dtype=np.float64) + 0.5) * (src_h / height) - 0.5
    x0u = np.floor(x).astype(np.int64)
    y0u = np.floor(y).astype(np.int64)
    fx = x - x0u
    fy = y - y0u
    x0 = np.clip(x0u, 0, src_w - 1)
    y0 = np.clip(y0u, 0, src_h - 1)
    x1 = np.clip(x0u + 1, 0, src_w - 1)
    y1 = np.clip(y0u + 1, 0, src_h - 1)

    top = arr[y0][:, x0] * (1.0 - fx)[None, :] + arr[y0][:, x1] * fx[None, :]
    bot = arr[y1][:, x0] * (1.0 - fx)[None, :] + arr[y1][:, x1] * fx[None, :]
    return top * (1.0 - fy)[:, None] + bot * fy[:, None]


def load_saliency_map(path, width: int, height: int) -> np.ndarray:
    """Load a grayscale PNG saliency map, resampling to width x height if needed."""
    raw = load_gray_png(path)
    out = resize_bilinear(raw, width, height)
    return check_gray_map(out)
