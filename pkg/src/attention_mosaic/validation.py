"""Input validation helpers.

Canonical array forms used throughout the package:

- image: uint8 array of shape (height, width, 3), RGB, row-major
- gray map: float64 array of shape (height, width), finite and >= 0
- density: gray map whose values sum to 1 (within 1e-12)
- sites: float64 array of shape (n, 2) holding (x, y) image coordinates
"""

from __future__ import annotations

import numpy as np

DENSITY_MASS_ATOL = 1e-12


def check_image(image) -> np.ndarray:
    """Validate and return an RGB image as a C-contiguous uint8 array."""
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"image must have shape (height, width, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"image dtype must be integer, got {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("image channel values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return np.ascontiguousarray(arr)


def check_gray_map(gray) -> np.ndarray:
    """Validate and return a non-negative finite float64 grayscale map."""
    arr = np.asarray(gray, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"gray map must have shape (height, width), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("gray map must be at least 1x1")
    if not np.isfinite(arr).all():
        raise ValueError("gray map values must be finite")
    if arr.size and arr.min() < 0:
        raise ValueError("gray map values must be >= 0")
    return np.ascontiguousarray(arr)


def check_density(density) -> np.ndarray:
    """Validate a gray map that is additionally normalized to total mass 1."""
    arr = check_gray_map(density)
    total = float(arr.sum())
    if abs(total - 1.0) > DENSITY_MASS_ATOL:
        raise ValueError(f"density must sum to 1 within {DENSITY_MASS_ATOL}, got {total!r}")
    return arr


def check_sites(sites) -> np.ndarray:
    """Validate and return site coordinates as an (n, 2) float64 array.

    Accepts a bare array or any object exposing a `.sites` array.
    """
    arr = getattr(sites, "sites", sites)
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"sites must have shape (n, 2), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("site coordinates must be finite")
    return np.ascontiguousarray(arr)


def check_rgb(color) -> tuple[int, int, int]:
    """Validate an (r, g, b) triple of ints in [0, 255]."""
    try:
        r, g, b = color
    except (TypeError, ValueError):
        raise ValueError(f"color must be an (r, g, b) triple, got {color!r}") from None
    out = []
    for v in (r, g, b):
        iv = int(v)
        if iv != v or not 0 <= iv <= 255:
            raise ValueError(f"color channels must be ints in [0, 255], got {color!r}")
        out.append(iv)
    return (out[0], out[1], out[2])
