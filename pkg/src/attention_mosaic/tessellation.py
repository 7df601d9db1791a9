"""Pixel-raster Voronoi tessellation, tile coloring and rendering.

Labels are per-pixel nearest-site assignments over pixel centers
(x + 0.5, y + 0.5) with squared Euclidean distance; exact ties break to the
lowest site index. `voronoi_assign_bruteforce` is the correctness oracle;
`voronoi_assign` accelerates it with a uniform bucket grid whose candidate
pruning is conservative, so both return identical label grids for every
input, bit for bit.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import FormatError
from .validation import check_image, check_rgb, check_sites


@dataclass(frozen=True)
class TilePalette:
    colors: np.ndarray  # (n_sites, 3) uint8
    counts: np.ndarray  # (n_sites,) int64


@dataclass(frozen=True)
class RenderOptions:
    border_px: int = 1
    border_color: tuple[int, int, int] = (255, 255, 255)
    unassigned_color: tuple[int, int, int] = (0, 0, 0)


def _check_dims(width: int, height: int) -> tuple[int, int]:
    width, height = int(width), int(height)
    if width < 1 or height < 1:
        raise ValueError(f"grid dimensions must be >= 1, got {width}x{height}")
    return width, height


def _check_sites_in_rect(pts: np.ndarray, width: int, height: int) -> np.ndarray:
    if len(pts) == 0:
        raise ValueError("at least one site is required")
    if (pts[:, 0].min() < 0 or pts[:, 0].max() > width
            or pts[:, 1].min() < 0 or pts[:, 1].max() > height):
        raise ValueError(f"sites must lie inside [0, {width}] x [0, {height}]")
    return pts


def voronoi_assign_bruteforce(sites, width: int, height: int) -> np.ndarray:
    """Label every pixel with its nearest site by scanning all sites."""
    pts = check_sites(sites)
    width, height = _check_dims(width, height)
    _check_sites_in_rect(pts, width, height)
    sx = pts[:, 0]
    sy = pts[:, 1]
    labels = np.empty((height, width), dtype=np.uint32)
    cx = np.arange(width, dtype=np.float64) + 0.5
    for y in range(height):
        cy = y + 0.5
        d2 = (cx[:, None] - sx[None, :]) ** 2 + (cy - sy[None, :]) ** 2
        labels[y] = np.argmin(d2, axis=1)  # first occurrence = lowest index
    return labels


def voronoi_assign(sites, width: int, height: int) -> np.ndarray:
    """Bucket-grid accelerated nearest-site labeling.

    Sites are binned into square cells of side ~1.5 * sqrt(area / n). For a
    pixel cell whose nearest occupied Chebyshev ring is r, any site that can
    win for some pixel of the cell lies within ring R where
    (R - 1)^2 <= 2 (r + 1)^2: a ring-r site is at most (r+1)*cell*sqrt(2)
    away, and a ring-R site is at least (R-1)*cell away. Candidates are
    sorted by index and distances computed with the same float64 expression
    as the oracle, so ties resolve identically.
    """
    pts = check_sites(sites)
    width, height = _check_dims(width, height)
    _check_sites_in_rect(pts, width, height)
    n = len(pts)
    sx = np.ascontiguousarray(pts[:, 0])
    sy = np.ascontiguousarray(pts[:, 1])

    cell = max(2.0, 1.5 * np.sqrt(width * height / n))
    gw = max(1, int(np.ceil(width / cell)))
    gh = max(1, int(np.ceil(height / cell)))
    cxi = np.clip((sx / cell).astype(np.int64), 0, gw - 1)
    cyi = np.clip((sy / cell).astype(np.int64), 0, gh - 1)
    cid = cyi * gw + cxi
    order = np.argsort(cid, kind="stable")  # within a cell: ascending site index
    starts = np.searchsorted(cid[order], np.arange(gw * gh + 1))

    counts2d = np.diff(starts).reshape(gh, gw)
    sat = np.zeros((gh + 1, gw + 1), dtype=np.int64)
    sat[1:, 1:] = counts2d.cumsum(axis=0).cumsum(axis=1)

    def window_counts(r: int) -> np.ndarray:
        y0 = np.clip(np.arange(gh) - r, 0, gh)
        y1 = np.clip(np.arange(gh) + r + 1, 0, gh)
        x0 = np.clip(np.arange(gw) - r, 0, gw)
        x1 = np.clip(np.arange(gw) + r + 1, 0, gw)
        return sat[y1][:, x1] - sat[y0][:, x1] - sat[y1][:, x0] + sat[y0][:, x0]

    # smallest occupied ring per cell, vectorized over the whole grid
    ring = np.full((gh, gw), -1, dtype=np.int64)
    r = 0
    while np.any(ring < 0):
        found = (ring < 0) & (window_counts(r) > 0)
        ring[found] = r
        r += 1

    gather = np.empty_like(ring)
    for rv in np.unique(ring):
        R = rv
        while R * R <= 2 * (rv + 1) * (rv + 1):
            R += 1
        gather[ring == rv] = R  # largest R with (R-1)^2 <= 2 (r+1)^2

    labels = np.empty((height, width), dtype=np.uint32)
    xs = np.arange(width, dtype=np.float64) + 0.5
    ys = np.arange(height, dtype=np.float64) + 0.5

    for cy in range(gh):
        py0 = max(0, int(np.floor(cy * cell)))
        py1 = min(height, int(np.ceil((cy + 1) * cell)))
        if py0 >= py1:
            continue
        pys = ys[py0:py1]
        for cx in range(gw):
            px0 = max(0, int(np.floor(cx * cell)))
            px1 = min(width, int(np.ceil((cx + 1) * cell)))
            if px0 >= px1:
                continue
            R = int(gather[cy, cx])
            x0 = max(cx - R, 0)
            x1 = min(cx + R, gw - 1)
            y0 = max(cy - R, 0)
            y1 = min(cy + R, gh - 1)
            if y0 == y1:
                cand = order[starts[y0 * gw + x0]:starts[y0 * gw + x1 + 1]]
            else:
                cand = np.concatenate([
                    order[starts[wy * gw + x0]:starts[wy * gw + x1 + 1]]
                    for wy in range(y0, y1 + 1)
                ])
            cand = np.sort(cand)
            pxs = xs[px0:px1]
            d2 = (pxs[None, :, None] - sx[cand][None, None, :]) ** 2 \
                + (pys[:, None, None] - sy[cand][None, None, :]) ** 2
            labels[py0:py1, px0:px1] = cand[np.argmin(d2, axis=-1)]
    return labels


def tile_colors(image, labels, unassigned_color=(0, 0, 0), n_sites: int | None = None) -> TilePalette:
    """Mean RGB per tile, rounded half away from zero.

    Sites that own no pixel get count 0 and the unassigned color.
    """
    img = check_image(image)
    lab = np.asarray(labels)
    if lab.shape != img.shape[:2]:
        raise ValueError(f"label grid {lab.shape} does not match image {img.shape[:2]}")
    unassigned = check_rgb(unassigned_color)
    flat = lab.ravel()
    if n_sites is None:
        n_sites = int(flat.max()) + 1
    counts = np.bincount(flat, minlength=n_sites).astype(np.int64)
    colors = np.empty((n_sites, 3), dtype=np.uint8)
    for ch in range(3):
        sums = np.bincount(flat, weights=img[:, :, ch].ravel().astype(np.float64),
                           minlength=n_sites)
        with np.errstate(invalid="ignore"):
            mean = sums / counts
        rounded = np.floor(mean + 0.5)  # half away from zero; means are >= 0
        rounded[counts == 0] = unassigned[ch]
        colors[:, ch] = rounded.astype(np.uint8)
    return TilePalette(colors=colors, counts=counts)


def frontier_mask(labels, border_px: int = 1) -> np.ndarray:
    """Pixels whose 4-neighborhood crosses a label change, dilated border_px - 1 times."""
    lab = np.asarray(labels)
    if border_px < 0:
        raise ValueError(f"border_px must be >= 0, got {border_px}")
    mask = np.zeros(lab.shape, dtype=bool)
    if border_px == 0:
        return mask
    hdiff = lab[:, 1:] != lab[:, :-1]
    vdiff = lab[1:, :] != lab[:-1, :]
    mask[:, 1:] |= hdiff
    mask[:, :-1] |= hdiff
    mask[1:, :] |= vdiff
    mask[:-1, :] |= vdiff
    for _ in range(border_px - 1):
        grown = mask.copy()
        grown[1:, :] |= mask[:-1, :]
        grown[:-1, :] |= mask[1:, :]
        grown[:, 1:] |= mask[:, :-1]
        grown[:, :-1] |= mask[:, 1:]
        mask = grown
    return mask


def render_tiles(labels, palette: TilePalette, opts: RenderOptions | None = None) -> np.ndarray:
    """Paint each pixel its tile color, then paint the frontier mask blank."""
    opts = opts or RenderOptions()
    lab = np.asarray(labels)
    h, w = lab.shape
    if opts.border_px > min(w, h):
        raise ValueError(f"border_px {opts.border_px} exceeds min(width, height)")
    border = check_rgb(opts.border_color)
    out = palette.colors[lab]
    mask = frontier_mask(lab, opts.border_px)
    out[mask] = border
    return out


def save_label_grid(labels, path) -> None:
    """Debug dump of a label grid as 16-bit grayscale PNG (<= 65536 sites)."""
    lab = np.asarray(labels)
    if lab.max() > 65535:
        raise FormatError("label grid with more than 65536 sites cannot be saved as 16-bit PNG")
    parent = os.path.dirname(os.fspath(path)) or "."
    if not os.path.isdir(parent):
        raise FileNotFoundError(f"directory does not exist: {parent}")
    with open(path, "wb") as fp:
        Image.fromarray(lab.astype(np.uint16)).save(fp, format="PNG")


def load_label_grid(path) -> np.ndarray:
    from .image_io import load_gray_png

    return load_gray_png(path).astype(np.uint32)
