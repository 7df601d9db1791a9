"""Turn a saliency map into a probability density and draw tessellation sites.

Sampling is inverse-CDF over the row-major pixel masses with a splitmix64
uniform stream, three draws per site (pixel u, then jitter dx, then dy), so
identical (density, n, seed) reproduces identical sites byte for byte on any
platform.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ._splitmix import float_stream
from .digests import digest_array
from .errors import FormatError
from .validation import check_density, check_gray_map


@dataclass(frozen=True)
class SiteSet:
    """Ordered sample of Voronoi generators; the index is the tile label."""

    sites: np.ndarray  # (n, 2) float64, columns x, y
    seed: int
    source_digest: str

    def __len__(self) -> int:
        return len(self.sites)


def normalize_density(gray, floor: float = 0.0) -> np.ndarray:
    """Normalize a non-negative map to total mass 1.

    Values are first lifted to at least floor * max(map), then divided by
    the total. An identically zero map yields the uniform density.
    """
    arr = check_gray_map(gray)
    if floor < 0:
        raise ValueError(f"floor must be >= 0, got {floor}")
    peak = float(arr.max())
    if peak == 0.0:
        return np.full(arr.shape, 1.0 / arr.size)
    if floor > 0:
        arr = np.maximum(arr, floor * peak)
    return arr / arr.sum()


def density_digest(density) -> str:
    return digest_array("density", np.ascontiguousarray(density, dtype=np.float64))


def sample_sites(density, n: int, seed: int) -> SiteSet:
    """Draw n sites from the density, jittered uniformly inside their pixel.

    Draw order per site: one uniform selects the pixel through the row-major
    CDF (first index with cdf > u), then dx and dy place the site inside
    that pixel's unit square. Zero-mass pixels never receive sites.
    """
    mass = check_density(density)
    if n < 0:
        raise ValueError(f"site count must be >= 0, got {n}")
    h, w = mass.shape
    digest = density_digest(mass)
    if n == 0:
        return SiteSet(np.empty((0, 2), dtype=np.float64), int(seed), digest)

    flat = mass.ravel()
    cdf = np.cumsum(flat)
    positive = np.flatnonzero(flat > 0)
    last_positive = int(positive[-1])

    u = float_stream(seed, 3 * n)
    pix_u = u[0::3]
    dx = u[1::3]
    dy = u[2::3]

    idx = np.searchsorted(cdf, pix_u, side="right")
    # float-rounding guard: u beyond the accumulated total lands on the last
    # pixel that actually carries mass
    idx = np.minimum(idx, last_positive)

    px = (idx % w).astype(np.float64)
    py = (idx // w).astype(np.float64)
    x = px + dx
    y = py + dy
    # keep the jitter inside the drawn pixel even if px + dx rounded up
    x = np.minimum(x, np.nextafter(px + 1.0, -np.inf))
    y = np.minimum(y, np.nextafter(py + 1.0, -np.inf))
    return SiteSet(np.column_stack([x, y]), int(seed), digest)


def save_sites_csv(siteset: SiteSet, path) -> None:
    """Write sites as CSV with header i,x,y; floats use repr round-tripping."""
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp)
        writer.writerow(["i", "x", "y"])
        for i, (x, y) in enumerate(siteset.sites):
            writer.writerow([i, repr(float(x)), repr(float(y))])


def load_sites_csv(path) -> np.ndarray:
    """Read a sites CSV back into an (n, 2) float64 array."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["i", "x", "y"]:
            raise FormatError(f"{path}: expected header 'i,x,y', got {header!r}")
        for row in reader:
            line_no = reader.line_num
            if len(row) != 3:
                raise FormatError(f"line {line_no}: expected 3 fields, got {len(row)}")
            try:
                i = int(row[0])
                x = float(row[1])
                y = float(row[2])
            except ValueError:
                raise FormatError(f"line {line_no}: malformed site row {row!r}") from None
            if i != len(rows):
                raise FormatError(f"line {line_no}: site index {i} out of order")
            rows.append((x, y))
    if not rows:
        return np.empty((0, 2), dtype=np.float64)
    return np.asarray(rows, dtype=np.float64)
