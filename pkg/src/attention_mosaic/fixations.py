"""Human attention maps from fixation data.

Fixations arrive as CSV (header exactly ``x,y,t_ms,weight``), typically
exported by an eye tracker, converted from a public fixation database, or
recorded by the capture UI. A weighted Gaussian kernel density turns them
into a saliency map. Stimulus dimensions travel out-of-band: either a
sidecar JSON file next to the CSV or explicit arguments.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError

CSV_HEADER = ("x", "y", "t_ms", "weight")


@dataclass(frozen=True)
class Fixation:
    x: float
    y: float
    t_ms: float
    weight: float


@dataclass(frozen=True)
class FixationSet:
    stimulus_id: str
    width: int
    height: int
    fixations: tuple[Fixation, ...] = field(default_factory=tuple)


def default_sigma(width: int, height: int) -> float:
    """Kernel width proxy for one visual degree: max(width, height) / 30."""
    return max(width, height) / 30.0


def _parse_float(text: str, name: str, line_no: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise FormatError(f"line {line_no}: {name} is not a number: {text!r}") from None
    if math.isnan(value) or math.isinf(value):
        raise FormatError(f"line {line_no}: {name} must be finite, got {text!r}")
    return value


def sidecar_path(csv_path) -> str:
    return os.path.splitext(os.fspath(csv_path))[0] + ".json"


def parse_fixation_log(path, width: int | None = None, height: int | None = None,
                       stimulus_id: str | None = None) -> FixationSet:
    """Parse a fixation CSV. Explicit dimensions win over the sidecar JSON."""
    if width is None or height is None or stimulus_id is None:
        sc = sidecar_path(path)
        if os.path.exists(sc):
            with open(sc, "r", encoding="utf-8") as fp:
                try:
                    meta = json.load(fp)
                except json.JSONDecodeError as exc:
                    raise FormatError(f"{sc}: invalid sidecar JSON ({exc})") from exc
            width = width if width is not None else meta.get("width")
            height = height if height is not None else meta.get("height")
            stimulus_id = stimulus_id if stimulus_id is not None else meta.get("stimulus_id")
    if stimulus_id is None:
        stimulus_id = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    if width is None or height is None:
        raise FormatError(
            f"{path}: stimulus dimensions unavailable; pass width/height or provide "
            f"a sidecar JSON {{\"stimulus_id\", \"width\", \"height\"}}")
    width, height = int(width), int(height)
    if width < 1 or height < 1:
        raise FormatError(f"{path}: stimulus dimensions must be >= 1, got {width}x{height}")

    fixations: list[Fixation] = []
    with open(path, "r", encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise FormatError(
                f"{path}: expected header {','.join(CSV_HEADER)!r}, got {header!r}")
        for row in reader:
            line_no = reader.line_num
            if len(row) != 4:
                raise FormatError(f"line {line_no}: expected 4 fields, got {len(row)}")
            x = _parse_float(row[0], "x", line_no)
            y = _parse_float(row[1], "y", line_no)
            t_ms = _parse_float(row[2], "t_ms", line_no)
            weight = _parse_float(row[3], "weight", line_no)
            if t_ms < 0:
                raise FormatError(f"line {line_no}: t_ms must be >= 0, got {t_ms}")
            if weight < 0:
                raise FormatError(f"line {line_no}: weight must be >= 0, got {weight}")
            fixations.append(Fixation(x, y, t_ms, weight))
    return FixationSet(stimulus_id, width, height, tuple(fixations))


def write_fixation_log(fixset: FixationSet, path, sidecar: bool = True) -> None:
    """Write the CSV (and by default the sidecar JSON with the dimensions)."""
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp)
        writer.writerow(CSV_HEADER)
        for f in fixset.fixations:
            writer.writerow([repr(float(f.x)), repr(float(f.y)),
                             repr(float(f.t_ms)), repr(float(f.weight))])
    if sidecar:
        with open(sidecar_path(path), "w", encoding="utf-8") as fp:
            json.dump({"stimulus_id": fixset.stimulus_id,
                       "width": fixset.width, "height": fixset.height}, fp)


def fixations_to_map(fixset: FixationSet, sigma: float | None = None) -> np.ndarray:
    """Weighted Gaussian kernel density of the fixations on the pixel grid.

    map(p) = sum_i w_i * exp(-||p_center - (x_i, y_i)||^2 / (2 sigma^2)),
    accumulated in fixation order. Coordinates are clamped into
    [0, width] x [0, height]; t_ms is carried but unused. The output is not
    normalized; that is the sampler's job.
    """
    if sigma is None:
        sigma = default_sigma(fixset.width, fixset.height)
    if not (sigma > 0):
        raise ValueError(f"sigma must be > 0, got {sigma}")
    active = [f for f in fixset.fixations if f.weight > 0]
    if not active:
        raise ValueError("fixation set has no fixation with positive weight")

    w, h = fixset.width, fixset.height
    cx = np.arange(w, dtype=np.float64) + 0.5
    cy = np.arange(h, dtype=np.float64) + 0.5
    inv = 1.0 / (2.0 * sigma * sigma)
    out = np.zeros((h, w), dtype=np.float64)
    for f in active:
        fx = min(max(f.x, 0.0), float(w))
        fy = min(max(f.y, 0.0), float(h))
        d2 = (cx[None, :] - fx) ** 2 + (cy[:, None] - fy) ** 2
        out += f.weight * np.exp(-d2 * inv)
    return out
