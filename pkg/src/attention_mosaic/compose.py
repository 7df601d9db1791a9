"""Horizontal panel composition for diptychs and triptychs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .validation import check_image, check_rgb

ORIGINAL = "original"
MACHINE = "machine"
HUMAN = "human"
FILE_PREFIX = "file:"


@dataclass(frozen=True)
class PanelLayout:
    panels: tuple[str, ...] = (ORIGINAL, MACHINE, HUMAN)
    gutter_px: int = 8
    background: tuple[int, int, int] = (255, 255, 255)


def parse_panel(spec: str) -> str:
    s = spec.strip()
    if s in (ORIGINAL, MACHINE, HUMAN) or s.startswith(FILE_PREFIX):
        return s
    raise ValueError(
        f"panel must be one of {ORIGINAL!r}, {MACHINE!r}, {HUMAN!r} or 'file:<path>', got {spec!r}")


def parse_panel_list(csv_list: str) -> tuple[str, ...]:
    parts = [p for p in csv_list.split(",") if p.strip()]
    if not parts:
        raise ValueError("panel list is empty")
    return tuple(parse_panel(p) for p in parts)


def compose_panels(images, layout: PanelLayout) -> np.ndarray:
    """Concatenate panels left to right with gutter columns between them."""
    if len(images) == 0:
        raise ValueError("at least one panel is required")
    if len(images) != len(layout.panels):
        raise ValueError(f"got {len(images)} images for {len(layout.panels)} panels")
    if layout.gutter_px < 0:
        raise ValueError(f"gutter_px must be >= 0, got {layout.gutter_px}")
    arrs = [check_image(im) for im in images]
    heights = {a.shape[0] for a in arrs}
    if len(heights) != 1:
        raise ValueError(f"all panels must share one height, got {sorted(heights)}")
    background = check_rgb(layout.background)

    height = arrs[0].shape[0]
    total_w = sum(a.shape[1] for a in arrs) + layout.gutter_px * (len(arrs) - 1)
    out = np.empty((height, total_w, 3), dtype=np.uint8)
    out[:, :] = background
    x = 0
    for i, a in enumerate(arrs):
        if i > 0:
            x += layout.gutter_px
        out[:, x:x + a.shape[1]] = a
        x += a.shape[1]
    return out
