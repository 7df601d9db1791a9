"""End-to-end pipeline: saliency -> density -> sites -> tessellation -> panels.

A run is fully described by a PipelineConfig; executing it writes the
composed output image plus a JSON manifest (`<out>.manifest.json`) recording
seeds, per-stage content digests and timings. Identical configs produce
byte-identical outputs. Gray maps are materialized through the 16-bit
quantization of the on-disk map format, so a pipeline resumed from exported
intermediates reproduces the in-memory result exactly.
"""

from __future__ import annotations

import dataclasses
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import compose as _compose
from .classifier import GRADIENT_MODES, init_classifier
from .digests import digest_array, digest_bytes
from .errors import FormatError, StageError
from .fixations import fixations_to_map, parse_fixation_log
from .image_io import gray_map_to_u16, load_image, save_image
from .sampling import normalize_density, sample_sites
from .saliency import input_gradient_saliency, load_saliency_map, sobel_saliency
from .tessellation import RenderOptions, render_tiles, tile_colors, voronoi_assign
from .validation import check_rgb

MACHINE_METHODS = ("input-grad", "sobel", "file")


@dataclass
class MachineSpec:
    method: str = "input-grad"
    mode: str = "max"
    model_seed: int = 0
    saliency_file: str | None = None


@dataclass
class HumanSpec:
    fixations: str | None = None
    sigma: float | None = None
    saliency_file: str | None = None


@dataclass
class RenderSpec:
    border_px: int = 1
    border_color: tuple[int, int, int] = (255, 255, 255)
    unassigned_color: tuple[int, int, int] = (0, 0, 0)


@dataclass
class LayoutSpec:
    panels: tuple[str, ...] = (_compose.ORIGINAL, _compose.MACHINE, _compose.HUMAN)
    gutter_px: int = 8
    background: tuple[int, int, int] = (255, 255, 255)


@dataclass
class PipelineConfig:
    input: str | None = None
    output: str | None = None
    machine: MachineSpec = field(default_factory=MachineSpec)
    human: HumanSpec = field(default_factory=HumanSpec)
    sites: int = 3000
    seed: int = 0
    floor: float = 0.0
    render: RenderSpec = field(default_factory=RenderSpec)
    layout: LayoutSpec = field(default_factory=LayoutSpec)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["render"]["border_color"] = list(self.render.border_color)
        d["render"]["unassigned_color"] = list(self.render.unassigned_color)
        d["layout"]["panels"] = list(self.layout.panels)
        d["layout"]["background"] = list(self.layout.background)
        return d

    def validate(self) -> "PipelineConfig":
        if not self.input:
            raise FormatError("config: 'input' image path is required")
        if not self.output:
            raise FormatError("config: 'output' path is required")
        if self.sites < 1:
            raise FormatError(f"config: 'sites' must be >= 1, got {self.sites}")
        if self.floor < 0:
            raise FormatError(f"config: 'floor' must be >= 0, got {self.floor}")
        if self.machine.method not in MACHINE_METHODS:
            raise FormatError(
                f"config: machine.method must be one of {MACHINE_METHODS}, "
                f"got {self.machine.method!r}")
        if self.machine.mode not in GRADIENT_MODES:
            raise FormatError(
                f"config: machine.mode must be one of {GRADIENT_MODES}, "
                f"got {self.machine.mode!r}")
        if self.render.border_px < 0:
            raise FormatError("config: render.border_px must be >= 0")
        if self.layout.gutter_px < 0:
            raise FormatError("config: layout.gutter_px must be >= 0")
        if not self.layout.panels:
            raise FormatError("config: layout.panels must not be empty")
        for p in self.layout.panels:
            _compose.parse_panel(p)
        check_rgb(self.render.border_color)
        check_rgb(self.render.unassigned_color)
        check_rgb(self.layout.background)
        return self


def _merge_section(cls, data: dict, where: str):
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise FormatError(f"config: unknown key(s) {sorted(unknown)} in {where}")
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name in data and data[f.name] is not None:
            value = data[f.name]
            if isinstance(value, list):
                value = tuple(value)
            kwargs[f.name] = value
    return cls(**kwargs)


def config_from_dict(data: dict) -> PipelineConfig:
    known = {f.name for f in dataclasses.fields(PipelineConfig)}
    unknown = set(data) - known
    if unknown:
        raise FormatError(f"config: unknown key(s) {sorted(unknown)}")
    cfg = PipelineConfig()
    for name in ("input", "output", "sites", "seed", "floor"):
        if data.get(name) is not None:
            setattr(cfg, name, data[name])
    if data.get("machine") is not None:
        cfg.machine = _merge_section(MachineSpec, data["machine"], "machine")
    if data.get("human") is not None:
        cfg.human = _merge_section(HumanSpec, data["human"], "human")
    if data.get("render") is not None:
        cfg.render = _merge_section(RenderSpec, data["render"], "render")
    if data.get("layout") is not None:
        cfg.layout = _merge_section(LayoutSpec, data["layout"], "layout")
    return cfg


def load_config(path) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fp:
        try:
            data = json.load(fp)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: config root must be a JSON object")
    return config_from_dict(data)


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def _machine_map(config: PipelineConfig, image: np.ndarray) -> np.ndarray:
    spec = config.machine
    h, w = image.shape[:2]
    if spec.method == "input-grad":
        model = init_classifier(spec.model_seed)
        raw = input_gradient_saliency(model, image, spec.mode)
    elif spec.method == "sobel":
        raw = sobel_saliency(image)
    else:
        if not spec.saliency_file:
            raise FormatError("machine.method 'file' requires machine.saliency_file")
        raw = load_saliency_map(spec.saliency_file, w, h)
    return gray_map_to_u16(raw).astype(np.float64)


def _human_map(config: PipelineConfig, image: np.ndarray) -> np.ndarray:
    spec = config.human
    h, w = image.shape[:2]
    if spec.saliency_file:
        raw = load_saliency_map(spec.saliency_file, w, h)
    elif spec.fixations:
        fixset = parse_fixation_log(spec.fixations, width=w, height=h)
        raw = fixations_to_map(fixset, spec.sigma)
    else:
        raise FormatError("human panel requires human.fixations or human.saliency_file")
    return gray_map_to_u16(raw).astype(np.float64)


def mosaic_from_map(image: np.ndarray, gray_u16: np.ndarray, config: PipelineConfig,
                    record: dict | None = None) -> np.ndarray:
    """Shared tail of every mosaic panel: density, sites, labels, colors, render."""
    h, w = image.shape[:2]
    rec = record if record is not None else {}
    digests = rec.setdefault("digests", {})
    seconds = rec.setdefault("seconds", {})

    t0 = time.perf_counter()
    density = _stage("density", normalize_density, gray_u16, config.floor)
    seconds["density"] = time.perf_counter() - t0
    digests["density"] = digest_array("density", density)

    t0 = time.perf_counter()
    sites = _stage("sample", sample_sites, density, config.sites, config.seed)
    seconds["sample"] = time.perf_counter() - t0
    digests["sites"] = digest_array("sites", sites.sites)

    t0 = time.perf_counter()
    labels = _stage("tessellate", voronoi_assign, sites, w, h)
    seconds["tessellate"] = time.perf_counter() - t0
    digests["labels"] = digest_array("labels", labels)

    t0 = time.perf_counter()
    palette = _stage("colorize", tile_colors, image, labels,
                     config.render.unassigned_color, len(sites))
    digests["palette"] = digest_array("palette", palette.colors)

    opts = RenderOptions(border_px=config.render.border_px,
                         border_color=tuple(config.render.border_color),
                         unassigned_color=tuple(config.render.unassigned_color))
    panel = _stage("render", render_tiles, labels, palette, opts)
    seconds["render"] = time.perf_counter() - t0
    digests["image"] = digest_array("image", panel)
    return panel


def run_pipeline(config: PipelineConfig) -> dict:
    """Execute a full run; returns the manifest dict after writing all files.

    Any stage error aborts the run with the stage named; no partial output
    file is left behind.
    """
    total_start = time.perf_counter()
    _stage("config", config.validate)
    image = _stage("load-input", load_image, config.input)
    h, w = image.shape[:2]

    panel_records = []
    panel_images = []
    for source in config.layout.panels:
        rec: dict = {"source": source, "digests": {}, "seconds": {}}
        if source == _compose.ORIGINAL:
            panel = image
            rec["digests"]["image"] = digest_array("image", panel)
        elif source.startswith(_compose.FILE_PREFIX):
            panel = _stage("load-panel", load_image, source[len(_compose.FILE_PREFIX):])
            rec["digests"]["image"] = digest_array("image", panel)
        elif source == _compose.MACHINE:
            t0 = time.perf_counter()
            gray = _stage("machine-saliency", _machine_map, config, image)
            rec["seconds"]["saliency"] = time.perf_counter() - t0
            rec["digests"]["saliency"] = digest_array("gray", gray)
            panel = mosaic_from_map(image, gray, config, rec)
        else:  # human
            t0 = time.perf_counter()
            gray = _stage("human-saliency", _human_map, config, image)
            rec["seconds"]["saliency"] = time.perf_counter() - t0
            rec["digests"]["saliency"] = digest_array("gray", gray)
            panel = mosaic_from_map(image, gray, config, rec)
        panel_records.append(rec)
        panel_images.append(panel)

    layout = _compose.PanelLayout(panels=tuple(config.layout.panels),
                                  gutter_px=config.layout.gutter_px,
                                  background=tuple(config.layout.background))
    final = _stage("compose", _compose.compose_panels, panel_images, layout)

    out_path = os.fspath(config.output)
    tmp_path = out_path + ".tmp"
    _stage("save-output", save_image, final, tmp_path)
    os.replace(tmp_path, out_path)
    with open(out_path, "rb") as fp:
        out_digest = digest_bytes(fp.read())

    manifest = {
        "config": config.to_dict(),
        "seeds": {"sample": config.seed, "model": config.machine.model_seed},
        "input": {"path": os.fspath(config.input), "width": w, "height": h,
                  "digest": digest_array("image", image)},
        "panels": panel_records,
        "output": {"path": out_path, "width": int(final.shape[1]),
                   "height": int(final.shape[0]), "digest": out_digest},
        "total_seconds": time.perf_counter() - total_start,
    }
    with open(manifest_path(out_path), "w", encoding="utf-8") as fp:
        json.dump(manifest, fp, indent=2)
        fp.write("\n")
    return manifest


def manifest_path(output_path) -> str:
    return os.fspath(output_path) + ".manifest.json"
