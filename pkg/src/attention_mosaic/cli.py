"""Command-line interface.

Subcommands mirror the pipeline stages so they compose in shell pipelines:

    saliency    image -> machine saliency map (16-bit grayscale PNG)
    fixmap      fixation CSV -> human saliency map
    sample      saliency map -> sites CSV
    tessellate  image + sites CSV -> mosaic PNG
    compose     panels -> diptych/triptych PNG
    run         full config-driven pipeline with manifest

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .classifier import init_classifier
from .compose import PanelLayout, compose_panels, parse_panel_list
from .errors import FormatError, StageError
from .fixations import fixations_to_map, parse_fixation_log
from .image_io import load_image, save_gray_map, save_image
from .pipeline import (PipelineConfig, config_from_dict, load_config,
                       run_pipeline)
from .sampling import load_sites_csv, normalize_density, sample_sites, save_sites_csv
from .saliency import input_gradient_saliency, load_saliency_map, sobel_saliency
from .tessellation import (RenderOptions, render_tiles, save_label_grid,
                           tile_colors, voronoi_assign)


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as validation errors (exit 1)."""

    def error(self, message):
        raise FormatError(message)


def parse_hex_color(text: str) -> tuple[int, int, int]:
    s = text.strip().lstrip("#")
    if len(s) != 6:
        raise FormatError(f"color must be RRGGBB hex, got {text!r}")
    try:
        return (int(s[0:2], 16), int(s[2:4], 16), int(s[4:6], 16))
    except ValueError:
        raise FormatError(f"color must be RRGGBB hex, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="attention-mosaic",
                     description="Attention-driven Voronoi mosaics of images.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("saliency", parents=[], help="compute a machine saliency map")
    p.add_argument("--in", dest="input", required=True, help="input image (PNG or PPM)")
    p.add_argument("--out", dest="output", required=True, help="output 16-bit gray PNG")
    p.add_argument("--method", choices=["input-grad", "sobel", "file"], default="input-grad")
    p.add_argument("--mode", choices=["max", "sum"], default="max")
    p.add_argument("--model-seed", type=int, default=0)
    p.add_argument("--saliency-file", help="precomputed map (required for --method file)")

    p = sub.add_parser("fixmap", help="build a human saliency map from fixations")
    p.add_argument("--fixations", required=True, help="fixation CSV (x,y,t_ms,weight)")
    p.add_argument("--in", dest="input", help="stimulus image (dimension source)")
    p.add_argument("--sigma", type=float, help="Gaussian kernel width in pixels")
    p.add_argument("--out", dest="output", required=True)

    p = sub.add_parser("sample", help="draw tessellation sites from a saliency map")
    p.add_argument("--saliency-file", required=True, help="grayscale PNG map")
    p.add_argument("--sites", type=int, default=3000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--floor", type=float, default=0.0)
    p.add_argument("--out", dest="output", required=True, help="sites CSV (i,x,y)")

    p = sub.add_parser("tessellate", help="render the Voronoi mosaic for given sites")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--sites-file", required=True, help="sites CSV from 'sample'")
    p.add_argument("--border", type=int, default=1)
    p.add_argument("--border-color", default="FFFFFF")
    p.add_argument("--labels-out", help="optional 16-bit PNG dump of the label grid")
    p.add_argument("--out", dest="output", required=True)

    p = sub.add_parser("compose", help="concatenate panels into a diptych/triptych")
    p.add_argument("--panels", required=True, help="csv list of file:<path> panels")
    p.add_argument("--gutter", type=int, default=8)
    p.add_argument("--background", default="FFFFFF")
    p.add_argument("--out", dest="output", required=True)

    p = sub.add_parser("run", help="run the full pipeline from a config")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--in", dest="input")
    p.add_argument("--out", dest="output")
    p.add_argument("--method", choices=["input-grad", "sobel", "file"])
    p.add_argument("--mode", choices=["max", "sum"])
    p.add_argument("--model-seed", type=int)
    p.add_argument("--saliency-file")
    p.add_argument("--fixations")
    p.add_argument("--sigma", type=float)
    p.add_argument("--sites", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--floor", type=float)
    p.add_argument("--border", type=int)
    p.add_argument("--border-color")
    p.add_argument("--gutter", type=int)
    p.add_argument("--panels", help="csv list: original,machine,human,file:<path>")
    p.add_argument("--print-config", action="store_true",
                   help="print the resolved config as JSON and exit")
    return parser


def _resolved_config(args) -> PipelineConfig:
    config = load_config(args.config) if args.config else config_from_dict({})
    if args.input is not None:
        config.input = args.input
    if args.output is not None:
        config.output = args.output
    if args.method is not None:
        config.machine.method = args.method
    if args.mode is not None:
        config.machine.mode = args.mode
    if args.model_seed is not None:
        config.machine.model_seed = args.model_seed
    if args.saliency_file is not None:
        config.machine.saliency_file = args.saliency_file
    if args.fixations is not None:
        config.human.fixations = args.fixations
    if args.sigma is not None:
        config.human.sigma = args.sigma
    if args.sites is not None:
        config.sites = args.sites
    if args.seed is not None:
        config.seed = args.seed
    if args.floor is not None:
        config.floor = args.floor
    if args.border is not None:
        config.render.border_px = args.border
    if args.border_color is not None:
        config.render.border_color = parse_hex_color(args.border_color)
    if args.gutter is not None:
        config.layout.gutter_px = args.gutter
    if args.panels is not None:
        config.layout.panels = parse_panel_list(args.panels)
    return config


def _cmd_saliency(args) -> int:
    image = load_image(args.input)
    h, w = image.shape[:2]
    if args.method == "input-grad":
        model = init_classifier(args.model_seed)
        gray = input_gradient_saliency(model, image, args.mode)
    elif args.method == "sobel":
        gray = sobel_saliency(image)
    else:
        if not args.saliency_file:
            raise FormatError("--method file requires --saliency-file")
        gray = load_saliency_map(args.saliency_file, w, h)
    save_gray_map(gray, args.output)
    return 0


def _cmd_fixmap(args) -> int:
    if args.input:
        image = load_image(args.input)
        h, w = image.shape[:2]
        fixset = parse_fixation_log(args.fixations, width=w, height=h)
    else:
        fixset = parse_fixation_log(args.fixations)
    gray = fixations_to_map(fixset, args.sigma)
    save_gray_map(gray, args.output)
    return 0


def _cmd_sample(args) -> int:
    from .image_io import load_gray_png

    gray = load_gray_png(args.saliency_file)
    density = normalize_density(gray, args.floor)
    sites = sample_sites(density, args.sites, args.seed)
    save_sites_csv(sites, args.output)
    return 0


def _cmd_tessellate(args) -> int:
    image = load_image(args.input)
    sites = load_sites_csv(args.sites_file)
    if len(sites) == 0:
        raise FormatError(f"{args.sites_file}: no sites")
    labels = voronoi_assign(sites, image.shape[1], image.shape[0])
    palette = tile_colors(image, labels, n_sites=len(sites))
    opts = RenderOptions(border_px=args.border,
                         border_color=parse_hex_color(args.border_color))
    mosaic = render_tiles(labels, palette, opts)
    if args.labels_out:
        save_label_grid(labels, args.labels_out)
    save_image(mosaic, args.output)
    return 0


def _cmd_compose(args) -> int:
    panels = parse_panel_list(args.panels)
    images = []
    for panel in panels:
        if not panel.startswith("file:"):
            raise FormatError(
                f"compose accepts only file:<path> panels, got {panel!r} "
                f"(use 'run' for computed panels)")
        images.append(load_image(panel[len("file:"):]))
    layout = PanelLayout(panels=panels, gutter_px=args.gutter,
                         background=parse_hex_color(args.background))
    save_image(compose_panels(images, layout), args.output)
    return 0


def _cmd_run(args) -> int:
    config = _resolved_config(args)
    if args.print_config:
        json.dump(config.to_dict(), sys.stdout, indent=2)
        sys.stdout.write("\n")
        return 0
    manifest = run_pipeline(config)
    out = manifest["output"]
    sys.stdout.write(f"wrote {out['path']} ({out['width']}x{out['height']}) "
                     f"in {manifest['total_seconds']:.2f}s\n")
    return 0


_COMMANDS = {
    "saliency": _cmd_saliency,
    "fixmap": _cmd_fixmap,
    "sample": _cmd_sample,
    "tessellate": _cmd_tessellate,
    "compose": _cmd_compose,
    "run": _cmd_run,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except StageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        root = exc.cause
        return 2 if isinstance(root, OSError) and not isinstance(root, FormatError) else 1
    except FormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
