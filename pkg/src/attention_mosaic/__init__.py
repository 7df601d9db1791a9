"""Attention-driven Voronoi mosaics.

Re-render an image as a Voronoi tessellation whose tile density follows an
attention map: either machine attention (input-gradient saliency of a small
built-in classifier, or a Sobel baseline) or human attention (Gaussian
density of recorded fixations). Panels compose into diptychs/triptychs that
contrast the two perceptions of the same stimulus.
"""

__version__ = "0.1.0"

from .classifier import (MAX_LOGIT, SUM_LOGITS, ToyClassifier, forward,
                         init_classifier, input_gradient, load_classifier,
                         save_classifier)
from .compose import PanelLayout, compose_panels
from .errors import FormatError, StageError
from .estimators import (FixationDensityMap, InputGradientSaliency,
                         SiteSampler, SobelSaliency, VoronoiMosaic)
from .fixations import (Fixation, FixationSet, default_sigma,
                        fixations_to_map, parse_fixation_log,
                        write_fixation_log)
from .image_io import (load_image, load_gray_png, luminance, save_gray_map,
                       save_image)
from .pipeline import PipelineConfig, load_config, run_pipeline
from .sampling import (SiteSet, load_sites_csv, normalize_density,
                       sample_sites, save_sites_csv)
from .saliency import (input_gradient_saliency, load_saliency_map,
                       resize_bilinear, sobel_saliency)
from .tessellation import (RenderOptions, TilePalette, render_tiles,
                           tile_colors, voronoi_assign,
                           voronoi_assign_bruteforce)

__all__ = [
    "__version__",
    "MAX_LOGIT", "SUM_LOGITS", "ToyClassifier", "forward", "init_classifier",
    "input_gradient", "load_classifier", "save_classifier",
    "PanelLayout", "compose_panels",
    "FormatError", "StageError",
    "FixationDensityMap", "InputGradientSaliency", "SiteSampler",
    "SobelSaliency", "VoronoiMosaic",
    "Fixation", "FixationSet", "default_sigma", "fixations_to_map",
    "parse_fixation_log", "write_fixation_log",
    "load_image", "load_gray_png", "luminance", "save_gray_map", "save_image",
    "PipelineConfig", "load_config", "run_pipeline",
    "SiteSet", "load_sites_csv", "normalize_density", "sample_sites",
    "save_sites_csv",
    "input_gradient_saliency", "load_saliency_map", "resize_bilinear",
    "sobel_saliency",
    "RenderOptions", "TilePalette", "render_tiles", "tile_colors",
    "voronoi_assign", "voronoi_assign_bruteforce",
]
