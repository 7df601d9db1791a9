"""scikit-learn style wrappers around the functional core.

Each stage of the mosaic pipeline is exposed as a small transformer with
``get_params``/``set_params`` so stages can be cloned, grid-searched and
chained with sklearn tooling. Stateless stages transform directly; the
stateful ones (`InputGradientSaliency`, `VoronoiMosaic`) follow the usual
fit-then-transform protocol.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import classifier as _clf
from . import fixations as _fix
from . import saliency as _sal
from .image_io import gray_map_to_u16
from .sampling import SiteSet, normalize_density, sample_sites
from .tessellation import RenderOptions, render_tiles, tile_colors, voronoi_assign
from .validation import check_gray_map, check_image


class SobelSaliency(BaseEstimator, TransformerMixin):
    """Stateless image -> gradient-magnitude saliency map transformer."""

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> np.ndarray:
        return _sal.sobel_saliency(X)


class InputGradientSaliency(BaseEstimator, TransformerMixin):
    """Image -> input-gradient saliency of the built-in toy classifier.

    ``fit`` materializes the deterministic weights for ``model_seed``;
    ``transform`` maps an image to its saliency map.
    """

    def __init__(self, model_seed: int = 0, mode: str = _clf.MAX_LOGIT):
        self.model_seed = model_seed
        self.mode = mode

    def fit(self, X=None, y=None):
        _clf.check_mode(self.mode)
        self.model_ = _clf.init_classifier(self.model_seed)
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise NotFittedError("InputGradientSaliency must be fitted before transform")
        return _sal.input_gradient_saliency(self.model_, X, self.mode)


class FixationDensityMap(BaseEstimator, TransformerMixin):
    """FixationSet -> Gaussian kernel density saliency map."""

    def __init__(self, sigma: float | None = None):
        self.sigma = sigma

    def fit(self, X=None, y=None):
        return self

    def transform(self, X: _fix.FixationSet) -> np.ndarray:
        return _fix.fixations_to_map(X, self.sigma)


class SiteSampler(BaseEstimator, TransformerMixin):
    """Saliency map -> SiteSet via density normalization and inverse-CDF draws."""

    def __init__(self, n_sites: int = 3000, seed: int = 0, floor: float = 0.0):
        self.n_sites = n_sites
        self.seed = seed
        self.floor = floor

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> SiteSet:
        density = normalize_density(check_gray_map(X), self.floor)
        return sample_sites(density, self.n_sites, self.seed)


class VoronoiMosaic(BaseEstimator, TransformerMixin):
    """Full attention-driven mosaic as a fit/transform estimator.

    ``fit(image)`` computes the saliency map, density, sites and label grid
    and stores them as fitted state; ``transform(image)`` colors that fixed
    tessellation with the given image's tile means and renders it. The
    common single-image case is ``fit_transform(image)``.

    ``saliency`` selects the attention source: "sobel", "input-grad", a
    precomputed map array, or a FixationSet. Maps pass through the 16-bit
    quantization used by the on-disk map format, so in-memory runs agree
    bit for bit with file-resumed pipeline runs.
    """

    def __init__(self, saliency="sobel", mode: str = _clf.MAX_LOGIT,
                 model_seed: int = 0, sigma: float | None = None,
                 n_sites: int = 3000, seed: int = 0, floor: float = 0.0,
                 border_px: int = 1, border_color=(255, 255, 255),
                 unassigned_color=(0, 0, 0)):
        self.saliency = saliency
        self.mode = mode
        self.model_seed = model_seed
        self.sigma = sigma
        self.n_sites = n_sites
        self.seed = seed
        self.floor = floor
        self.border_px = border_px
        self.border_color = border_color
        self.unassigned_color = unassigned_color

    def _saliency_map(self, image: np.ndarray) -> np.ndarray:
        h, w = image.shape[:2]
        if isinstance(self.saliency, str):
            if self.saliency == "sobel":
                return _sal.sobel_saliency(image)
            if self.saliency == "input-grad":
                model = _clf.init_classifier(self.model_seed)
                return _sal.input_gradient_saliency(model, image, self.mode)
            raise ValueError(f"unknown saliency source {self.saliency!r}")
        if isinstance(self.saliency, _fix.FixationSet):
            fixset = self.saliency
            if (fixset.width, fixset.height) != (w, h):
                raise ValueError(
                    f"fixation set is for a {fixset.width}x{fixset.height} stimulus, "
                    f"image is {w}x{h}")
            return _fix.fixations_to_map(fixset, self.sigma)
        arr = check_gray_map(self.saliency)
        if arr.shape != (h, w):
            return _sal.resize_bilinear(arr, w, h)
        return arr

    def fit(self, X, y=None):
        image = check_image(X)
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        raw = self._saliency_map(image)
        self.saliency_map_ = gray_map_to_u16(raw).astype(np.float64)
        self.density_ = normalize_density(self.saliency_map_, self.floor)
        self.sites_ = sample_sites(self.density_, self.n_sites, self.seed)
        self.labels_ = voronoi_assign(self.sites_, image.shape[1], image.shape[0])
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "labels_"):
            raise NotFittedError("VoronoiMosaic must be fitted before transform")
        image = check_image(X)
        if image.shape[:2] != self.labels_.shape:
            raise ValueError(
                f"image {image.shape[:2]} does not match fitted grid {self.labels_.shape}")
        palette = tile_colors(image, self.labels_, self.unassigned_color,
                              n_sites=len(self.sites_))
        opts = RenderOptions(border_px=self.border_px, border_color=self.border_color,
                             unassigned_color=self.unassigned_color)
        return render_tiles(self.labels_, palette, opts)
