"""Small fixed-architecture convolutional classifier, differentiable by hand.

The network is deliberately tiny: scale input to [0, 1], one 3x3 same-padded
convolution to 8 channels, ReLU, global average pooling, and an affine map
to 10 logits. It exists so that input gradients can be computed analytically
and checked against finite differences; it is never trained.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from ._splitmix import float_stream
from .validation import check_image

N_FILTERS = 8
KERNEL = 3
N_CLASSES = 10
WEIGHT_SCALE = 0.1

MAX_LOGIT = "max"
SUM_LOGITS = "sum"
GRADIENT_MODES = (MAX_LOGIT, SUM_LOGITS)

_MAGIC = b"TCLF"
_VERSION = 1


@dataclass(frozen=True)
class ToyClassifier:
    """Immutable weight bundle; arrays must never be mutated after creation."""

    conv_filters: np.ndarray  # (8, 3, 3, 3) as (out, ky, kx, in)
    conv_bias: np.ndarray     # (8,)
    dense_weights: np.ndarray  # (8, 10)
    dense_bias: np.ndarray    # (10,)
    seed: int | None = None   # None when loaded from a weight file


def init_classifier(seed: int) -> ToyClassifier:
    """Deterministically initialize weights from a 64-bit seed.

    All weights are i.i.d. uniform in [-0.1, 0.1], drawn from a single
    splitmix64 stream in field order: conv filters row-major, conv bias,
    dense weights row-major, dense bias.
    """
    n_conv = N_FILTERS * KERNEL * KERNEL * 3
    n_dense = N_FILTERS * N_CLASSES
    total = n_conv + N_FILTERS + n_dense + N_CLASSES
    w = -WEIGHT_SCALE + 2.0 * WEIGHT_SCALE * float_stream(seed, total)
    i = 0
    conv = w[i:i + n_conv].reshape(N_FILTERS, KERNEL, KERNEL, 3); i += n_conv
    conv_b = w[i:i + N_FILTERS]; i += N_FILTERS
    dense = w[i:i + n_dense].reshape(N_FILTERS, N_CLASSES); i += n_dense
    dense_b = w[i:i + N_CLASSES]
    return ToyClassifier(conv, conv_b, dense, dense_b, seed=int(seed))


def scale_input(image) -> np.ndarray:
    """uint8 RGB image -> channels-first float64 array in [0, 1]."""
    arr = check_image(image)
    return arr.transpose(2, 0, 1).astype(np.float64) / 255.0


def _check_spatial(x: np.ndarray) -> tuple[int, int]:
    h, w = x.shape[1], x.shape[2]
    if h < KERNEL or w < KERNEL:
        raise ValueError(f"image must be at least {KERNEL}x{KERNEL}, got {w}x{h}")
    return h, w


def _forward_parts(model: ToyClassifier, x: np.ndarray):
    """Returns (conv pre-activations z, pooled features, logits)."""
    h, w = _check_spatial(x)
    xp = np.pad(x, ((0, 0), (1, 1), (1, 1)))
    z = np.empty((N_FILTERS, h, w))
    for c in range(N_FILTERS):
        acc = np.full((h, w), model.conv_bias[c])
        for ky in range(KERNEL):
            for kx in range(KERNEL):
                for ci in range(3):
                    acc += model.conv_filters[c, ky, kx, ci] * xp[ci, ky:ky + h, kx:kx + w]
        z[c] = acc
    pooled = np.maximum(z, 0.0).mean(axis=(1, 2))
    logits = pooled @ model.dense_weights + model.dense_bias
    return z, pooled, logits


def forward_scaled(model: ToyClassifier, x: np.ndarray) -> np.ndarray:
    """Logits for a channels-first [0, 1] input array of shape (3, H, W)."""
    return _forward_parts(model, np.asarray(x, dtype=np.float64))[2]


def forward(model: ToyClassifier, image) -> np.ndarray:
    """Logits for a uint8 RGB image."""
    return forward_scaled(model, scale_input(image))


def conv_preactivations(model: ToyClassifier, x: np.ndarray) -> np.ndarray:
    """Pre-ReLU convolution outputs, shape (8, H, W). Used by gradient checks."""
    return _forward_parts(model, np.asarray(x, dtype=np.float64))[0]


def check_mode(mode: str) -> str:
    if mode not in GRADIENT_MODES:
        raise ValueError(f"gradient mode must be one of {GRADIENT_MODES}, got {mode!r}")
    return mode


def input_gradient_scaled(model: ToyClassifier, x: np.ndarray, mode: str = MAX_LOGIT) -> np.ndarray:
    """Analytic gradient of the score with respect to the scaled input.

    The score is the largest logit (mode "max", ties to the lowest class
    index) or the sum of all logits (mode "sum"). Reverse-mode through
    dense, pooling, ReLU (derivative 0 at the kink) and convolution.
    Returns shape (3, H, W).

    For mode "sum" the dense row sums are computed with exact summation
    (math.fsum), which makes the gradient invariant under any permutation
    of the dense output columns, bit for bit.
    """
    check_mode(mode)
    x = np.asarray(x, dtype=np.float64)
    h, w = _check_spatial(x)
    z, _, logits = _forward_parts(model, x)

    if mode == MAX_LOGIT:
        k = int(np.argmax(logits))  # first occurrence: lowest index wins ties
        dpooled = model.dense_weights[:, k].astype(np.float64)
    else:
        dpooled = np.array([math.fsum(row) for row in model.dense_weights])

    da = dpooled / (h * w)
    dz = np.where(z > 0.0, 1.0, 0.0) * da[:, None, None]
    dzp = np.pad(dz, ((0, 0), (1, 1), (1, 1)))
    dx = np.empty((3, h, w))
    for ci in range(3):
        acc = np.zeros((h, w))
        for c in range(N_FILTERS):
            for ky in range(KERNEL):
                for kx in range(KERNEL):
                    acc += model.conv_filters[c, ky, kx, ci] \
                        * dzp[c, 2 - ky:2 - ky + h, 2 - kx:2 - kx + w]
        dx[ci] = acc
    return dx


def input_gradient(model: ToyClassifier, image, mode: str = MAX_LOGIT) -> np.ndarray:
    """Analytic input gradient for a uint8 RGB image, shape (3, H, W)."""
    return input_gradient_scaled(model, scale_input(image), mode)


def save_classifier(model: ToyClassifier, path) -> None:
    """Persist weights: magic "TCLF", little-endian u32 version, f64 arrays in init order."""
    with open(path, "wb") as fp:
        fp.write(_MAGIC)
        fp.write(struct.pack("<I", _VERSION))
        for arr in (model.conv_filters, model.conv_bias, model.dense_weights, model.dense_bias):
            fp.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_classifier(path) -> ToyClassifier:
    """Load weights saved by save_classifier. The origin seed is not stored."""
    from .errors import FormatError

    with open(path, "rb") as fp:
        data = fp.read()
    if len(data) < 8 or data[:4] != _MAGIC:
        raise FormatError(f"{path}: not a classifier weight file")
    (version,) = struct.unpack("<I", data[4:8])
    if version != _VERSION:
        raise FormatError(f"{path}: unsupported weight file version {version}")
    counts = (N_FILTERS * KERNEL * KERNEL * 3, N_FILTERS, N_FILTERS * N_CLASSES, N_CLASSES)
    expected = 8 + 8 * sum(counts)
    if len(data) != expected:
        raise FormatError(f"{path}: weight file has {len(data)} bytes, expected {expected}")
    vals = np.frombuffer(data, dtype="<f8", offset=8)
    if not np.isfinite(vals).all():
        raise FormatError(f"{path}: weight file contains non-finite values")
    i = 0
    parts = []
    for n in counts:
        parts.append(vals[i:i + n].astype(np.float64))
        i += n
    return ToyClassifier(
        conv_filters=parts[0].reshape(N_FILTERS, KERNEL, KERNEL, 3),
        conv_bias=parts[1],
        dense_weights=parts[2].reshape(N_FILTERS, N_CLASSES),
        dense_bias=parts[3],
        seed=None,
    )
