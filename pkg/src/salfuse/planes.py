"""Image loading/saving, color conversion, Gaussian filtering, normalization.

A *plane* is a 2-D float64 array (rows x cols). RGB images are float64 arrays
of shape (rows, cols, 3) with channel values in [0, 255]. Binary maps are
uint8 arrays holding exactly 0 or 1. All functions are pure: inputs are never
mutated, so values can be shared freely across threads.
"""

import math
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from . import _kernels
from .errors import (
    CorruptDataError,
    IoFailureError,
    MissingFileError,
    NonPositiveSigmaError,
    UnsupportedFormatError,
)

_SUPPORTED_FORMATS = {"PNG", "BMP", "PPM"}
_SUPPORTED_SUFFIXES = {".png", ".bmp", ".ppm", ".pgm", ".pbm"}

# sRGB (D65) -> XYZ, IEC 61966-2-1
_RGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
_WHITE = np.array([0.95047, 1.0, 1.08883])


def load_image(path) -> np.ndarray:
    """Decode a PNG/BMP/PPM file to an (H, W, 3) float64 array in [0, 255].

    Grayscale sources are replicated into all three channels.
    """
    p = Path(path)
    if not p.exists():
        raise MissingFileError(f"no such file: {p}")
    try:
        with Image.open(p) as im:
            fmt = im.format
            if fmt not in _SUPPORTED_FORMATS:
                raise UnsupportedFormatError(
                    f"{p}: format {fmt!r} not supported (need PNG, BMP or PPM)")
            rgb = im.convert("RGB")
            arr = np.asarray(rgb, dtype=np.float64)
    except UnidentifiedImageError as exc:
        if p.suffix.lower() in _SUPPORTED_SUFFIXES:
            raise CorruptDataError(f"{p}: cannot decode image data") from exc
        raise UnsupportedFormatError(
            f"{p}: unrecognized image format") from exc
    except OSError as exc:
        raise CorruptDataError(f"{p}: truncated or corrupt image") from exc
    return arr


def save_plane(plane: np.ndarray, path) -> None:
    """Write a plane as an 8-bit grayscale PNG.

    The plane is min-max normalized, scaled to 0-255, and rounded half-up so
    repeated runs produce byte-identical files.
    """
    q = quantize_plane(plane)
    try:
        Image.fromarray(q, mode="L").save(Path(path), format="PNG")
    except (OSError, ValueError) as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def quantize_plane(plane: np.ndarray) -> np.ndarray:
    """8-bit view of a plane: normalize to [0,1], scale, round half-up."""
    v = normalize_unit(plane) * 255.0
    return np.floor(v + 0.5).astype(np.uint8)


def gaussian_kernel_1d(sigma: float) -> np.ndarray:
    """Half Gaussian kernel w[0..r], r = ceil(3*sigma), full sum 1."""
    if sigma <= 0:
        raise NonPositiveSigmaError(f"sigma must be > 0, got {sigma}")
    r = math.ceil(3.0 * sigma)
    half = np.exp(-0.5 * (np.arange(r + 1) / sigma) ** 2)
    total = half[0] + 2.0 * half[1:].sum()
    return half / total


def gaussian_blur(plane: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian filter, mirror boundary extension.

    The per-pixel sum pairs the +t and -t taps, so horizontally or vertically
    flipped input yields the exactly flipped output.
    """
    w = gaussian_kernel_1d(sigma)
    return _kernels.blur_2d(np.asarray(plane, dtype=np.float64), w)


def blur_rgb(img: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian-blur each channel of an (H, W, 3) image."""
    out = np.empty_like(img, dtype=np.float64)
    for c in range(3):
        out[:, :, c] = gaussian_blur(img[:, :, c], sigma)
    return out


def normalize_unit(plane: np.ndarray) -> np.ndarray:
    """Affine rescale to [0, 1]; a constant plane maps to all zeros."""
    v = np.asarray(plane, dtype=np.float64)
    lo = v.min()
    hi = v.max()
    if hi == lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def rgb_to_lab(img: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """sRGB (D65) -> CIELAB. Returns the L (0-100), a, b planes."""
    c = np.asarray(img, dtype=np.float64) / 255.0
    linear = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    xyz = linear @ _RGB_TO_XYZ.T
    t = xyz / _WHITE
    delta = 6.0 / 29.0
    f = np.where(t > delta ** 3, np.cbrt(t), t / (3.0 * delta ** 2) + 4.0 / 29.0)
    fx, fy, fz = f[:, :, 0], f[:, :, 1], f[:, :, 2]
    lum = 116.0 * fy - 16.0
    a = 500.0 * (fx - fy)
    b = 200.0 * (fy - fz)
    return lum, a, b
