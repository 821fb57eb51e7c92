"""Multilevel 2-D discrete wavelet transform and band-energy conspicuity maps.

The transform is orthogonal and non-expansive: every band at level s has
ceil-halved dimensions, and synthesis reproduces the input to round-off.
Odd-length axes are extended by mirroring their final sample to even length
before filtering (the extra sample is dropped again during synthesis); the
dyadic filtering itself wraps periodically, which keeps the per-level
transform an exactly orthogonal map on even-length signals for every
supported filter pair.

A *feature map* for level s is the squared synthesis of only that level's
three detail bands: a band-pass energy image at full resolution. Summing the
feature maps of every level and smoothing/normalizing the total yields the
per-channel *conspicuity map* used by the fusion stage.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ImageTooSmallError,
    LevelOutOfRangeError,
    ShapeMismatchError,
    TooManyLevelsError,
)
from .planes import gaussian_blur, normalize_unit

LEVEL_CAP = 8
SMOOTH_FRACTION = 0.02  # conspicuity smoothing sigma = 2% of max(height, width)


@dataclass(frozen=True)
class WaveletBasis:
    """Orthogonal analysis filter pair (scaling filter h, wavelet filter g)."""

    name: str
    lowpass: np.ndarray
    highpass: np.ndarray


def _make_basis(name: str, scaling: np.ndarray) -> WaveletBasis:
    h = np.asarray(scaling, dtype=np.float64)
    k = np.arange(h.size)
    g = np.where(k % 2 == 0, 1.0, -1.0) * h[::-1]
    return WaveletBasis(name=name, lowpass=h, highpass=g)


def _scaling_filter(name: str) -> np.ndarray:
    if name == "haar":
        return np.array([1.0, 1.0]) / np.sqrt(2.0)
    if name == "db2":
        s3 = np.sqrt(3.0)
        return np.array([1.0 + s3, 3.0 + s3, 3.0 - s3, 1.0 - s3]) / (4.0 * np.sqrt(2.0))
    if name == "db4":
        return np.array([
            0.23037781330885523, 0.7148465705525415,
            0.6308807679295904, -0.02798376941698385,
            -0.18703481171888114, 0.030841381835986965,
            0.032883011666982945, -0.010597401784997278,
        ])
    raise ValueError(f"unknown wavelet basis {name!r}; supported: haar, db2, db4")


BASIS_NAMES = ("haar", "db2", "db4")


def get_basis(name: str) -> WaveletBasis:
    return _make_basis(name, _scaling_filter(name))


@dataclass(frozen=True)
class WaveletPyramid:
    """Approximation at the deepest level plus per-level detail triples.

    ``details[s-1]`` holds the (horizontal, vertical, diagonal) planes of
    level s; ``level_shapes[s-1]`` is the shape the level-s analysis step
    consumed, which the synthesis side needs for exact-size cropping.
    """

    basis: WaveletBasis
    approx: np.ndarray
    details: tuple
    level_shapes: tuple

    @property
    def levels(self) -> int:
        return len(self.details)


def max_levels(height: int, width: int) -> int:
    """Deepest usable decomposition: floor(log2(min side)), capped at 8."""
    m = min(int(height), int(width))
    if m < 2:
        raise ImageTooSmallError(f"need both sides >= 2 pixels, got {height}x{width}")
    return min(LEVEL_CAP, m.bit_length() - 1)


def _analyze(x: np.ndarray, basis: WaveletBasis):
    """Single-level split along the last axis; returns (low, high)."""
    if x.shape[-1] % 2:
        x = np.concatenate([x, x[..., -1:]], axis=-1)
    h, g = basis.lowpass, basis.highpass
    low = high = None
    for k in range(h.size):
        xs = np.roll(x, -k, axis=-1)[..., 0::2]
        if low is None:
            low = h[k] * xs
            high = g[k] * xs
        else:
            low = low + h[k] * xs
            high = high + g[k] * xs
    return low, high


def _synthesize(low: np.ndarray, high: np.ndarray, basis: WaveletBasis,
                out_len: int) -> np.ndarray:
    """Adjoint of :func:`_analyze` along the last axis, cropped to out_len."""
    h, g = basis.lowpass, basis.highpass
    even = odd = None
    for j in range(h.size // 2):
        ra = np.roll(low, j, axis=-1)
        rd = np.roll(high, j, axis=-1)
        ce = h[2 * j] * ra + g[2 * j] * rd
        co = h[2 * j + 1] * ra + g[2 * j + 1] * rd
        if even is None:
            even, odd = ce, co
        else:
            even = even + ce
            odd = odd + co
    out = np.empty(low.shape[:-1] + (2 * low.shape[-1],), dtype=np.float64)
    out[..., 0::2] = even
    out[..., 1::2] = odd
    return out[..., :out_len]


def _analyze_level(plane: np.ndarray, basis: WaveletBasis):
    rowlow, rowhigh = _analyze(plane, basis)
    approx_t, vert_t = _analyze(rowlow.T, basis)
    horiz_t, diag_t = _analyze(rowhigh.T, basis)
    return approx_t.T, horiz_t.T, vert_t.T, diag_t.T


def _synthesize_level(approx, horiz, vert, diag, basis, out_shape) -> np.ndarray:
    rows, cols = out_shape
    rowlow = _synthesize(approx.T, vert.T, basis, rows).T
    rowhigh = _synthesize(horiz.T, diag.T, basis, rows).T
    return _synthesize(rowlow, rowhigh, basis, cols)


def dwt2(plane: np.ndarray, levels: int, basis: WaveletBasis) -> WaveletPyramid:
    """Multilevel 2-D analysis; the level-s approximation feeds level s+1."""
    cur = np.asarray(plane, dtype=np.float64)
    cap = max_levels(*cur.shape)
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if levels > cap:
        raise TooManyLevelsError(
            f"{levels} levels requested but {cur.shape} supports at most {cap}")
    details = []
    shapes = []
    for _ in range(levels):
        shapes.append(cur.shape)
        cur, horiz, vert, diag = _analyze_level(cur, basis)
        details.append((horiz, vert, diag))
    return WaveletPyramid(basis=basis, approx=cur, details=tuple(details),
                          level_shapes=tuple(shapes))


def _check_pyramid(pyr: WaveletPyramid) -> None:
    shape = pyr.approx.shape
    for s in range(pyr.levels, 0, -1):
        triple = pyr.details[s - 1]
        if any(b.shape != triple[0].shape for b in triple) or triple[0].shape != shape:
            raise ShapeMismatchError(f"inconsistent band shapes at level {s}")
        shape = pyr.level_shapes[s - 1]


def partial_reconstruct(pyr: WaveletPyramid, include_approx: bool = True,
                        levels=None) -> np.ndarray:
    """Synthesize keeping only the approximation and/or selected detail levels."""
    _check_pyramid(pyr)
    keep = set(range(1, pyr.levels + 1)) if levels is None else set(levels)
    zero = np.zeros_like(pyr.approx)
    cur = pyr.approx if include_approx else zero
    for s in range(pyr.levels, 0, -1):
        if s in keep:
            horiz, vert, diag = pyr.details[s - 1]
        else:
            z = np.zeros(pyr.details[s - 1][0].shape)
            horiz = vert = diag = z
        cur = _synthesize_level(cur, horiz, vert, diag, pyr.basis,
                                pyr.level_shapes[s - 1])
    return cur


def idwt2(pyr: WaveletPyramid) -> np.ndarray:
    """Full synthesis back to the original dimensions."""
    return partial_reconstruct(pyr, include_approx=True, levels=None)


def feature_map(pyr: WaveletPyramid, s: int) -> np.ndarray:
    """Squared synthesis of only the level-s detail bands (band-pass energy)."""
    if not 1 <= s <= pyr.levels:
        raise LevelOutOfRangeError(f"level {s} outside 1..{pyr.levels}")
    rec = partial_reconstruct(pyr, include_approx=False, levels={s})
    return np.square(rec)


def level_feature_maps(channel255: np.ndarray, basis: WaveletBasis) -> list:
    """Feature maps for every level of a channel already scaled to 0..255."""
    levels = max_levels(*channel255.shape)
    pyr = dwt2(channel255, levels, basis)
    return [feature_map(pyr, s) for s in range(1, levels + 1)]


def smooth_and_normalize(total: np.ndarray) -> np.ndarray:
    """Gaussian smoothing (sigma proportional to image size) + unit rescale."""
    sigma = SMOOTH_FRACTION * max(total.shape)
    return normalize_unit(gaussian_blur(total, sigma))


def conspicuity_map(channel: np.ndarray, basis: WaveletBasis) -> np.ndarray:
    """Per-channel conspicuity: summed band energies, smoothed, in [0, 1].

    The raw channel is min-max scaled to 0..255 first, so the result is
    invariant to positive affine changes of the input's intensity range.
    """
    ch = np.asarray(channel, dtype=np.float64)
    scaled = normalize_unit(ch) * 255.0
    maps = level_feature_maps(scaled, basis)
    total = maps[0]
    for m in maps[1:]:
        total = total + m
    return smooth_and_normalize(total)
