"""End-to-end saliency methods.

* ``proposed``      - principal-axis projections -> wavelet conspicuity maps
                      -> eigenvalue-weighted m-PCNN fusion.
* ``wt-baseline``   - wavelet conspicuity on CIE Lab channels fused by
                      per-level channel maximum and level summation.
* ``ft``            - per-pixel distance of the Lab vector from the global
                      Lab mean (frequency-tuned contrast).
* ``ft-pca-mpcnn``  - the ``ft`` contrast computed per principal-axis channel,
                      fused by the m-PCNN instead of the vector norm.

All methods return a float64 plane in [0, 1] with the input's dimensions and
are deterministic for a fixed configuration.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ImageTooSmallError
from .mpcnn import (
    ALPHA_H,
    ALPHA_T,
    DEFAULT_ITERATIONS,
    DEFAULT_RADIUS,
    V_H,
    V_T,
    PcnnParams,
    linking_kernel,
    mpcnn_fuse,
)
from .pca import channel_weights, fit_pca, project_channel
from .planes import blur_rgb, normalize_unit, rgb_to_lab
from .wavelet import (
    conspicuity_map,
    get_basis,
    level_feature_maps,
    smooth_and_normalize,
)

METHOD_NAMES = ("proposed", "wt-baseline", "ft", "ft-pca-mpcnn")

MIN_SIDE = 16  # wavelet-based methods need a few decomposition levels


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs shared by the saliency methods; defaults match the CLI."""

    wavelet: str = "db4"
    blur_sigma: float = 1.0
    kernel_radius: int = DEFAULT_RADIUS
    n_iter: int = DEFAULT_ITERATIONS
    stop_mode: str = "all-fired"
    alpha_h: float = ALPHA_H
    v_h: float = V_H
    alpha_t: float = ALPHA_T
    v_t: float = V_T

    def pcnn_params(self, betas) -> PcnnParams:
        return PcnnParams(
            alpha_h=self.alpha_h, v_h=self.v_h,
            alpha_t=self.alpha_t, v_t=self.v_t,
            betas=tuple(betas),
            kernel=linking_kernel(self.kernel_radius),
            n_iter=self.n_iter, stop_mode=self.stop_mode,
        )


def _require_size(img: np.ndarray) -> None:
    if min(img.shape[0], img.shape[1]) < MIN_SIDE:
        raise ImageTooSmallError(
            f"image must be at least {MIN_SIDE}x{MIN_SIDE}, got "
            f"{img.shape[0]}x{img.shape[1]}")


def pca_channels(img: np.ndarray, cfg: PipelineConfig):
    """Blur, fit the color eigenbasis, and project the three channels.

    Returns the projected planes and the normalized eigenvalue weights.
    """
    blurred = blur_rgb(np.asarray(img, dtype=np.float64), cfg.blur_sigma)
    basis = fit_pca(blurred)
    eps = channel_weights(basis)
    chans = [project_channel(blurred, basis, i) for i in (1, 2, 3)]
    return chans, eps


def proposed_saliency(img: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Eigenvector-space conspicuity maps fused by the weighted m-PCNN."""
    _require_size(img)
    chans, eps = pca_channels(img, cfg)
    basis = get_basis(cfg.wavelet)
    maps = [conspicuity_map(ch, basis) for ch in chans]
    return mpcnn_fuse(maps, eps, cfg.pcnn_params(eps))


def wt_baseline_saliency(img: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Lab-channel wavelet saliency fused by per-level channel maximum."""
    _require_size(img)
    basis = get_basis(cfg.wavelet)
    per_channel = []
    for ch in rgb_to_lab(np.asarray(img, dtype=np.float64)):
        scaled = normalize_unit(ch) * 255.0
        per_channel.append(level_feature_maps(scaled, basis))
    levels = len(per_channel[0])
    total = None
    for s in range(levels):
        level_max = np.maximum(np.maximum(per_channel[0][s], per_channel[1][s]),
                               per_channel[2][s])
        total = level_max if total is None else total + level_max
    return smooth_and_normalize(total)


def ft_saliency(img: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Distance of each blurred pixel's Lab vector from the image Lab mean."""
    blurred = blur_rgb(np.asarray(img, dtype=np.float64), cfg.blur_sigma)
    lum, a, b = rgb_to_lab(blurred)
    dl = lum - lum.mean()
    da = a - a.mean()
    db = b - b.mean()
    return normalize_unit(np.sqrt(dl * dl + da * da + db * db))


def ft_pca_mpcnn_saliency(img: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Mean-contrast conspicuity per principal axis, fused by the m-PCNN."""
    chans, eps = pca_channels(img, cfg)
    maps = [normalize_unit(np.abs(ch - ch.mean())) for ch in chans]
    return mpcnn_fuse(maps, eps, cfg.pcnn_params(eps))


_METHODS = {
    "proposed": proposed_saliency,
    "wt-baseline": wt_baseline_saliency,
    "ft": ft_saliency,
    "ft-pca-mpcnn": ft_pca_mpcnn_saliency,
}


def run_method(name: str, img: np.ndarray,
               cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    try:
        fn = _METHODS[name]
    except KeyError:
        raise ValueError(
            f"unknown method {name!r}; choose from {', '.join(METHOD_NAMES)}")
    return fn(img, cfg)
