"""Saliency computation toolkit.

Pipelines: Gaussian denoising, per-pixel principal component analysis of the
color channels, multilevel wavelet band-energy conspicuity maps, and
multi-channel pulse-coupled fusion, plus simpler reference methods and a
precision/recall/F/AUC evaluation harness.
"""

from ._backend import active_backend
from .errors import SalfuseError
from .evaluate import (
    EvalRecord,
    EvalReport,
    RocCurve,
    binarize_mean,
    evaluate_dataset,
    prf,
    roc_auc,
)
from .methods import (
    METHOD_NAMES,
    PipelineConfig,
    ft_pca_mpcnn_saliency,
    ft_saliency,
    proposed_saliency,
    run_method,
    wt_baseline_saliency,
)
from .mpcnn import PcnnParams, PcnnState, linking_kernel, mpcnn_fuse, mpcnn_step
from .pca import PcaBasis, channel_weights, fit_pca, project_channel
from .planes import (
    gaussian_blur,
    load_image,
    normalize_unit,
    rgb_to_lab,
    save_plane,
)
from .wavelet import (
    WaveletBasis,
    WaveletPyramid,
    conspicuity_map,
    dwt2,
    feature_map,
    get_basis,
    idwt2,
    max_levels,
)

__version__ = "0.1.0"

__all__ = [
    "active_backend", "SalfuseError",
    "EvalRecord", "EvalReport", "RocCurve", "binarize_mean",
    "evaluate_dataset", "prf", "roc_auc",
    "METHOD_NAMES", "PipelineConfig", "ft_pca_mpcnn_saliency", "ft_saliency",
    "proposed_saliency", "run_method", "wt_baseline_saliency",
    "PcnnParams", "PcnnState", "linking_kernel", "mpcnn_fuse", "mpcnn_step",
    "PcaBasis", "channel_weights", "fit_pca", "project_channel",
    "gaussian_blur", "load_image", "normalize_unit", "rgb_to_lab", "save_plane",
    "WaveletBasis", "WaveletPyramid", "conspicuity_map", "dwt2", "feature_map",
    "get_basis", "idwt2", "max_levels",
    "__version__",
]
