"""Per-pixel principal component analysis of the RGB channels.

The three channels of an image are treated as an (n_pixels x 3) data matrix;
its 3x3 sample covariance is eigendecomposed and pixels are projected onto
each eigenvector to produce three decorrelated planes. The normalized
eigenvalues provide the fusion weights for the downstream combination stage.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRangeError, TooFewPixelsError


@dataclass(frozen=True)
class PcaBasis:
    """Eigenvectors (rows, descending eigenvalue order), eigenvalues, means."""

    eigvecs: np.ndarray  # (3, 3), row i holds the i-th principal direction
    eigvals: np.ndarray  # (3,), sorted descending, clamped at 0
    means: np.ndarray    # (3,) channel means of the fitted image


def fit_pca(img: np.ndarray) -> PcaBasis:
    """Fit the RGB covariance eigenbasis of an (H, W, 3) image.

    Covariance uses the n-1 divisor. Eigenpairs are sorted by descending
    eigenvalue; tiny negative eigenvalues from round-off are clamped to 0.
    Each eigenvector's largest-magnitude component is made positive so the
    basis is deterministic despite the inherent sign ambiguity.
    """
    data = np.asarray(img, dtype=np.float64).reshape(-1, 3)
    n = data.shape[0]
    if n < 2:
        raise TooFewPixelsError("need at least 2 pixels to fit a covariance")
    means = data.mean(axis=0)
    centered = data - means
    cov = centered.T @ centered / (n - 1)
    cov = (cov + cov.T) / 2.0
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1]
    vals = np.maximum(vals[order], 0.0)
    vecs = vecs[:, order].T
    for i in range(3):
        if vecs[i, np.argmax(np.abs(vecs[i]))] < 0:
            vecs[i] = -vecs[i]
    return PcaBasis(eigvecs=vecs, eigvals=vals, means=means)


def project_channel(img: np.ndarray, basis: PcaBasis, i: int) -> np.ndarray:
    """Project zero-meaned pixels onto principal direction i (1-based)."""
    if i not in (1, 2, 3):
        raise IndexOutOfRangeError(f"principal component index must be 1..3, got {i}")
    arr = np.asarray(img, dtype=np.float64)
    centered = arr.reshape(-1, 3) - basis.means
    return (centered @ basis.eigvecs[i - 1]).reshape(arr.shape[0], arr.shape[1])


def channel_weights(basis: PcaBasis) -> tuple[float, float, float]:
    """Eigenvalue shares (each lambda over their sum), summing to 1.

    A constant image has zero total variance; the weights then fall back to
    the uniform 1/3 split so the fusion stage stays well defined.
    """
    total = float(basis.eigvals.sum())
    if total == 0.0:
        return (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    return tuple(float(v) / total for v in basis.eigvals)
