"""Hot numeric kernels: numba @njit versions with pure-numpy twins.

Both implementations of a kernel perform the same floating-point operations
in the same order, so the backends are bit-identical. Accumulations that must
stay equivariant under flips/rotations use symmetric pairing (blur) or
integer counts per distinct kernel value (grouped convolution); reordering a
sum of exact integers cannot change it, so spatial symmetries of the kernel
carry over to the output exactly.
"""

from typing import NamedTuple

import numpy as np

from . import _backend

__all__ = ["blur_2d", "group_conv", "decompose_kernel", "KernelDecomp", "warmup"]


# --- separable blur ---------------------------------------------------------
# Pass input pre-padded (mirror) by r along the last axis; w holds the half
# kernel w[0..r] with full sum w[0] + 2*sum(w[1:]) == 1.

def _blur_rows_np(padded: np.ndarray, w: np.ndarray) -> np.ndarray:
    r = w.shape[0] - 1
    n = padded.shape[1] - 2 * r
    out = w[0] * padded[:, r:r + n]
    for t in range(1, r + 1):
        out += w[t] * (padded[:, r - t:r - t + n] + padded[:, r + t:r + t + n])
    return out


if _backend.HAS_NUMBA:
    from numba import njit, prange

    @njit(cache=True, parallel=True)
    def _blur_rows_jit(padded, w):  # pragma: no cover - exercised via dispatch
        rows, cols = padded.shape
        r = w.shape[0] - 1
        n = cols - 2 * r
        out = np.empty((rows, n))
        for i in prange(rows):
            for j in range(n):
                c = j + r
                acc = w[0] * padded[i, c]
                for t in range(1, r + 1):
                    acc = acc + w[t] * (padded[i, c - t] + padded[i, c + t])
                out[i, j] = acc
        return out

    @njit(cache=True, parallel=True)
    def _group_conv_jit(y, vals, offr, offc, bounds):  # pragma: no cover
        rows, cols = y.shape
        out = np.empty((rows, cols))
        ngroups = vals.shape[0]
        for i in prange(rows):
            for j in range(cols):
                acc = 0.0
                for g in range(ngroups):
                    cnt = 0
                    for t in range(bounds[g], bounds[g + 1]):
                        ii = i - offr[t]
                        jj = j - offc[t]
                        if 0 <= ii < rows and 0 <= jj < cols and y[ii, jj] != 0:
                            cnt += 1
                    acc = acc + vals[g] * cnt
                out[i, j] = acc
        return out


def _pad_mirror(values: np.ndarray, r: int) -> np.ndarray:
    return np.pad(values, ((0, 0), (r, r)), mode="symmetric")


def blur_2d(values: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Separable symmetric-kernel filter with mirror boundary extension."""
    r = w.shape[0] - 1
    rows = _pad_mirror(np.ascontiguousarray(values), r)
    if _backend.USE_NUMBA:
        tmp = _blur_rows_jit(rows, w)
    else:
        tmp = _blur_rows_np(rows, w)
    cols = _pad_mirror(np.ascontiguousarray(tmp.T), r)
    if _backend.USE_NUMBA:
        out = _blur_rows_jit(cols, w)
    else:
        out = _blur_rows_np(cols, w)
    return np.ascontiguousarray(out.T)


# --- grouped-value convolution ----------------------------------------------

class KernelDecomp(NamedTuple):
    """Convolution kernel split into groups of equal-valued taps."""

    vals: np.ndarray    # float64[G], ascending, zeros dropped
    offr: np.ndarray    # int64[T] row offsets from center
    offc: np.ndarray    # int64[T] column offsets
    bounds: np.ndarray  # int64[G+1] group slices into offr/offc


def decompose_kernel(kernel: np.ndarray) -> KernelDecomp:
    k = np.asarray(kernel, dtype=np.float64)
    if k.ndim != 2 or k.shape[0] % 2 == 0 or k.shape[1] % 2 == 0:
        raise ValueError("kernel must be 2-D with odd side lengths")
    rc, cc = k.shape[0] // 2, k.shape[1] // 2
    vals = np.unique(k[k != 0.0])
    offr, offc, bounds = [], [], [0]
    for v in vals:
        rr, cols = np.nonzero(k == v)
        offr.append(rr - rc)
        offc.append(cols - cc)
        bounds.append(bounds[-1] + rr.size)
    if vals.size:
        offr = np.concatenate(offr).astype(np.int64)
        offc = np.concatenate(offc).astype(np.int64)
    else:
        offr = np.empty(0, np.int64)
        offc = np.empty(0, np.int64)
    return KernelDecomp(vals, offr, offc, np.asarray(bounds, np.int64))


def _group_conv_np(y, vals, offr, offc, bounds):
    rows, cols = y.shape
    out = np.zeros((rows, cols))
    cnt = np.empty((rows, cols), np.int64)
    for g in range(vals.shape[0]):
        cnt[:] = 0
        for t in range(bounds[g], bounds[g + 1]):
            a = int(offr[t])
            b = int(offc[t])
            i0, i1 = max(0, a), min(rows, rows + a)
            j0, j1 = max(0, b), min(cols, cols + b)
            if i0 >= i1 or j0 >= j1:
                continue
            cnt[i0:i1, j0:j1] += y[i0 - a:i1 - a, j0 - b:j1 - b]
        out += vals[g] * cnt
    return out


def group_conv(y: np.ndarray, decomp: KernelDecomp) -> np.ndarray:
    """Zero-padded convolution of a binary map with a decomposed kernel."""
    y = np.ascontiguousarray(y, dtype=np.uint8)
    if _backend.USE_NUMBA:
        return _group_conv_jit(y, decomp.vals, decomp.offr, decomp.offc,
                               decomp.bounds)
    return _group_conv_np(y, decomp.vals, decomp.offr, decomp.offc,
                          decomp.bounds)


def warmup() -> None:
    """Force JIT compilation so timed paths run at steady state."""
    w = np.array([0.5, 0.25])
    blur_2d(np.zeros((4, 4)), w)
    k = np.ones((3, 3))
    k[1, 1] = 0.0
    group_conv(np.zeros((4, 4), np.uint8), decompose_kernel(k))
