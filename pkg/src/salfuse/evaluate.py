"""Quantitative evaluation: binarization, precision/recall/F, ROC/AUC, batches.

Saliency maps are binarized at their mean value, compared against binary
ground-truth masks, and scored with precision, recall, the weighted harmonic
F-measure, and the area under the ROC curve sampled on a fixed 257-point
threshold grid (1/256 steps). Dataset runs aggregate per-image records into
arithmetic means and serialize to CSV and JSON.
"""

import csv
import json
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import (
    DegenerateGroundTruthError,
    DimensionMismatchError,
    EmptyGroundTruthError,
    EmptyInputError,
    MissingFileError,
    ShapeMismatchError,
)
from .methods import PipelineConfig, run_method
from .planes import load_image

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.3
MASK_POSITIVE_ABOVE = 127  # 8-bit mask values > 127 count as foreground


@dataclass(frozen=True)
class RocCurve:
    """TPR/FPR per threshold; thresholds descend, the curve runs (0,0)->(1,1)."""

    thresholds: np.ndarray
    tpr: np.ndarray
    fpr: np.ndarray


@dataclass(frozen=True)
class EvalRecord:
    image: str
    precision: float
    recall: float
    f_measure: float
    auc: float


@dataclass(frozen=True)
class EvalReport:
    method: str
    alpha: float
    params: dict
    records: tuple
    mean_precision: float
    mean_recall: float
    mean_f_measure: float
    mean_auc: float
    skipped: tuple = ()


def binarize_mean(saliency: np.ndarray) -> np.ndarray:
    """1 where the value strictly exceeds the plane mean, else 0."""
    s = np.asarray(saliency, dtype=np.float64)
    return (s > s.mean()).astype(np.uint8)


def prf(detected: np.ndarray, truth: np.ndarray,
        alpha: float = DEFAULT_ALPHA) -> tuple[float, float, float]:
    """Precision, recall and weighted harmonic F-measure of two binary maps.

    An empty detection scores (0, 0, 0); F is 0 whenever its denominator
    alpha*P + R vanishes.
    """
    s = np.asarray(detected)
    g = np.asarray(truth)
    if s.shape != g.shape:
        raise ShapeMismatchError(f"shapes differ: {s.shape} vs {g.shape}")
    g_total = int(g.sum())
    if g_total == 0:
        raise EmptyGroundTruthError("ground truth has no positive pixels")
    s_total = int(s.sum())
    hits = int((s.astype(np.int64) * g.astype(np.int64)).sum())
    precision = hits / s_total if s_total else 0.0
    recall = hits / g_total
    denom = alpha * precision + recall
    f_measure = (1.0 + alpha) * precision * recall / denom if denom > 0 else 0.0
    return precision, recall, f_measure


def roc_auc(saliency: np.ndarray, truth: np.ndarray) -> tuple[RocCurve, float]:
    """ROC over the fixed dyadic threshold grid and its trapezoidal area.

    A pixel counts as detected when its value is >= the threshold. Sentinel
    endpoints pin the curve to (0,0) and (1,1).
    """
    s = np.asarray(saliency, dtype=np.float64)
    g = np.asarray(truth)
    if s.shape != g.shape:
        raise ShapeMismatchError(f"shapes differ: {s.shape} vs {g.shape}")
    pos = np.sort(s[g != 0])
    neg = np.sort(s[g == 0])
    if pos.size == 0 or neg.size == 0:
        raise DegenerateGroundTruthError(
            "ground truth needs at least one positive and one negative pixel")
    grid = np.arange(256, -1, -1) / 256.0
    thresholds = np.concatenate(([np.inf], grid, [-1.0 / 256.0]))
    tpr = 1.0 - np.searchsorted(pos, thresholds, side="left") / pos.size
    fpr = 1.0 - np.searchsorted(neg, thresholds, side="left") / neg.size
    tpr[0] = 0.0  # searchsorted(inf) already gives 0, stated for clarity
    auc = float(np.trapezoid(tpr, fpr))
    return RocCurve(thresholds=thresholds, tpr=tpr, fpr=fpr), auc


def load_mask(path, shape=None) -> np.ndarray:
    """Load an 8-bit mask file as a binary map (values > 127 are foreground)."""
    arr = load_image(path)
    bits = (arr[:, :, 0] > MASK_POSITIVE_ABOVE).astype(np.uint8)
    if shape is not None and bits.shape != shape:
        raise DimensionMismatchError(
            f"mask {path} is {bits.shape}, image is {shape}")
    return bits


def _evaluate_pair(pair, method: str, cfg: PipelineConfig, alpha: float) -> EvalRecord:
    image_path, mask_path = pair
    img = load_image(image_path)
    mask = load_mask(mask_path, shape=img.shape[:2])
    saliency = run_method(method, img, cfg)
    detected = binarize_mean(saliency)
    precision, recall, f_measure = prf(detected, mask, alpha)
    _, auc = roc_auc(saliency, mask)
    return EvalRecord(image=str(image_path), precision=precision,
                      recall=recall, f_measure=f_measure, auc=auc)

# Per-pair failures that skip the pair instead of aborting the batch.
_SKIPPABLE = (MissingFileError, DimensionMismatchError,
              EmptyGroundTruthError, DegenerateGroundTruthError)


def evaluate_dataset(pairs, method: str, cfg: PipelineConfig = PipelineConfig(),
                     alpha: float = DEFAULT_ALPHA, threads: int = 1) -> EvalReport:
    """Run a method over (image, mask) path pairs and aggregate the metrics.

    Pairs are processed in sorted image-path order; pairs whose files are
    missing, mismatched in size, or degenerate are skipped with a warning and
    the run continues.
    """
    pairs = sorted(pairs, key=lambda p: str(p[0]))
    if not pairs:
        raise EmptyInputError("no image/mask pairs given")

    def worker(pair):
        try:
            return _evaluate_pair(pair, method, cfg, alpha)
        except _SKIPPABLE as exc:
            return (str(pair[0]), f"{type(exc).__name__}: {exc}")

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(worker, pairs))
    else:
        results = [worker(p) for p in pairs]

    records = tuple(r for r in results if isinstance(r, EvalRecord))
    skipped = tuple(r for r in results if not isinstance(r, EvalRecord))
    for path, reason in skipped:
        warnings.warn(f"skipped {path}: {reason}", stacklevel=2)
        logger.warning("skipped %s: %s", path, reason)

    def mean(attr):
        return float(np.mean([getattr(r, attr) for r in records])) if records else float("nan")

    return EvalReport(
        method=method, alpha=alpha, params=asdict(cfg), records=records,
        mean_precision=mean("precision"), mean_recall=mean("recall"),
        mean_f_measure=mean("f_measure"), mean_auc=mean("auc"),
        skipped=skipped,
    )


def write_csv(report: EvalReport, path) -> None:
    """One row per image plus a trailing mean row."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image", "precision", "recall", "f_measure", "auc"])
        for r in report.records:
            writer.writerow([r.image, f"{r.precision:.9f}", f"{r.recall:.9f}",
                             f"{r.f_measure:.9f}", f"{r.auc:.9f}"])
        writer.writerow(["mean", f"{report.mean_precision:.9f}",
                         f"{report.mean_recall:.9f}",
                         f"{report.mean_f_measure:.9f}",
                         f"{report.mean_auc:.9f}"])


def write_json(report: EvalReport, path) -> None:
    """Full report including the parameter snapshot and skipped pairs."""
    payload = {
        "method": report.method,
        "alpha": report.alpha,
        "params": report.params,
        "records": [asdict(r) for r in report.records],
        "means": {
            "precision": report.mean_precision,
            "recall": report.mean_recall,
            "f_measure": report.mean_f_measure,
            "auc": report.mean_auc,
        },
        "skipped": [{"image": p, "reason": r} for p, r in report.skipped],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
