"""Command-line interface: saliency map generation, batch evaluation, and
intermediate-artifact inspection.

Parameters resolve in three layers: built-in defaults, then a ``key = value``
config file (``--config``), then explicit flags. ``--print-config`` echoes the
fully resolved set before the run for reproducibility.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import SalfuseError
from .evaluate import evaluate_dataset, write_csv, write_json
from .methods import (
    METHOD_NAMES,
    PipelineConfig,
    pca_channels,
    run_method,
)
from .mpcnn import mpcnn_fuse
from .planes import load_image, normalize_unit, save_plane
from .wavelet import BASIS_NAMES, conspicuity_map, get_basis, level_feature_maps

_IMAGE_SUFFIXES = (".png", ".bmp", ".ppm", ".pgm", ".pbm")


@dataclass
class RunConfig:
    method: str = "proposed"
    wavelet: str = "db4"
    iters: int = 20
    stop_mode: str = "all-fired"
    alpha: float = 0.3
    sigma: float = 1.0
    kernel_radius: int = 17
    out: str = "."
    threads: int = 0  # 0 = all available cores
    binary: bool = False

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            wavelet=self.wavelet, blur_sigma=self.sigma,
            kernel_radius=self.kernel_radius, n_iter=self.iters,
            stop_mode=self.stop_mode,
        )

    def effective_threads(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


_FIELD_TYPES = {
    "method": str, "wavelet": str, "iters": int, "stop_mode": str,
    "alpha": float, "sigma": float, "kernel_radius": int, "out": str,
    "threads": int, "binary": lambda v: v.lower() in ("1", "true", "yes"),
}


class UsageError(SalfuseError):
    pass


def _read_config_file(path: str) -> dict:
    values = {}
    p = Path(path)
    if not p.exists():
        raise UsageError(f"config file not found: {path}")
    for lineno, raw in enumerate(p.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown option {key!r}")
        try:
            values[key] = _FIELD_TYPES[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value}") from exc
    return values


def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        for key, value in _read_config_file(args.config).items():
            setattr(cfg, key, value)
    for key in _FIELD_TYPES:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if cfg.method not in METHOD_NAMES:
        raise UsageError(
            f"invalid method {cfg.method!r}; choose from {', '.join(METHOD_NAMES)}")
    if cfg.wavelet not in BASIS_NAMES:
        raise UsageError(
            f"invalid wavelet {cfg.wavelet!r}; choose from {', '.join(BASIS_NAMES)}")
    if cfg.stop_mode not in ("fixed", "all-fired"):
        raise UsageError("stop-mode must be 'fixed' or 'all-fired'")
    if cfg.iters < 1:
        raise UsageError("iters must be >= 1")
    if cfg.sigma <= 0:
        raise UsageError("sigma must be > 0")
    if cfg.kernel_radius < 1:
        raise UsageError("kernel-radius must be >= 1")
    if cfg.alpha < 0:
        raise UsageError("alpha must be >= 0")
    if cfg.threads < 0:
        raise UsageError("threads must be >= 0")
    return cfg


def _print_config(cfg: RunConfig) -> None:
    for key in sorted(_FIELD_TYPES):
        print(f"{key} = {getattr(cfg, key)}")


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_saliency(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    if args.print_config:
        _print_config(cfg)
    img = load_image(args.image)
    saliency = run_method(cfg.method, img, cfg.pipeline())
    out = _out_dir(cfg)
    stem = Path(args.image).stem
    sal_path = out / f"{stem}.saliency.png"
    save_plane(saliency, sal_path)
    print(sal_path)
    if cfg.binary:
        from .evaluate import binarize_mean
        bin_path = out / f"{stem}.binary.png"
        save_plane(binarize_mean(saliency).astype(float), bin_path)
        print(bin_path)
    return 0


def _collect_pairs(images_dir: str, masks_dir: str):
    images = Path(images_dir)
    masks = Path(masks_dir)
    if not images.is_dir():
        raise UsageError(f"image directory not found: {images_dir}")
    if not masks.is_dir():
        raise UsageError(f"mask directory not found: {masks_dir}")
    pairs = []
    for img in sorted(images.iterdir()):
        if img.suffix.lower() not in _IMAGE_SUFFIXES:
            continue
        mask = masks / img.name
        if not mask.exists():
            for suffix in _IMAGE_SUFFIXES:
                candidate = masks / (img.stem + suffix)
                if candidate.exists():
                    mask = candidate
                    break
        pairs.append((img, mask))
    return pairs


def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    if args.print_config:
        _print_config(cfg)
    pairs = _collect_pairs(args.images, args.masks)
    if not pairs:
        print("error: no images found", file=sys.stderr)
        return 1
    report = evaluate_dataset(pairs, cfg.method, cfg.pipeline(),
                              alpha=cfg.alpha, threads=cfg.effective_threads())
    if not report.records:
        print("error: no valid image/mask pairs", file=sys.stderr)
        return 1
    out = _out_dir(cfg)
    write_csv(report, out / "report.csv")
    write_json(report, out / "report.json")
    if report.skipped:
        print(f"warning: skipped {len(report.skipped)} pair(s)", file=sys.stderr)
    print(f"P={report.mean_precision:.4f} R={report.mean_recall:.4f} "
          f"F={report.mean_f_measure:.4f} AUC={report.mean_auc:.4f}")
    return 0


def _cmd_inspect(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    if args.print_config:
        _print_config(cfg)
    img = load_image(args.image)
    pipeline = cfg.pipeline()
    chans, eps = pca_channels(img, pipeline)
    basis = get_basis(cfg.wavelet)

    out = _out_dir(cfg)
    stem = Path(args.image).stem
    manifest = {"image": str(args.image), "epsilon": list(eps),
                "params": {k: getattr(cfg, k) for k in sorted(_FIELD_TYPES)},
                "files": {"pct": [], "features": {}, "conspicuity": []}}

    conspicuities = []
    for i, ch in enumerate(chans, start=1):
        name = f"{stem}.pct{i}.png"
        save_plane(ch, out / name)
        manifest["files"]["pct"].append(name)
        feats = level_feature_maps(normalize_unit(ch) * 255.0, basis)
        level_names = []
        for s, feat in enumerate(feats, start=1):
            fname = f"{stem}.c{i}.level{s}.png"
            save_plane(feat, out / fname)
            level_names.append(fname)
        manifest["files"]["features"][str(i)] = level_names
        cons = conspicuity_map(ch, basis)
        conspicuities.append(cons)
        cname = f"{stem}.conspicuity{i}.png"
        save_plane(cons, out / cname)
        manifest["files"]["conspicuity"].append(cname)

    fused = mpcnn_fuse(conspicuities, eps, pipeline.pcnn_params(eps))
    fused_name = f"{stem}.fused.png"
    save_plane(fused, out / fused_name)
    manifest["files"]["fused"] = fused_name

    manifest_path = out / f"{stem}.inspect.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print("epsilon: " + " ".join(f"{e:.6f}" for e in eps))
    print(manifest_path)
    return 0


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--method", help=f"one of: {', '.join(METHOD_NAMES)}")
    common.add_argument("--wavelet", help=f"one of: {', '.join(BASIS_NAMES)}")
    common.add_argument("--iters", type=int, help="fixed-mode iteration count")
    common.add_argument("--stop-mode", dest="stop_mode",
                        help="'fixed' or 'all-fired'")
    common.add_argument("--alpha", type=float, help="F-measure precision weight")
    common.add_argument("--sigma", type=float, help="pre-filter blur sigma")
    common.add_argument("--kernel-radius", dest="kernel_radius", type=int,
                        help="linking kernel radius (default 17 -> 35x35)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--threads", type=int,
                        help="worker threads for batch eval (0 = all cores)")
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--print-config", action="store_true",
                        help="echo the resolved parameter set")

    parser = _Parser(prog="salfuse",
                     description="Saliency maps from principal-axis wavelet "
                                 "conspicuity and pulse-coupled fusion")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sal = sub.add_parser("saliency", parents=[common],
                           help="compute one saliency map")
    p_sal.add_argument("image")
    p_sal.add_argument("--binary", action="store_true", default=None,
                       help="also write the mean-thresholded binary map")
    p_sal.set_defaults(func=_cmd_saliency)

    p_eval = sub.add_parser("eval", parents=[common],
                            help="evaluate a labeled dataset")
    p_eval.add_argument("images", help="directory of input images")
    p_eval.add_argument("masks", help="directory of equally named masks")
    p_eval.set_defaults(func=_cmd_eval)

    p_ins = sub.add_parser("inspect", parents=[common],
                           help="dump per-stage intermediate maps")
    p_ins.add_argument("image")
    p_ins.set_defaults(func=_cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SalfuseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
