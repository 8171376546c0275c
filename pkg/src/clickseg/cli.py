"""Command line entry points: fill, rg, augment, evaluate, grade, serve.

Each subcommand is a thin wrapper over the library modules; all file output
goes through the atomic writers, so an aborted run never leaves a
half-written raster or report behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import augment, metrics, weaklabel
from .errors import ClicksegError, ValidationError
from .io import _atomic_write, read_image, read_mask, read_seeds, write_image, write_mask
from .raster import binarize, close, skeletonize

ROOT_ENV_VAR = "CLICKSEG_ROOT"

DEBUG_STEP_NAMES = (
    "step1_binary.png",
    "step2_skeleton.png",
    "step3_closed.png",
    "step4_filled.png",
)


def _threshold_arg(text: str):
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}")
    if not 0 <= value <= 255:
        raise argparse.ArgumentTypeError("threshold must lie in [0, 255]")
    return value


def _translate_arg(text: str):
    try:
        dr, dc = (int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'dr,dc' integers, got {text!r}")
    return augment.Translation(dr, dc)


def _fraction_arg(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")


def _report_result(result: weaklabel.WeakLabelResult, out_path) -> None:
    for (seed, size), status in zip(result.per_seed_regions, result.diagnostics):
        print(f"seed {seed}: {status.value}, {size} px")
    if result.truncated:
        print("note: pixel budget reached; mask is partial")
    print(f"wrote {out_path}")


def cmd_fill(args) -> int:
    image = read_image(args.image)
    seeds = read_seeds(args.seeds)
    params = weaklabel.FloodFillParams(
        threshold=args.threshold, closing_radius=args.closing_radius
    )
    result = weaklabel.floodfill_pipeline(
        image, seeds, params, leak_ratio=args.leak_ratio, max_pixels=args.max_pixels
    )
    if args.debug_steps is not None:
        steps_dir = Path(args.debug_steps)
        steps_dir.mkdir(parents=True, exist_ok=True)
        binary = binarize(image, params.threshold)
        skeleton = skeletonize(binary)
        closed = close(skeleton, params.closing_radius)
        for name, mask in zip(DEBUG_STEP_NAMES, (binary, skeleton, closed, result.mask)):
            write_mask(steps_dir / name, mask)
            print(f"wrote {steps_dir / name}")
    write_mask(args.out, result.mask)
    _report_result(result, args.out)
    return 0


def cmd_rg(args) -> int:
    image = read_image(args.image)
    seeds = read_seeds(args.seeds)
    params = weaklabel.RegionGrowParams(stop_threshold=args.stop_threshold)
    result = weaklabel.region_grow_all(
        image, seeds, params, leak_ratio=args.leak_ratio, max_pixels=args.max_pixels
    )
    write_mask(args.out, result.mask)
    _report_result(result, args.out)
    return 0


def _pair_up(image_dir: Path, label_dir: Path):
    images = sorted(
        p for p in image_dir.iterdir() if p.suffix.lower() in (".pgm", ".png")
    )
    if not images:
        raise ValidationError(f"no .pgm or .png images in {image_dir}")
    pairs = []
    for img_path in images:
        for ext in (".png", ".pgm"):
            label_path = label_dir / (img_path.stem + ext)
            if label_path.is_file():
                pairs.append((img_path, label_path))
                break
        else:
            raise ValidationError(f"no label found for {img_path.name} in {label_dir}")
    return pairs


def cmd_augment(args) -> int:
    transforms = []
    if args.orbit:
        transforms.extend(augment.ORIENTATIONS)
    transforms.extend(args.translate)
    if not transforms:
        print("error: nothing to do; pass --orbit and/or --translate", file=sys.stderr)
        return 2
    out_images = Path(args.out_images)
    out_labels = Path(args.out_labels)
    out_images.mkdir(parents=True, exist_ok=True)
    out_labels.mkdir(parents=True, exist_ok=True)
    written = 0
    for img_path, label_path in _pair_up(Path(args.images), Path(args.labels)):
        image = read_image(img_path)
        label = read_mask(label_path)
        for t, (aug_img, aug_label) in zip(transforms, augment.augment_pair(image, label, transforms)):
            suffix = augment.transform_suffix(t)
            write_image(out_images / f"{img_path.stem}{suffix}{img_path.suffix}", aug_img)
            write_mask(out_labels / f"{label_path.stem}{suffix}{label_path.suffix}", aug_label)
            written += 1
    print(f"wrote {written} augmented pairs")
    return 0


def _print_human_report(report: metrics.EvalReport) -> None:
    row = metrics.report_to_dict(report)
    for name in metrics.REPORT_FIELDS:
        value = row[name]
        print(f"{name}: {'undefined' if value is None else value}")


def cmd_evaluate(args) -> int:
    if args.from_rates is not None:
        if args.pred or args.truth:
            print("error: --from-rates takes no --pred/--truth", file=sys.stderr)
            return 2
        try:
            fnr_s, fpr_s = args.from_rates.split(",")
            fnr, fpr = Fraction(fnr_s.strip()), Fraction(fpr_s.strip())
        except (ValueError, ZeroDivisionError):
            print(f"error: expected 'fnr,fpr', got {args.from_rates!r}", file=sys.stderr)
            return 2
        value = metrics.auroc_from_rates(fnr, fpr)
        # seven decimals: six-decimal inputs can land exactly on a half-way
        # point, which one more digit shows faithfully instead of rounding
        print(f"{value:.7f}")
        return 0

    if not args.pred or len(args.pred) != len(args.truth or []):
        print("error: need matching --pred/--truth pairs", file=sys.stderr)
        return 2
    pairs = [(read_mask(p), read_mask(t)) for p, t in zip(args.pred, args.truth)]
    ids = [Path(p).stem for p in args.pred]
    micro, per_image = metrics.evaluate_set(pairs)
    if args.json:
        text = metrics.set_report_to_json(micro, per_image, ids=ids)
    elif args.csv:
        text = metrics.set_report_to_csv(micro, per_image, ids=ids)
    else:
        text = None
    if text is not None:
        if args.out is not None:
            _atomic_write(args.out, text.encode("utf-8"))
            print(f"wrote {args.out}")
        else:
            print(text, end="")
        return 0
    if len(per_image) == 1:
        _print_human_report(per_image[0])
    else:
        for image_id, rep in zip(ids, per_image):
            print(f"[{image_id}]")
            _print_human_report(rep)
        print("[micro]")
        _print_human_report(micro)
    return 0


_SCALES = {
    "auroc": metrics.TRADITIONAL_AUROC,
    "landis": metrics.LANDIS_KOCH,
    "fleiss": metrics.FLEISS,
}


def cmd_grade(args) -> int:
    print(metrics.grade(args.value, _SCALES[args.scale]))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.root, default_budget=args.budget)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clickseg",
        description="Click-point weak labeling: fills, region growing, "
        "augmentation, and mask evaluation.",
        epilog="exit status: 0 success, 1 runtime or input error, 2 usage error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fill", help="flood fill from click-points behind a barrier mask")
    p.add_argument("--image", required=True)
    p.add_argument("--seeds", required=True, help="file with one 'row,col' per line")
    p.add_argument("--out", required=True)
    p.add_argument(
        "--threshold",
        type=_threshold_arg,
        default=128,
        help="binarization threshold 0-255, or 'auto' (default 128)",
    )
    p.add_argument("--closing-radius", type=int, default=1)
    p.add_argument("--leak-ratio", type=float, default=weaklabel.DEFAULT_LEAK_RATIO)
    p.add_argument("--max-pixels", type=int, default=None)
    p.add_argument(
        "--debug-steps",
        metavar="DIR",
        default=None,
        help="also write the binary, skeleton, closed, and filled intermediates",
    )
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("rg", help="seeded region growing from click-points")
    p.add_argument("--image", required=True)
    p.add_argument("--seeds", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stop-threshold", type=float, default=10.0)
    p.add_argument("--leak-ratio", type=float, default=weaklabel.DEFAULT_LEAK_RATIO)
    p.add_argument("--max-pixels", type=int, default=None)
    p.set_defaults(func=cmd_rg)

    p = sub.add_parser("augment", help="expand an image/label directory pair")
    p.add_argument("--images", required=True, help="directory of source images")
    p.add_argument("--labels", required=True, help="directory of matching label masks")
    p.add_argument("--out-images", required=True)
    p.add_argument("--out-labels", required=True)
    p.add_argument("--orbit", action="store_true", help="all 8 flips and rotations")
    p.add_argument(
        "--translate",
        type=_translate_arg,
        action="append",
        default=[],
        metavar="DR,DC",
        help="shift by (dr, dc); repeatable",
    )
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("evaluate", help="score predicted masks against truth masks")
    p.add_argument("--pred", action="append", default=[])
    p.add_argument("--truth", action="append", default=[])
    p.add_argument("--from-rates", metavar="FNR,FPR", default=None)
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("grade", help="map a score onto an agreement scale")
    p.add_argument("--value", required=True, type=_fraction_arg)
    p.add_argument("--scale", required=True, choices=sorted(_SCALES))
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument(
        "--root",
        default=os.environ.get(ROOT_ENV_VAR, "clickseg-projects"),
        help=f"projects directory (default ${ROOT_ENV_VAR} or ./clickseg-projects)",
    )
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--budget", type=int, default=4_000_000, help="preview pixel budget")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ClicksegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
