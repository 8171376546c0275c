"""Dataset growth: the eight square symmetries plus in-bounds translations.

All transforms are exact pixel permutations or index shifts; nothing is ever
interpolated.  Image/label pairs go through :func:`augment_pair` so both
rasters always receive the identical geometric move.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NonSquareRotationError, ValidationError


@dataclass(frozen=True)
class Orientation:
    """One of the eight symmetries of the square.

    ``rotation`` is counter-clockwise in degrees; the horizontal mirror, when
    set, is applied after the rotation.
    """

    rotation: int = 0
    flipped: bool = False

    def __post_init__(self):
        if self.rotation not in (0, 90, 180, 270):
            raise ValidationError(f"rotation must be 0/90/180/270, got {self.rotation}")


@dataclass(frozen=True)
class Translation:
    """Shift by (dr, dc) pixels; vacated pixels take the fill intensity.

    Output dimensions always equal input dimensions.  When a label travels
    with the image its vacated pixels are filled with background 0 no matter
    what ``fill`` says; the fill only applies to the intensity raster.
    """

    dr: int = 0
    dc: int = 0
    fill: int = 0

    def __post_init__(self):
        if not 0 <= self.fill <= 255:
            raise ValidationError("translation fill must lie in [0, 255]")


# canonical order: the four rotations, then the four rotations mirrored
ORIENTATIONS = tuple(
    Orientation(rotation, flipped) for flipped in (False, True) for rotation in (0, 90, 180, 270)
)


def _check_raster(arr) -> np.ndarray:
    a = np.asarray(arr)
    if a.ndim != 2 or a.size == 0:
        raise ValidationError(f"expected a nonempty 2-D raster, got shape {a.shape}")
    return a


def apply_orientation(arr, o: Orientation) -> np.ndarray:
    """Apply one square symmetry as an exact pixel permutation."""

    a = _check_raster(arr)
    if o.rotation in (90, 270) and a.shape[0] != a.shape[1]:
        raise NonSquareRotationError(
            f"rotation by {o.rotation} needs a square raster, got {a.shape[0]}x{a.shape[1]}"
        )
    out = np.rot90(a, k=o.rotation // 90)
    if o.flipped:
        out = np.fliplr(out)
    return out.copy()


def orbit(image) -> list[tuple[Orientation, np.ndarray]]:
    """The image under all eight orientations, in the canonical order.

    Symmetric inputs yield repeated rasters on purpose: the factor-of-8
    claim counts orientations, not distinct pixel grids.
    """

    return [(o, apply_orientation(image, o)) for o in ORIENTATIONS]


def translate(arr, t: Translation) -> np.ndarray:
    """Shift within the borders; sources that fall outside supply the fill."""

    a = _check_raster(arr)
    h, w = a.shape
    out = np.full_like(a, t.fill)
    dr, dc = int(t.dr), int(t.dc)
    if abs(dr) < h and abs(dc) < w:
        src_r = slice(max(0, -dr), h - max(0, dr))
        src_c = slice(max(0, -dc), w - max(0, dc))
        dst_r = slice(max(0, dr), h - max(0, -dr))
        dst_c = slice(max(0, dc), w - max(0, -dc))
        out[dst_r, dst_c] = a[src_r, src_c]
    return out


def augment_pair(image, label, transforms) -> list[tuple[np.ndarray, np.ndarray]]:
    """Apply each transform jointly to an image and its label mask.

    Output order matches the transform order.  Labels translated past the
    border are padded with background 0 regardless of the image fill.
    """

    img = _check_raster(image)
    lbl = _check_raster(label)
    if img.shape != lbl.shape:
        raise DimensionMismatchError(
            f"image {img.shape} and label {lbl.shape} must have equal dimensions"
        )
    out = []
    for t in transforms:
        if isinstance(t, Orientation):
            out.append((apply_orientation(img, t), apply_orientation(lbl, t)))
        elif isinstance(t, Translation):
            label_t = Translation(t.dr, t.dc, fill=0)
            out.append((translate(img, t), translate(lbl, label_t)))
        else:
            raise ValidationError(f"unsupported transform {t!r}")
    return out


def transform_suffix(t) -> str:
    """Stable file-name suffix encoding a transform, e.g. _r90_f or _t+3-2."""

    if isinstance(t, Orientation):
        return f"_r{t.rotation}_f" if t.flipped else f"_r{t.rotation}"
    if isinstance(t, Translation):
        return f"_t{t.dr:+d}{t.dc:+d}"
    raise ValidationError(f"unsupported transform {t!r}")
