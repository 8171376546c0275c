"""Pixel-grid primitives: thresholding, disk morphology, thinning, flood fill.

Conventions used everywhere in this package:

* grayscale images are 2-D uint8 arrays, row-major, origin at the top left;
* binary masks are 2-D uint8 arrays holding only 0 and 1 (1 = foreground);
* seeds are ``(row, col)`` pairs of 0-based indices.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import (
    SeedOnBarrierError,
    SeedOutOfBoundsError,
    ValidationError,
)

# 4-connectivity footprint for component labelling.
FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def as_gray_image(arr) -> np.ndarray:
    """Validate *arr* as a grayscale image and return it as a uint8 array."""

    a = np.asarray(arr)
    if a.ndim != 2:
        raise ValidationError(f"image must be 2-D, got shape {a.shape}")
    if a.size == 0:
        raise ValidationError("image must contain at least one pixel")
    if a.dtype == np.uint8:
        return a
    if a.dtype == bool or not np.issubdtype(a.dtype, np.integer):
        raise ValidationError(f"image must hold integer intensities, got {a.dtype}")
    if a.min() < 0 or a.max() > 255:
        raise ValidationError("image intensities must lie in [0, 255]")
    return a.astype(np.uint8)


def as_binary_mask(arr) -> np.ndarray:
    """Validate *arr* as a {0,1} mask and return it as a uint8 array."""

    a = np.asarray(arr)
    if a.ndim != 2:
        raise ValidationError(f"mask must be 2-D, got shape {a.shape}")
    if a.size == 0:
        raise ValidationError("mask must contain at least one pixel")
    if a.dtype == bool:
        return a.astype(np.uint8)
    if not np.issubdtype(a.dtype, np.integer):
        raise ValidationError(f"mask must hold integer labels, got {a.dtype}")
    if ((a != 0) & (a != 1)).any():
        raise ValidationError("mask may contain only 0 and 1")
    return a.astype(np.uint8)


def check_seed(seed, shape) -> tuple[int, int]:
    """Return *seed* as an in-bounds (row, col) pair or raise."""

    r, c = int(seed[0]), int(seed[1])
    if not (0 <= r < shape[0] and 0 <= c < shape[1]):
        raise SeedOutOfBoundsError((r, c), shape)
    return r, c


def disk_footprint(radius: int) -> np.ndarray:
    """Boolean (2r+1, 2r+1) digital disk: offsets with dr^2 + dc^2 <= r^2.

    Radius 0 is the single-pixel element, the identity for dilation and
    erosion.
    """

    r = int(radius)
    if r < 0:
        raise ValidationError("structuring element radius must be >= 0")
    dr, dc = np.ogrid[-r : r + 1, -r : r + 1]
    return (dr * dr + dc * dc) <= r * r


def otsu_threshold(image) -> int:
    """Threshold maximizing between-class variance, swept over all 256 candidates.

    The split at threshold t puts intensities <= t in the dark class.  Scores
    are compared in exact integer arithmetic (cross-multiplication) so the
    argmax never depends on float rounding; ties resolve to the smallest t.
    For a constant image every split is degenerate and the constant value
    itself is returned.
    """

    img = as_gray_image(image)
    counts = np.bincount(img.ravel(), minlength=256)
    n = int(img.size)
    s = int((counts * np.arange(256, dtype=np.int64)).sum())

    best_t = -1
    best_num = 0
    best_den = 1
    n0 = 0
    s0 = 0
    for t in range(256):
        n0 += int(counts[t])
        s0 += t * int(counts[t])
        n1 = n - n0
        if n0 == 0 or n1 == 0:
            continue
        s1 = s - s0
        # between-class variance is (s0*n1 - s1*n0)^2 / (n0*n1) up to a
        # constant factor; compare as integer cross products
        num = (s0 * n1 - s1 * n0) ** 2
        den = n0 * n1
        if best_t < 0 or num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    if best_t < 0:
        return int(img.min())
    return best_t


def binarize(image, threshold: int | None = 128) -> np.ndarray:
    """Dark-is-foreground thresholding.

    Pixels with intensity <= *threshold* become 1 (dark structures such as
    membranes are the class of interest).  Pass ``threshold=None`` to choose
    the threshold automatically via :func:`otsu_threshold`.
    """

    img = as_gray_image(image)
    if threshold is None:
        t = otsu_threshold(img)
    else:
        t = int(threshold)
        if not 0 <= t <= 255:
            raise ValidationError("fixed threshold must lie in [0, 255]")
    return (img <= t).astype(np.uint8)


def dilate(mask, radius: int) -> np.ndarray:
    """Binary dilation by a disk; out-of-bounds neighbors count as background."""

    m = as_binary_mask(mask)
    return ndimage.binary_dilation(
        m.astype(bool), structure=disk_footprint(radius), border_value=0
    ).astype(np.uint8)


def erode(mask, radius: int) -> np.ndarray:
    """Binary erosion by a disk; out-of-bounds neighbors count as background.

    The background border rule means foreground touching the image edge is
    eaten away, mirroring :func:`dilate`.
    """

    m = as_binary_mask(mask)
    return ndimage.binary_erosion(
        m.astype(bool), structure=disk_footprint(radius), border_value=0
    ).astype(np.uint8)


def close(mask, radius: int) -> np.ndarray:
    """Closing: dilation followed by erosion with the same disk.

    The erosion half of the closing treats out-of-bounds pixels as foreground
    (the adjoint of the dilation actually applied).  That is what makes the
    closing extensive (never deletes an input pixel) and idempotent; eroding
    against a background border would clip every shape touching the image
    edge on each application.  The standalone :func:`erode` keeps the plain
    background border rule.
    """

    m = as_binary_mask(mask).astype(bool)
    fp = disk_footprint(radius)
    grown = ndimage.binary_dilation(m, structure=fp, border_value=0)
    return ndimage.binary_erosion(grown, structure=fp, border_value=1).astype(np.uint8)


def _shifted_neighbors(img: np.ndarray):
    """The eight neighbor planes of a padded copy of *img*."""

    p = np.pad(img, 1)
    n = p[:-2, 1:-1]
    s = p[2:, 1:-1]
    e = p[1:-1, 2:]
    w = p[1:-1, :-2]
    ne = p[:-2, 2:]
    nw = p[:-2, :-2]
    se = p[2:, 2:]
    sw = p[2:, :-2]
    return n, s, e, w, ne, nw, se, sw


def skeletonize(mask) -> np.ndarray:
    """Thin foreground to roughly one-pixel-wide lines.

    Two-subiteration parallel boundary thinning run to a fixed point.  A
    pixel is deleted only when that keeps the local 8-connectivity intact,
    so the result is a subset of the input foreground with the same number
    of 8-connected components.
    """

    img = as_binary_mask(mask).astype(bool)
    while True:
        changed = False
        for sub in (0, 1):
            n, s, e, w, ne, nw, se, sw = _shifted_neighbors(img)
            # number of distinct foreground runs around the pixel; exactly 1
            # means deletion cannot split the neighborhood
            runs = (
                (~e & (ne | n)).astype(np.uint8)
                + (~n & (nw | w)).astype(np.uint8)
                + (~w & (sw | s)).astype(np.uint8)
                + (~s & (se | e)).astype(np.uint8)
            )
            n1 = (
                (e | ne).astype(np.uint8)
                + (n | nw).astype(np.uint8)
                + (w | sw).astype(np.uint8)
                + (s | se).astype(np.uint8)
            )
            n2 = (
                (ne | n).astype(np.uint8)
                + (nw | w).astype(np.uint8)
                + (sw | s).astype(np.uint8)
                + (se | e).astype(np.uint8)
            )
            nmin = np.minimum(n1, n2)
            if sub == 0:
                keep = (ne | n | ~se) & e
            else:
                keep = (sw | s | ~nw) & w
            deletable = img & (runs == 1) & (nmin >= 2) & (nmin <= 3) & ~keep
            if deletable.any():
                img &= ~deletable
                changed = True
        if not changed:
            return img.astype(np.uint8)


def flood_fill(barrier, seed) -> np.ndarray:
    """4-connected fill of the barrier-background pixels reachable from *seed*.

    Returns the component as a foreground mask; barrier pixels are never
    included.  Raises :class:`SeedOnBarrierError` when the click-point lands
    on a barrier pixel.
    """

    b = as_binary_mask(barrier)
    r, c = check_seed(seed, b.shape)
    if b[r, c]:
        raise SeedOnBarrierError((r, c))
    labels, _ = ndimage.label(b == 0, structure=FOUR_CONNECTED)
    return (labels == labels[r, c]).astype(np.uint8)
