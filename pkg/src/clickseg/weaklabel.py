"""Click-point to mask pipelines: barrier flood fill and seeded region growing.

Both pipelines are deterministic: ties between equally good candidate pixels
always resolve to the smallest (row, col), and all similarity comparisons are
done in exact arithmetic so results never depend on float rounding.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right, insort
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np
from scipy import ndimage

from .errors import ValidationError
from .raster import (
    FOUR_CONNECTED,
    as_gray_image,
    binarize,
    check_seed,
    close,
    skeletonize,
)

DEFAULT_LEAK_RATIO = 0.1


class SeedStatus(str, Enum):
    """Per-seed outcome of a weak-label pipeline."""

    FILLED_OK = "filled_ok"
    SEED_ON_BARRIER = "seed_on_barrier"
    SUSPECT_LEAK = "suspect_leak"


@dataclass(frozen=True)
class FloodFillParams:
    """Barrier construction parameters for the flood-fill pipeline.

    ``threshold`` is a fixed binarization threshold in [0, 255], or None to
    pick one automatically.  ``closing_radius`` is the disk radius used to
    seal small gaps in the skeletonized barrier.
    """

    threshold: int | None = 128
    closing_radius: int = 1

    def __post_init__(self):
        if self.closing_radius < 0:
            raise ValidationError("closing_radius must be >= 0")


@dataclass(frozen=True)
class RegionGrowParams:
    """Stop criterion for seeded region growing.

    Growth stops once the smallest |intensity - region mean| among candidate
    neighbors is strictly larger than ``stop_threshold``; equality keeps
    growing.
    """

    stop_threshold: float = 10.0

    def __post_init__(self):
        if self.stop_threshold < 0:
            raise ValidationError("stop_threshold must be >= 0")


@dataclass(eq=False)
class WeakLabelResult:
    """Union mask plus per-seed bookkeeping.

    ``per_seed_regions`` holds (seed, pixel count) in input order and
    ``diagnostics`` the matching :class:`SeedStatus` flags.  ``truncated`` is
    set when any seed's region was cut short by a pixel budget.
    """

    mask: np.ndarray
    per_seed_regions: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    truncated: bool = False


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # value as printed, not the binary expansion of the double
        return Fraction(str(x))
    return Fraction(x)


def _bfs_fill_limited(barrier: np.ndarray, seed, limit: int) -> np.ndarray:
    """First *limit* pixels of the 4-connected fill, in FIFO order from seed."""

    h, w = barrier.shape
    out = np.zeros((h, w), np.uint8)
    r0, c0 = seed
    out[r0, c0] = 1
    taken = 1
    queue = deque([(r0, c0)])
    while queue and taken < limit:
        r, c = queue.popleft()
        for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= rr < h and 0 <= cc < w and not barrier[rr, cc] and not out[rr, cc]:
                out[rr, cc] = 1
                taken += 1
                queue.append((rr, cc))
                if taken >= limit:
                    break
    return out


def compute_barrier(image, params: FloodFillParams) -> np.ndarray:
    """Binarize, skeletonize, then close: the barrier the fill cannot cross."""

    return close(skeletonize(binarize(image, params.threshold)), params.closing_radius)


def floodfill_pipeline(
    image,
    seeds,
    params: FloodFillParams = FloodFillParams(),
    *,
    leak_ratio: float = DEFAULT_LEAK_RATIO,
    max_pixels: int | None = None,
) -> WeakLabelResult:
    """Flood-fill every seed against the barrier built from *image*.

    Seeds landing on a barrier pixel are flagged, not fatal, and contribute
    no pixels.  A fill covering more than ``leak_ratio`` of the image area is
    flagged as a suspected leak.  ``max_pixels`` optionally truncates each
    seed's fill (breadth-first from the seed) and sets ``truncated``.
    """

    img = as_gray_image(image)
    seeds = [check_seed(s, img.shape) for s in seeds]

    barrier = compute_barrier(img, params)
    labels, _ = ndimage.label(barrier == 0, structure=FOUR_CONNECTED)
    sizes = np.bincount(labels.ravel())
    leak_limit = leak_ratio * img.size

    mask = np.zeros(img.shape, np.uint8)
    regions = []
    flags = []
    truncated = False
    for seed in seeds:
        r, c = seed
        if barrier[r, c]:
            regions.append((seed, 0))
            flags.append(SeedStatus.SEED_ON_BARRIER)
            continue
        lab = labels[r, c]
        size = int(sizes[lab])
        if max_pixels is not None and size > max_pixels:
            region = _bfs_fill_limited(barrier, seed, max_pixels)
            taken = int(region.sum())
            truncated = True
        else:
            region = (labels == lab).astype(np.uint8)
            taken = size
        mask |= region
        regions.append((seed, taken))
        # leak suspicion is judged on the full component, even when truncated
        flags.append(SeedStatus.SUSPECT_LEAK if size > leak_limit else SeedStatus.FILLED_OK)
    return WeakLabelResult(mask=mask, per_seed_regions=regions, diagnostics=flags, truncated=truncated)


def _grow(img: np.ndarray, seed, thr: Fraction, max_pixels: int | None):
    """Exact-arithmetic region growing; returns (mask, truncated).

    The comparison |v - s/n| for a candidate intensity v against the region
    mean s/n is carried out on integers as |v*n - s|, and the stop test
    d/n > p/q as d*q > p*n, so the grown region is bit-identical to a naive
    rational-arithmetic simulation.  Candidates live in one min-heap of
    (row, col) per intensity value; the best value is whichever occupied
    intensity brackets the current mean most closely.
    """

    h, w = img.shape
    p, q = thr.numerator, thr.denominator
    in_region = np.zeros((h, w), bool)
    in_frontier = np.zeros((h, w), bool)
    buckets = [[] for _ in range(256)]
    occupied = []  # sorted intensities with a nonempty bucket

    def push(r, c):
        if 0 <= r < h and 0 <= c < w and not in_region[r, c] and not in_frontier[r, c]:
            in_frontier[r, c] = True
            v = int(img[r, c])
            if not buckets[v]:
                insort(occupied, v)
            heapq.heappush(buckets[v], (r, c))

    def best():
        # nearest occupied intensity on each side of the mean s/n; a diff tie
        # between the two sides resolves by the smaller (row, col) head
        x = s // n
        i = bisect_right(occupied, x)
        choices = []
        if i > 0:
            v = occupied[i - 1]
            choices.append((s - v * n, buckets[v][0], v))
        if i < len(occupied):
            v = occupied[i]
            choices.append((v * n - s, buckets[v][0], v))
        return min(choices)

    r0, c0 = seed
    in_region[r0, c0] = True
    s = int(img[r0, c0])
    n = 1
    for rr, cc in ((r0 - 1, c0), (r0 + 1, c0), (r0, c0 - 1), (r0, c0 + 1)):
        push(rr, cc)

    while occupied:
        if max_pixels is not None and n >= max_pixels:
            diff, _, _ = best()
            return in_region.astype(np.uint8), diff * q <= p * n
        diff, _, v = best()
        if diff * q > p * n:
            break
        r, c = heapq.heappop(buckets[v])
        if not buckets[v]:
            occupied.remove(v)
        in_frontier[r, c] = False
        in_region[r, c] = True
        s += v
        n += 1
        for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            push(rr, cc)
    return in_region.astype(np.uint8), False


def region_grow(
    image,
    seed,
    params: RegionGrowParams = RegionGrowParams(),
    *,
    max_pixels: int | None = None,
) -> np.ndarray:
    """Grow a region from *seed*, one most-similar 4-neighbor pixel at a time.

    Each iteration measures every candidate (a pixel outside the region with
    a 4-neighbor inside it) by |intensity - region mean|, absorbs the single
    best candidate (ties: smallest row, then col), and recomputes the mean.
    Growth stops when the best difference exceeds ``params.stop_threshold``
    strictly, the frontier empties, or ``max_pixels`` is reached.
    """

    img = as_gray_image(image)
    seed = check_seed(seed, img.shape)
    if max_pixels is not None and max_pixels < 1:
        raise ValidationError("max_pixels must be >= 1")
    mask, _ = _grow(img, seed, _to_fraction(params.stop_threshold), max_pixels)
    return mask


def region_grow_all(
    image,
    seeds,
    params: RegionGrowParams = RegionGrowParams(),
    *,
    leak_ratio: float = DEFAULT_LEAK_RATIO,
    max_pixels: int | None = None,
) -> WeakLabelResult:
    """Run :func:`region_grow` per seed independently and union the masks.

    Overlapping regions merge in the mask; per-seed pixel counts are reported
    before the union.  The same area-ratio leak heuristic as the flood-fill
    pipeline applies to each region.
    """

    img = as_gray_image(image)
    seeds = [check_seed(s, img.shape) for s in seeds]
    if max_pixels is not None and max_pixels < 1:
        raise ValidationError("max_pixels must be >= 1")
    thr = _to_fraction(params.stop_threshold)
    leak_limit = leak_ratio * img.size

    mask = np.zeros(img.shape, np.uint8)
    regions = []
    flags = []
    truncated = False
    for seed in seeds:
        region, cut = _grow(img, seed, thr, max_pixels)
        truncated = truncated or cut
        count = int(region.sum())
        mask |= region
        regions.append((seed, count))
        flags.append(SeedStatus.SUSPECT_LEAK if count > leak_limit else SeedStatus.FILLED_OK)
    return WeakLabelResult(mask=mask, per_seed_regions=regions, diagnostics=flags, truncated=truncated)
