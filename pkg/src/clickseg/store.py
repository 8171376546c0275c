"""Annotation project persistence.

A project is one JSON document plus sibling raster files; the document
stores only relative paths.  Serialization is canonical (sorted keys,
two-space indent, trailing newline) so saving an unmodified project twice
produces byte-identical files, and writes go through a temp-and-rename so a
failed save never leaves a torn document behind.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import (
    IoFailure,
    SchemaViolation,
    SerializationFailure,
    StaleReference,
    ValidationError,
)
from .io import _atomic_write, read_image
from .weaklabel import FloodFillParams, RegionGrowParams

SCHEMA_VERSION = 1

METHODS = ("flood", "rg")


def timestamp() -> str:
    """UTC wall-clock time as a second-resolution ISO string."""

    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class Project:
    """Images, click-points, parameters, and generated masks for one dataset.

    ``images`` maps image id to a path relative to the project document;
    ``seeds`` maps image id to (row, col) tuples; ``masks`` maps image id to
    {method: relative path} with method one of "flood" or "rg".
    """

    name: str
    images: dict = field(default_factory=dict)
    seeds: dict = field(default_factory=dict)
    flood_params: FloodFillParams = FloodFillParams()
    rg_params: RegionGrowParams = RegionGrowParams()
    masks: dict = field(default_factory=dict)
    created: str = ""
    modified: str = ""

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise ValidationError("project name must be a nonempty string")


def _document(p: Project) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "name": p.name,
        "created": p.created,
        "modified": p.modified,
        "images": dict(p.images),
        "seeds": {
            img: [{"row": r, "col": c} for r, c in pts] for img, pts in p.seeds.items()
        },
        "flood_params": {
            "threshold": p.flood_params.threshold,
            "closing_radius": p.flood_params.closing_radius,
        },
        "rg_params": {"stop_threshold": p.rg_params.stop_threshold},
        "masks": {img: dict(per) for img, per in p.masks.items()},
    }


def save_project(p: Project, path) -> None:
    """Write the project document atomically in canonical form.

    Rasters are not written here: images and masks live as sibling files
    owned by whoever produced them, and the document only references them.
    """

    try:
        text = json.dumps(_document(p), sort_keys=True, indent=2) + "\n"
    except (TypeError, ValueError) as exc:
        raise SerializationFailure(f"project {p.name} is not serializable: {exc}") from exc
    _atomic_write(path, text.encode("utf-8"))


def _fail(name, expected, value):
    raise SchemaViolation(f"{name}: expected {expected}, got {type(value).__name__}")


def _plain_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _str_dict(doc, name):
    d = doc.get(name)
    if not isinstance(d, dict):
        _fail(name, "object", d)
    for k, v in d.items():
        if not isinstance(v, str):
            _fail(f"{name}.{k}", "string", v)
    return d


def _parse_seeds(raw, images):
    seeds = {}
    for img, pts in raw.items():
        if img not in images:
            raise SchemaViolation(f"seeds.{img}: unknown image id")
        if not isinstance(pts, list):
            _fail(f"seeds.{img}", "array", pts)
        out = []
        for k, pt in enumerate(pts):
            if (
                not isinstance(pt, dict)
                or not _plain_int(pt.get("row"))
                or not _plain_int(pt.get("col"))
            ):
                raise SchemaViolation(f"seeds.{img}[{k}]: expected {{row, col}} integers")
            out.append((pt["row"], pt["col"]))
        seeds[img] = out
    return seeds


def _parse_params(doc):
    fp = doc.get("flood_params")
    rp = doc.get("rg_params")
    if not isinstance(fp, dict):
        _fail("flood_params", "object", fp)
    if not isinstance(rp, dict):
        _fail("rg_params", "object", rp)
    thr = fp.get("threshold")
    if thr is not None and not _plain_int(thr):
        _fail("flood_params.threshold", "integer or null", thr)
    if not _plain_int(fp.get("closing_radius")):
        _fail("flood_params.closing_radius", "integer", fp.get("closing_radius"))
    stop = rp.get("stop_threshold")
    if not isinstance(stop, (int, float)) or isinstance(stop, bool):
        _fail("rg_params.stop_threshold", "number", stop)
    try:
        if thr is not None and not 0 <= thr <= 255:
            raise ValidationError("threshold out of [0, 255]")
        flood = FloodFillParams(threshold=thr, closing_radius=fp["closing_radius"])
        rg = RegionGrowParams(stop_threshold=float(stop))
    except ValidationError as exc:
        raise SchemaViolation(f"params: {exc}") from exc
    return flood, rg


def load_project(path) -> Project:
    """Read, parse, and fully validate a project document.

    Every referenced raster is opened: missing files raise StaleReference
    naming the path, out-of-bounds seeds and mask/image size disagreements
    raise SchemaViolation naming the field.
    """

    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise SchemaViolation(f"not a valid project document: {exc}") from exc
    if not isinstance(doc, dict):
        _fail("document", "object", doc)

    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaViolation(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        _fail("name", "nonempty string", name)
    for fld in ("created", "modified"):
        if not isinstance(doc.get(fld), str):
            _fail(fld, "string", doc.get(fld))

    images = _str_dict(doc, "images")
    raw_seeds = doc.get("seeds")
    if not isinstance(raw_seeds, dict):
        _fail("seeds", "object", raw_seeds)
    seeds = _parse_seeds(raw_seeds, images)
    flood, rg = _parse_params(doc)

    raw_masks = doc.get("masks")
    if not isinstance(raw_masks, dict):
        _fail("masks", "object", raw_masks)
    masks = {}
    for img, per in raw_masks.items():
        if img not in images:
            raise SchemaViolation(f"masks.{img}: unknown image id")
        if not isinstance(per, dict):
            _fail(f"masks.{img}", "object", per)
        for method, rel in per.items():
            if method not in METHODS:
                raise SchemaViolation(f"masks.{img}.{method}: unknown method")
            if not isinstance(rel, str):
                _fail(f"masks.{img}.{method}", "string", rel)
        masks[img] = dict(per)

    base = os.path.dirname(os.path.abspath(path))
    shapes = {}
    for img, rel in sorted(images.items()):
        full = os.path.join(base, rel)
        if not os.path.isfile(full):
            raise StaleReference(f"images.{img}: missing raster file {full}")
        try:
            shapes[img] = read_image(full).shape
        except ValidationError as exc:
            raise SchemaViolation(f"images.{img}: {exc}") from exc
    for img, pts in seeds.items():
        h, w = shapes[img]
        for k, (r, c) in enumerate(pts):
            if not (0 <= r < h and 0 <= c < w):
                raise SchemaViolation(
                    f"seeds.{img}[{k}]: ({r}, {c}) outside image of shape ({h}, {w})"
                )
    for img, per in sorted(masks.items()):
        for method, rel in sorted(per.items()):
            full = os.path.join(base, rel)
            if not os.path.isfile(full):
                raise StaleReference(f"masks.{img}.{method}: missing raster file {full}")
            try:
                shape = read_image(full).shape
            except ValidationError as exc:
                raise SchemaViolation(f"masks.{img}.{method}: {exc}") from exc
            if shape != shapes[img]:
                raise SchemaViolation(
                    f"masks.{img}.{method}: shape {shape} does not match image {shapes[img]}"
                )

    return Project(
        name=name,
        images=dict(images),
        seeds=seeds,
        flood_params=flood,
        rg_params=rg,
        masks=masks,
        created=doc["created"],
        modified=doc["modified"],
    )
