"""FastAPI application factory for the annotation service.

All pixel work is delegated to the library modules; this layer owns HTTP
shapes, in-memory sessions, and per-project write serialization.  Previews
are pure compute: they update the working session (seeds, parameters,
cached masks) but never touch the on-disk project until /save.
"""

from __future__ import annotations

import base64
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import Response

from ..errors import IoFailure, SerializationFailure, UnknownImageError, ValidationError
from ..io import decode_image, encode_pgm, encode_png, read_image, write_image, write_mask
from ..store import Project, load_project, save_project, timestamp
from ..weaklabel import FloodFillParams, RegionGrowParams, floodfill_pipeline, region_grow_all
from .schemas import (
    CreateProjectRequest,
    ImageInfo,
    PreviewRequest,
    PreviewResponse,
    ProjectInfo,
    SaveRequest,
    SaveResponse,
    SeedDiagnostic,
    SeedsUpdate,
    SeedsUpdateResponse,
)

DEFAULT_PIXEL_BUDGET = 4_000_000

_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")

_MEDIA = {"png": "image/png", "pgm": "image/x-portable-graymap"}

DOCUMENT_NAME = "project.json"


@dataclass
class _Session:
    """Working state for one open project; mutated only under its lock."""

    project: Project
    directory: Path
    seeds: dict = field(default_factory=dict)
    flood: FloodFillParams = FloodFillParams()
    rg: RegionGrowParams = RegionGrowParams()
    shapes: dict = field(default_factory=dict)
    pending: dict = field(default_factory=dict)  # (image id, method) -> mask
    latest: dict = field(default_factory=dict)  # image id -> most recent preview mask
    dirty: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock)


def _check_id(kind: str, value: str) -> str:
    if not _ID_RE.match(value):
        raise HTTPException(400, f"invalid {kind} {value!r}: use letters, digits, . _ -")
    return value


def create_app(root, default_budget: int = DEFAULT_PIXEL_BUDGET) -> FastAPI:
    """Build the service rooted at *root*; one subdirectory per project."""

    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="clickseg annotation service")
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()

    def get_session(name: str) -> _Session:
        _check_id("project name", name)
        with registry_lock:
            if name in sessions:
                return sessions[name]
        doc = root / name / DOCUMENT_NAME
        if not doc.is_file():
            raise HTTPException(404, f"unknown project {name!r}")
        project = load_project(doc)
        sess = _Session(
            project=project,
            directory=root / name,
            seeds={img: list(pts) for img, pts in project.seeds.items()},
            flood=project.flood_params,
            rg=project.rg_params,
        )
        with registry_lock:
            return sessions.setdefault(name, sess)

    def image_shape(sess: _Session, image_id: str):
        if image_id not in sess.project.images:
            raise UnknownImageError(f"unknown image {image_id!r}")
        if image_id not in sess.shapes:
            sess.shapes[image_id] = read_image(
                sess.directory / sess.project.images[image_id]
            ).shape
        return sess.shapes[image_id]

    def check_seeds(sess: _Session, image_id: str, seeds):
        h, w = image_shape(sess, image_id)
        for k, (r, c) in enumerate(seeds):
            if not (0 <= r < h and 0 <= c < w):
                raise HTTPException(
                    400, f"seed {k} at ({r}, {c}) is outside image {image_id!r} of shape ({h}, {w})"
                )

    @app.get("/projects", response_model=list[ProjectInfo])
    def list_projects():
        for doc in sorted(root.glob(f"*/{DOCUMENT_NAME}")):
            try:
                get_session(doc.parent.name)
            except HTTPException:
                continue
        with registry_lock:
            open_sessions = sorted(sessions.items())
        return [
            ProjectInfo(name=name, image_count=len(s.project.images), dirty=s.dirty)
            for name, s in open_sessions
        ]

    @app.post("/projects", response_model=ProjectInfo, status_code=201)
    def create_project(req: CreateProjectRequest):
        name = _check_id("project name", req.name)
        directory = root / name
        with registry_lock:
            if name in sessions or directory.exists():
                raise HTTPException(409, f"project {name!r} already exists")
            directory.mkdir()
            now = timestamp()
            project = Project(name=name, created=now, modified=now)
            save_project(project, directory / DOCUMENT_NAME)
            sessions[name] = _Session(project=project, directory=directory)
        return ProjectInfo(name=name, image_count=0, dirty=False)

    @app.put("/image/{image_id}", response_model=ImageInfo)
    async def put_image(image_id: str, project: str, request: Request):
        _check_id("image id", image_id)
        sess = get_session(project)
        data = await request.body()
        try:
            img = decode_image(data)
        except ValidationError as exc:
            raise HTTPException(400, f"undecodable image payload: {exc}") from exc
        ext = ".pgm" if data[:2] == b"P5" else ".png"
        filename = image_id + ext
        write_image(sess.directory / filename, img)
        with sess.lock:
            old = sess.project.images.get(image_id)
            if old is not None and old != filename:
                (sess.directory / old).unlink(missing_ok=True)
            sess.project.images[image_id] = filename
            # replacing pixels invalidates everything derived from them
            sess.seeds.pop(image_id, None)
            sess.project.masks.pop(image_id, None)
            sess.latest.pop(image_id, None)
            for key in [k for k in sess.pending if k[0] == image_id]:
                del sess.pending[key]
            sess.shapes[image_id] = img.shape
            sess.dirty = True
        h, w = img.shape
        return ImageInfo(image_id=image_id, path=filename, height=h, width=w)

    @app.get("/image/{image_id}")
    def get_image(image_id: str, project: str):
        sess = get_session(project)
        try:
            image_shape(sess, image_id)
        except UnknownImageError as exc:
            raise HTTPException(404, str(exc)) from exc
        img = read_image(sess.directory / sess.project.images[image_id])
        return Response(content=encode_png(img), media_type="image/png")

    @app.put("/seeds", response_model=SeedsUpdateResponse)
    def put_seeds(req: SeedsUpdate):
        sess = get_session(req.project)
        seeds = [(s.row, s.col) for s in req.seeds]
        try:
            check_seeds(sess, req.image_id, seeds)
        except UnknownImageError as exc:
            raise HTTPException(404, str(exc)) from exc
        with sess.lock:
            sess.seeds[req.image_id] = seeds
            sess.dirty = True
        return SeedsUpdateResponse(image_id=req.image_id, seed_count=len(seeds), dirty=True)

    @app.post("/preview", response_model=PreviewResponse)
    def preview(req: PreviewRequest):
        sess = get_session(req.project)
        seeds = [(s.row, s.col) for s in req.seeds]
        try:
            check_seeds(sess, req.image_id, seeds)
        except UnknownImageError as exc:
            raise HTTPException(404, str(exc)) from exc
        img = read_image(sess.directory / sess.project.images[req.image_id])
        budget = req.max_pixels if req.max_pixels is not None else default_budget
        if req.method == "flood":
            params = req.flood_params.to_domain()
            result = floodfill_pipeline(
                img, seeds, params, leak_ratio=req.leak_ratio, max_pixels=budget
            )
        else:
            params = req.rg_params.to_domain()
            result = region_grow_all(
                img, seeds, params, leak_ratio=req.leak_ratio, max_pixels=budget
            )
        with sess.lock:
            sess.seeds[req.image_id] = seeds
            if req.method == "flood":
                sess.flood = params
            else:
                sess.rg = params
            sess.pending[(req.image_id, req.method)] = result.mask
            sess.latest[req.image_id] = result.mask
            sess.dirty = True
        h, w = result.mask.shape
        return PreviewResponse(
            mask_png_base64=base64.b64encode(encode_png(result.mask * 255)).decode("ascii"),
            diagnostics=[
                SeedDiagnostic(row=r, col=c, status=status.value, region_size=size)
                for ((r, c), size), status in zip(result.per_seed_regions, result.diagnostics)
            ],
            partial=result.truncated,
            height=h,
            width=w,
        )

    @app.post("/save", response_model=SaveResponse)
    def save(req: SaveRequest):
        sess = get_session(req.project)
        with sess.lock:
            try:
                written = []
                for (image_id, method), mask in sorted(sess.pending.items()):
                    filename = f"{image_id}.{method}.png"
                    write_mask(sess.directory / filename, mask)
                    sess.project.masks.setdefault(image_id, {})[method] = filename
                    written.append(filename)
                sess.project.seeds = {img: list(pts) for img, pts in sess.seeds.items()}
                sess.project.flood_params = sess.flood
                sess.project.rg_params = sess.rg
                sess.project.modified = timestamp()
                save_project(sess.project, sess.directory / DOCUMENT_NAME)
            except (IoFailure, SerializationFailure) as exc:
                # session stays dirty; the client may fix the cause and retry
                raise HTTPException(500, f"save failed: {exc}") from exc
            sess.dirty = False
        return SaveResponse(saved=True, document=DOCUMENT_NAME, masks=written)

    @app.get("/export/{filename}")
    def export(filename: str, project: str, method: str | None = None):
        sess = get_session(project)
        image_id, _, ext = filename.rpartition(".")
        if ext not in _MEDIA or not image_id:
            raise HTTPException(400, f"export name must be <image id>.png or .pgm, got {filename!r}")
        if method is not None and method not in ("flood", "rg"):
            raise HTTPException(400, f"unknown method {method!r}")
        try:
            image_shape(sess, image_id)
        except UnknownImageError as exc:
            raise HTTPException(404, str(exc)) from exc
        with sess.lock:
            if method is not None:
                mask = sess.pending.get((image_id, method))
            else:
                mask = sess.latest.get(image_id)
        if mask is None:
            persisted = sess.project.masks.get(image_id, {})
            candidates = [m for m in ("flood", "rg") if method in (None, m) and m in persisted]
            if method is None and len(candidates) > 1:
                raise HTTPException(400, f"image {image_id!r} has several masks; pass ?method=")
            if not candidates:
                raise HTTPException(404, f"no mask computed or saved for image {image_id!r}")
            mask = (read_image(sess.directory / persisted[candidates[0]]) != 0).astype(np.uint8)
        payload = encode_png(mask * 255) if ext == "png" else encode_pgm(mask * 255)
        return Response(content=payload, media_type=_MEDIA[ext])

    return app
