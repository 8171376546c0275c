"""Reading and writing rasters (binary PGM, 8-bit grayscale PNG) and seed files.

Masks are stored with foreground = 255 and background = 0; on load any
nonzero pixel maps back to 1.  All writers go through a temp-file-and-rename
so a failed write never leaves a truncated output behind.
"""

from __future__ import annotations

import io as _io
import os
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import IoFailure, ValidationError
from .raster import as_binary_mask, as_gray_image

PGM_EXTENSIONS = {".pgm"}
PNG_EXTENSIONS = {".png"}


def encode_pgm(image) -> bytes:
    """Serialize a grayscale image as binary (P5) PGM."""

    img = as_gray_image(image)
    h, w = img.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    return header + img.tobytes()


def decode_pgm(data: bytes) -> np.ndarray:
    """Parse a binary (P5) PGM, tolerating comments and odd whitespace."""

    if not data.startswith(b"P5"):
        raise ValidationError("not a binary PGM (missing P5 magic)")

    pos = 2
    fields = []

    def _next_token():
        nonlocal pos
        while pos < len(data):
            ch = data[pos : pos + 1]
            if ch == b"#":
                while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValidationError("truncated PGM header")
        return data[start:pos]

    while len(fields) < 3:
        tok = _next_token()
        if not tok.isdigit():
            raise ValidationError(f"bad PGM header token {tok!r}")
        fields.append(int(tok))
    # exactly one whitespace byte separates the header from the pixel data
    pos += 1

    w, h, maxval = fields
    if w < 1 or h < 1:
        raise ValidationError("PGM dimensions must be >= 1")
    if not 0 < maxval < 256:
        raise ValidationError(f"only 8-bit PGM supported, got maxval {maxval}")
    raw = data[pos : pos + w * h]
    if len(raw) != w * h:
        raise ValidationError("PGM pixel data shorter than header promises")
    return np.frombuffer(raw, dtype=np.uint8).reshape(h, w).copy()


def encode_png(image) -> bytes:
    """Serialize a grayscale image as 8-bit PNG."""

    img = as_gray_image(image)
    buf = _io.BytesIO()
    Image.fromarray(img, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> np.ndarray:
    try:
        with Image.open(_io.BytesIO(data)) as im:
            return np.asarray(im.convert("L"), dtype=np.uint8)
    except Exception as exc:
        raise ValidationError(f"could not decode PNG: {exc}") from exc


def decode_image(data: bytes) -> np.ndarray:
    """Decode PGM or PNG bytes, sniffing the format from the magic number."""

    if data[:2] == b"P5":
        return decode_pgm(data)
    return decode_png(data)


def _atomic_write(path, data: bytes) -> None:
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _encode_for(path, image) -> bytes:
    ext = Path(path).suffix.lower()
    if ext in PGM_EXTENSIONS:
        return encode_pgm(image)
    if ext in PNG_EXTENSIONS:
        return encode_png(image)
    raise ValidationError(f"unsupported raster extension {ext!r} (use .pgm or .png)")


def read_image(path) -> np.ndarray:
    """Load a grayscale image from a PGM or PNG file."""

    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return decode_image(data)


def write_image(path, image) -> None:
    """Write a grayscale image; the extension picks the format."""

    _atomic_write(path, _encode_for(path, image))


def read_mask(path) -> np.ndarray:
    """Load a mask; any nonzero pixel becomes 1."""

    return (read_image(path) != 0).astype(np.uint8)


def write_mask(path, mask) -> None:
    """Write a mask with foreground stored as 255."""

    m = as_binary_mask(mask)
    _atomic_write(path, _encode_for(path, m * 255))


def read_seeds(path) -> list[tuple[int, int]]:
    """Parse a click-point file: one "row,col" pair per line.

    Blank lines and lines starting with '#' are skipped.
    """

    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    seeds = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split(",")
        if len(parts) != 2:
            raise ValidationError(f"{path}:{lineno}: expected 'row,col', got {line!r}")
        try:
            seeds.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: non-integer seed {line!r}") from exc
    return seeds


def write_seeds(path, seeds) -> None:
    """Write click-points as one "row,col" pair per line."""

    lines = "".join(f"{int(r)},{int(c)}\n" for r, c in seeds)
    _atomic_write(path, lines.encode("utf-8"))
