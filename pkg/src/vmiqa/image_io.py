"""Raster image loading, PGM write-back, and opinion-score tables."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, UnidentifiedImageError

from .exceptions import ImageDecodeError, OpinionTableError

# ITU-R BT.601 luma weights
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def rgb_to_luma(rgb):
    """Reduce an ``(..., 3)`` array of [0, 1] channels to luma.

    Written as ``G + wr*(R-G) + wb*(B-G)`` so a gray pixel ``(v, v, v)``
    maps to ``v`` exactly.
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    wr, _, wb = LUMA_WEIGHTS
    return g + wr * (r - g) + wb * (b - g)


def _to_unit_array(img):
    mode = img.mode
    if mode in ("1", "L", "P", "LA", "PA", "RGB", "RGBA", "CMYK", "YCbCr"):
        if mode in ("1", "L"):
            return np.asarray(img.convert("L"), dtype=np.float64) / 255.0
        if mode == "LA":
            return np.asarray(img.getchannel("L"), dtype=np.float64) / 255.0
        rgb = np.asarray(img.convert("RGB"), dtype=np.float64) / 255.0
        return rgb_to_luma(rgb)
    if mode.startswith("I;16") or mode == "I":
        arr = np.asarray(img, dtype=np.float64)
        maxval = 65535.0 if arr.max(initial=0) > 255 or mode.startswith("I;16") else 255.0
        return arr / maxval
    if mode == "F":
        return np.asarray(img, dtype=np.float64)
    raise ImageDecodeError(f"unsupported image mode {mode!r}")


def load_image(path):
    """Load a raster image as a 2-D float64 luminance array in [0, 1].

    BMP, PNG and PGM/PPM are supported (anything Pillow decodes, in
    practice). Color inputs are reduced to BT.601 luma.

    Raises
    ------
    OSError
        The file cannot be read.
    ImageDecodeError
        The file is not a decodable raster image.
    """
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(f"no such image file: {path}")
    try:
        with Image.open(path) as img:
            img.load()
            arr = _to_unit_array(img)
    except (UnidentifiedImageError, SyntaxError) as exc:
        raise ImageDecodeError(f"cannot decode {path}: {exc}") from exc
    except OSError as exc:
        # Pillow signals truncated/corrupt data with plain OSError
        raise ImageDecodeError(f"cannot decode {path}: {exc}") from exc
    if arr.ndim != 2 or arr.size == 0:
        raise ImageDecodeError(f"{path} decoded to an empty or non-2-D image")
    if not np.all(np.isfinite(arr)):
        raise ImageDecodeError(f"{path} contains non-finite samples")
    return np.clip(arr, 0.0, 1.0)


def to_uint8(image):
    """Quantize a [0, 1] image to 8 bits (round half up)."""
    image = np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0)
    return np.floor(image * 255.0 + 0.5).astype(np.uint8)


def write_pgm(image, path):
    """Write an image as binary PGM (P5, maxval 255)."""
    data = to_uint8(image)
    height, width = data.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(data.tobytes())


@dataclass
class OpinionTable:
    """Ordered (identifier, score) pairs with unique identifiers."""

    entries: list = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for ident, score in self.entries:
            if ident in seen:
                raise OpinionTableError(f"duplicate identifier {ident!r}")
            if not np.isfinite(score):
                raise OpinionTableError(f"non-finite score for {ident!r}")
            seen.add(ident)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def identifiers(self):
        return [ident for ident, _ in self.entries]

    @property
    def scores(self):
        return np.array([score for _, score in self.entries], dtype=np.float64)

    def as_dict(self):
        return dict(self.entries)

    def lookup(self, identifier):
        """Score for ``identifier``; falls back to a basename match."""
        table = self.as_dict()
        if identifier in table:
            return table[identifier]
        base = os.path.basename(identifier)
        if base in table:
            return table[base]
        lowered = {k.lower(): v for k, v in table.items()}
        if base.lower() in lowered:
            return lowered[base.lower()]
        raise KeyError(identifier)


_SPLIT = re.compile(r"[,\s]+")


def load_opinion_table(path, *, order="id-score", names=None):
    """Parse an opinion-score table.

    Each non-empty line holds an identifier and a score separated by
    whitespace or a comma. Lines starting with ``#`` are skipped.

    Parameters
    ----------
    path : path-like
        Table file.
    order : {"id-score", "score-id"}, default="id-score"
        Column order. TID2008's ``mos_with_names.txt`` is ``score-id``.
    names : path-like, optional
        Sidecar listing with one identifier per line. When given, ``path``
        must hold exactly one score per line and row ``i`` is paired with
        the ``i``-th name.
    """
    if order not in ("id-score", "score-id"):
        raise ValueError(f"order must be 'id-score' or 'score-id', got {order!r}")
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    sidecar = None
    if names is not None:
        with open(names, encoding="utf-8") as fh:
            sidecar = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]

    entries = []
    seen = set()
    row = 0
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        tokens = [t for t in _SPLIT.split(text) if t]
        if sidecar is not None:
            if len(tokens) != 1:
                raise OpinionTableError(f"{path}:{lineno}: expected a single score, got {text!r}")
            if row >= len(sidecar):
                raise OpinionTableError(f"{path}:{lineno}: more scores than names in {names}")
            ident, raw = sidecar[row], tokens[0]
        else:
            if len(tokens) != 2:
                raise OpinionTableError(
                    f"{path}:{lineno}: expected identifier and score, got {text!r}"
                )
            ident, raw = tokens if order == "id-score" else tokens[::-1]
        row += 1
        try:
            score = float(raw)
        except ValueError:
            raise OpinionTableError(f"{path}:{lineno}: score {raw!r} is not a number") from None
        if not np.isfinite(score):
            raise OpinionTableError(f"{path}:{lineno}: score {raw!r} is not finite")
        if ident in seen:
            raise OpinionTableError(f"{path}:{lineno}: duplicate identifier {ident!r}")
        seen.add(ident)
        entries.append((ident, score))
    if sidecar is not None and row != len(sidecar):
        raise OpinionTableError(f"{path}: {row} scores for {len(sidecar)} names in {names}")
    return OpinionTable(entries)
