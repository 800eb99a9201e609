"""Image container with 8-bit file I/O.

Images are stored as float64 arrays of shape ``(height, width, channels)``
with channel values in ``[0, 1]``. Pixel ``(x, y)`` is column ``x``, row ``y``.
"""

from __future__ import annotations

import math
import os
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PILImage


class ImageFormatError(ValueError):
    """Raised for files that are not 8-bit PNG, PPM (P6) or PGM (P5)."""


class DimensionError(ValueError):
    """Raised when an image is smaller than 2x2."""


@dataclass(frozen=True)
class NormConfig:
    """Exponent ``p`` applied to per-triangle gradient norms (``1 <= p <= 2``)."""

    p: float = 1.0

    def __post_init__(self):
        if not 1.0 <= self.p <= 2.0:
            raise ValueError(f"norm exponent must lie in [1, 2], got {self.p}")


class Image:
    """Lattice-sampled color image with channels in [0, 1]."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[2] not in (1, 3):
            raise ValueError(f"expected (h, w, 1|3) array, got shape {arr.shape}")
        h, w = arr.shape[:2]
        if w < 2 or h < 2:
            raise DimensionError(f"image must be at least 2x2, got {w}x{h}")
        if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
            raise ValueError("channel values must lie in [0, 1]")
        arr = arr.copy()
        arr.setflags(write=False)
        self.data = arr

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def at(self, x: int, y: int) -> np.ndarray:
        return self.data[y, x]

    def to_bytes(self) -> np.ndarray:
        """Quantize to uint8 with round-half-up."""
        return quantize(self.data)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.data.shape == other.data.shape and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"Image({self.width}x{self.height}, channels={self.channels})"

    @classmethod
    def from_bytes(cls, arr) -> "Image":
        arr = np.asarray(arr)
        return cls(arr.astype(np.float64) / 255.0)


def quantize(values) -> np.ndarray:
    return np.floor(np.asarray(values, dtype=np.float64) * 255.0 + 0.5).clip(0, 255).astype(np.uint8)


def color_norm(diff) -> float:
    """Euclidean norm of a color difference across all channels."""
    return math.sqrt(float(np.dot(np.ravel(diff), np.ravel(diff))))


def load_image(path) -> Image:
    path = Path(path)
    try:
        pil = PILImage.open(path)
        pil.load()
    except FileNotFoundError:
        raise
    except PILImage.UnidentifiedImageError as exc:
        raise ImageFormatError(f"{path}: unrecognized image format") from exc
    if pil.format not in ("PNG", "PPM"):
        raise ImageFormatError(f"{path}: unsupported format {pil.format}")

    mode = pil.mode
    if mode in ("I;16", "I;16B", "I;16L", "I", "F"):
        raise ImageFormatError(f"{path}: only 8-bit images are supported (mode {mode})")
    if mode in ("RGBA", "LA", "PA") or (mode == "P" and "transparency" in pil.info):
        warnings.warn(f"{path}: alpha channel ignored", stacklevel=2)
    if mode in ("L", "LA", "1"):
        pil = pil.convert("L")
    else:
        pil = pil.convert("RGB")
    return Image.from_bytes(np.asarray(pil))


def _atomic_write(path: Path, write):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    os.close(fd)
    try:
        write(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def save_image(img: Image, path) -> None:
    """Write ``img`` as an 8-bit PNG (grayscale stays single channel)."""
    arr = img.to_bytes()
    pil = PILImage.fromarray(arr[:, :, 0], "L") if img.channels == 1 else PILImage.fromarray(arr, "RGB")
    _atomic_write(Path(path), lambda tmp: pil.save(tmp, format="PNG"))


def atomic_write_text(path, text: str) -> None:
    def write(tmp):
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)

    _atomic_write(Path(path), write)
