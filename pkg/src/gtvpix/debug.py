"""Writers for the optional debug dumps of a run."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .contours import ContourState
from .gtv import OptimizeResult
from .image_core import Image, atomic_write_text, save_image
from .triangulation import Triangulation
from .vectorizer import contour_mesh_svg
from .zoom import ZoomBuffers


def write_mesh_obj(t: Triangulation, path) -> None:
    atomic_write_text(path, t.to_obj())


def write_energy_csv(opt: OptimizeResult, path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["pass", "energy", "decreasing_flips", "neutral_flips"])
    for rec in opt.passes:
        writer.writerow([rec.index, f"{rec.energy:.12g}", rec.decreasing_flips, rec.neutral_flips])
    atomic_write_text(path, buf.getvalue())


def write_contour_svg(t: Triangulation, cs: ContourState, img: Image, path, scale: float = 16.0) -> None:
    atomic_write_text(path, contour_mesh_svg(t, cs, img, scale))


def mask_paths(prefix) -> tuple[Path, Path]:
    prefix = str(prefix)
    return Path(prefix + "_S.png"), Path(prefix + "_D.png")


def write_masks(buf: ZoomBuffers, prefix) -> tuple[Path, Path]:
    """S pixels in blue and D pixels in red, each on white."""
    s_path, d_path = mask_paths(prefix)
    for mask, color, path in ((buf.S, (0.0, 0.0, 1.0), s_path), (buf.D, (1.0, 0.0, 0.0), d_path)):
        rgb = np.ones(mask.shape + (3,))
        rgb[mask] = color
        save_image(Image(rgb), path)
    return s_path, d_path


def emit_debug(img: Image, t: Triangulation, opt=None, cs=None, buffers=None,
               mesh=None, energy=None, contours=None, masks=None) -> list[Path]:
    """Write every requested dump whose source data is available; return the paths written."""
    written = []
    if mesh:
        write_mesh_obj(t, mesh)
        written.append(Path(mesh))
    if energy and opt is not None:
        write_energy_csv(opt, energy)
        written.append(Path(energy))
    if contours and cs is not None:
        write_contour_svg(t, cs, img, contours)
        written.append(Path(contours))
    if masks and buffers is not None:
        written.extend(write_masks(buffers, masks))
    return written
