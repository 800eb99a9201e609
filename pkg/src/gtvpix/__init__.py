"""Image vectorization and zooming by geometric total variation minimization."""

__version__ = "0.1.0"

from .contours import ContourState, regularize_contours
from .gtv import gtv_energy, optimize_gtv
from .image_core import Image, NormConfig, load_image, save_image
from .triangulation import Triangulation, trivial_triangulation
from .vectorizer import render_triangle_gradients, vectorize
from .zoom import ZoomConfig, zoom_image

__all__ = [
    "ContourState",
    "Image",
    "NormConfig",
    "Triangulation",
    "ZoomConfig",
    "gtv_energy",
    "load_image",
    "optimize_gtv",
    "regularize_contours",
    "render_triangle_gradients",
    "save_image",
    "trivial_triangulation",
    "vectorize",
    "zoom_image",
]
