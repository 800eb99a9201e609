"""Command-line entry point: ``gtvpix {zoom,vectorize,render-gradient}``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .debug import emit_debug
from .gtv import optimize_gtv
from .image_core import DimensionError, ImageFormatError, NormConfig, load_image, save_image
from .triangulation import trivial_triangulation
from .vectorizer import emit_svg, render_triangle_gradients, vectorize
from .zoom import FaceClassError, ZoomConfig, zoom_pipeline

EXIT_USAGE = 1
EXIT_PROCESSING = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ranged(kind, lo=None, hi=None, lo_open=False):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {kind.__name__} value: {text!r}")
        if lo is not None and (v < lo or (lo_open and v == lo)):
            raise argparse.ArgumentTypeError(f"{v} out of range (must be {'>' if lo_open else '>='} {lo})")
        if hi is not None and v > hi:
            raise argparse.ArgumentTypeError(f"{v} out of range (must be <= {hi})")
        return v

    return parse


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = _Parser(prog="gtvpix", description="Vectorize or zoom images via geometric total variation.",
                     formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    common = argparse.ArgumentParser(add_help=False, formatter_class=fmt)
    common.add_argument("input", help="input PNG, PPM (P6) or PGM (P5)")
    common.add_argument("--seed", type=int, default=0, help="seed for energy-neutral flip decisions")
    common.add_argument("-p", "--norm-exponent", type=_ranged(float, 1.0, 2.0), default=1.0,
                        help="exponent p applied to triangle gradient norms, in [1, 2]")
    common.add_argument("--max-passes", type=_ranged(int, 1), default=100, help="cap on optimizer passes")
    common.add_argument("--dump-mesh", metavar="OBJ", help="write the optimized triangulation")
    common.add_argument("--dump-energy", metavar="CSV", help="write the per-pass energy log")

    contour = argparse.ArgumentParser(add_help=False, formatter_class=fmt)
    contour.add_argument("--epsilon", type=_ranged(float, 0.0, lo_open=True), default=1e-3,
                         help="contour regularization stopping threshold")
    contour.add_argument("--max-reg-iters", type=_ranged(int, 1), default=100,
                         help="cap on contour regularization iterations")
    contour.add_argument("--dump-contours", metavar="SVG", help="write the contour mesh")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zoom", parents=[common, contour], formatter_class=fmt,
                       help="raster zoom with smooth discontinuities")
    z.add_argument("-o", "--output", required=True, help="output PNG")
    z.add_argument("-z", "--zoom", type=_ranged(int, 1), default=4, help="integer zoom factor")
    z.add_argument("-b", "--beta", type=_ranged(float, 0.0, 1.0), default=0.75, help="crispness in [0, 1]")
    z.add_argument("--dump-masks", metavar="PREFIX", help="write PREFIX_S.png and PREFIX_D.png")

    v = sub.add_parser("vectorize", parents=[common, contour], formatter_class=fmt,
                       help="SVG of merged contour-mesh regions")
    v.add_argument("-o", "--output", "--output-svg", dest="output", required=True, help="output SVG")
    v.add_argument("--scale", type=_ranged(float, 0.0, lo_open=True), default=1.0,
                   help="SVG user units per source pixel")
    v.add_argument("--merge-tolerance", type=_ranged(float, 0.0), default=0.0,
                   help="max channel difference for merging (0 = exact 8-bit equality)")
    v.add_argument("--include-border", action="store_true", help="also emit cells of border pixels")

    r = sub.add_parser("render-gradient", parents=[common], formatter_class=fmt,
                       help="paint triangles with linear or crisped gradients")
    r.add_argument("-o", "--output", required=True, help="output PNG")
    r.add_argument("-z", "--zoom", type=_ranged(int, 1), default=4, help="integer zoom factor")
    r.add_argument("--mode", choices=("linear", "crisp"), default="linear")
    r.add_argument("--steepness", type=_ranged(float, 0.0, lo_open=True), default=8.0,
                   help="contrast steepness for crisp mode")
    r.add_argument("--no-optimize", action="store_true", help="use the trivial triangulation")
    return parser


def _run(args) -> None:
    img = load_image(args.input)
    norm = NormConfig(args.norm_exponent)

    buffers = None
    if args.command == "zoom":
        res = zoom_pipeline(img, ZoomConfig(args.zoom, args.beta), args.seed, args.epsilon, norm,
                            args.max_passes, args.max_reg_iters)
        save_image(res.image, args.output)
        opt, cs, buffers = res.optimization, res.contours, res.buffers
    elif args.command == "vectorize":
        res = vectorize(img, norm, args.seed, args.epsilon, args.max_passes, args.max_reg_iters,
                        args.merge_tolerance, args.include_border)
        emit_svg(res.document, args.scale, args.output)
        opt, cs = res.optimization, res.contours
    else:
        opt = None if args.no_optimize else optimize_gtv(img, norm, seed=args.seed, max_passes=args.max_passes)
        cs = None
    t = opt.triangulation if opt is not None else trivial_triangulation(img.width, img.height)
    if args.command == "render-gradient":
        save_image(render_triangle_gradients(img, t, args.zoom, args.mode, args.steepness), args.output)

    emit_debug(img, t, opt, cs, buffers, mesh=args.dump_mesh, energy=args.dump_energy,
               contours=getattr(args, "dump_contours", None), masks=getattr(args, "dump_masks", None))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        _run(args)
    except (OSError, ImageFormatError, DimensionError, FaceClassError, ValueError) as exc:
        print(f"gtvpix: error: {exc}", file=sys.stderr)
        return EXIT_PROCESSING
    return 0


if __name__ == "__main__":
    sys.exit(main())
