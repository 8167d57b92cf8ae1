"""Command line front end: generate clouds, compute barcodes, compute lifebars.

Exit codes: 0 on success, 2 on bad input, 3 when the weak star condition did
not converge within the subdivision cap.  Verbosity comes from the
SWBUNDLE_LOG environment variable (debug / info / warning).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import datasets
from .bundle import (
    SubdivisionLimitError,
    build_bundle_filtration,
    lifebar,
    rips_index_bound,
)
from .projective import triangulate_rp
from .render import barcode_svg, barcode_text, lifebar_svg, lifebar_text
from .simplicial import rips_filtration
from .z2 import barcode

log = logging.getLogger("swbundle")

EXIT_BAD_INPUT = 2
EXIT_SUBDIVISION_LIMIT = 3

_DATASET_ALIASES = {
    "circle-normal": "circle_normal",
    "circle-tautological": "circle_tautological",
    "mobius": "circle_tautological",
    "torus": "torus_normal",
    "klein": "klein_normal",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swbundle",
        description="Persistent first Stiefel-Whitney classes of line-bundle point clouds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a generated cloud to a JSON file")
    gen.add_argument("--dataset", required=True, choices=sorted(_DATASET_ALIASES))
    gen.add_argument("--count", type=int, required=True, help="points (or grid rows)")
    gen.add_argument("--count-v", type=int, default=None, help="grid columns for surfaces")
    gen.add_argument("--gamma", type=float, default=1.0)
    gen.add_argument("--noise", type=float, default=0.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", required=True)

    bar = sub.add_parser("barcode", help="persistence barcode of a cloud's flag filtration")
    bar.add_argument("--input", required=True)
    bar.add_argument("--max-edge", type=float, default=None,
                     help="largest filtration value (default: the bundle index bound)")
    bar.add_argument("--max-dim", type=int, default=1, help="largest reported dimension")
    bar.add_argument("--output", required=True)
    bar.add_argument("--render", choices=("svg", "text", "json"), default="svg")
    bar.add_argument("--render-output", default=None)

    life = sub.add_parser("lifebar", help="lifebar of the first persistent class")
    life.add_argument("--input", required=True)
    life.add_argument("--resolution", type=float, default=0.02)
    life.add_argument("--subdiv-limit", type=int, default=4)
    life.add_argument("--output", required=True)
    life.add_argument("--render", choices=("svg", "text", "json"), default="svg")
    life.add_argument("--render-output", default=None)
    return parser


def _render_path(args) -> Path:
    if args.render_output:
        return Path(args.render_output)
    suffix = ".svg" if args.render == "svg" else ".txt"
    return Path(args.output).with_suffix(suffix)


def _cmd_generate(args) -> int:
    spec = datasets.GeneratorSpec(
        kind=_DATASET_ALIASES[args.dataset],
        count=args.count,
        count2=args.count_v,
        noise=args.noise,
        seed=args.seed,
        gamma=args.gamma,
    )
    cloud = datasets.generate(spec)
    datasets.save_cloud(cloud, args.output)
    log.info("wrote %d points to %s", len(cloud), args.output)
    return 0


def _cmd_barcode(args) -> int:
    cloud = datasets.load_cloud(args.input)
    bound = rips_index_bound(cloud)
    max_edge = args.max_edge if args.max_edge is not None else bound
    if max_edge <= bound + 1e-12:
        F = build_bundle_filtration(cloud, max_edge)
    else:
        # plain persistence past the bundle bound: same flag filtration,
        # no projection maps are attached there
        F = rips_filtration(cloud.distance_matrix(), max_edge, 2)
    bc = barcode(F, args.max_dim)
    Path(args.output).write_text(bc.to_json() + "\n")
    if args.render == "svg":
        _render_path(args).write_text(barcode_svg(bc, max_edge))
    elif args.render == "text":
        _render_path(args).write_text(barcode_text(bc, max_edge))
    log.info("wrote %d bars to %s", len(bc.intervals), args.output)
    return 0


def _cmd_lifebar(args) -> int:
    cloud = datasets.load_cloud(args.input)
    T = triangulate_rp(cloud.m)
    lb = lifebar(cloud, T, resolution=args.resolution, subdiv_limit=args.subdiv_limit)
    Path(args.output).write_text(lb.to_json() + "\n")
    if args.render == "svg":
        _render_path(args).write_text(lifebar_svg(lb))
    elif args.render == "text":
        _render_path(args).write_text(lifebar_text(lb))
    log.info(
        "lifebar %s on [0, %g)",
        "empty" if lb.empty else f"nonzero from ~{lb.t_dagger:g}",
        lb.t_max,
    )
    return 0


def main(argv=None) -> int:
    level = os.environ.get("SWBUNDLE_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "barcode":
            return _cmd_barcode(args)
        return _cmd_lifebar(args)
    except SubdivisionLimitError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SUBDIVISION_LIMIT
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
