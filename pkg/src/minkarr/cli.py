"""Command line interface.

    minkarr verify FILE
    minkarr construct {grid,hexagon7,axes,touching4,spherecode} [-b BODY] [-d D] [--mu MU]
    minkarr bounds -d D --mu MU
    minkarr search -b BODY [-d D] --mu MU [--restarts R] [--iters N]
    minkarr plot FILE OUT.svg
    minkarr report -o DIR

Exit codes: 0 success / valid, 1 verification failure, 2 usage, parse or
dimension error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import geometry as geo
from .arrangement import verify
from .bounds import cardinality_cap, lower_bound_translates, upper_bound
from .constructions import (
    ConstructionError,
    axis_extension,
    four_touching_homothets,
    hexagon_seven,
    parallelotope_grid,
    sphere_code_arrangement,
)
from .io import FormatError, dump_arrangement, dumps, load_arrangement, load_body
from .search import SearchConfig, run_search

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2

GLOBAL_DEFAULTS = {"tol": 1e-9, "seed": 0}

BUILTIN_BODIES = ("square", "disc", "hexagon", "octagon", "cube", "ball")


class UsageError(Exception):
    pass


def resolve_body(name: str | None, d: int | None) -> geo.ConvexBody:
    """A builtin body name or a path to a body JSON file."""
    if name is None:
        raise UsageError("this command needs a body (-b)")
    if name in BUILTIN_BODIES:
        if name == "square":
            return geo.square()
        if name == "disc":
            return geo.disc()
        if name == "hexagon":
            return geo.hexagon()
        if name == "octagon":
            return geo.regular_polygon(8)
        dim = 2 if d is None else d
        return geo.cube(dim) if name == "cube" else geo.ConvexBody.ball(dim)
    if not os.path.exists(name):
        raise UsageError(f"unknown body {name!r}: not a builtin ({', '.join(BUILTIN_BODIES)}) or a file")
    return load_body(name)


def _fmt12(x: float) -> str:
    return format(x, ".12g")


def cmd_verify(args) -> int:
    try:
        arr = load_arrangement(args.input)
    except (OSError, FormatError, geo.BodyError, ValueError) as exc:
        print(dumps({"valid": False, "error": str(exc)}))
        print(f"minkarr verify: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = verify(arr, args.tol)
    print(dumps(report.to_dict()))
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_construct(args) -> int:
    name = args.name
    if name == "grid":
        if args.d is None:
            raise UsageError("construct grid needs -d")
        arr = parallelotope_grid(args.d)
    elif name == "hexagon7":
        arr = hexagon_seven(resolve_body(args.body, args.d))
    elif name == "axes":
        arr = axis_extension(resolve_body(args.body, args.d))
    elif name == "touching4":
        arr = four_touching_homothets(resolve_body(args.body, args.d))
    elif name == "spherecode":
        if args.d is None or args.mu is None:
            raise UsageError("construct spherecode needs -d and --mu")
        arr = sphere_code_arrangement(args.d, args.mu, args.attempts, args.seed)
    else:  # argparse restricts choices
        raise UsageError(f"unknown construction {name!r}")
    if not verify(arr, max(args.tol, 1e-6)).valid:
        print(f"minkarr construct: {name} failed self-verification", file=sys.stderr)
        return EXIT_INVALID
    print(dump_arrangement(arr))
    return EXIT_OK


def cmd_bounds(args) -> int:
    d, mu = args.d, args.mu
    lower = lower_bound_translates(d) if d >= 2 else 3
    print("d\tmu\tupper_bound\tfloor\tlower_bound_2d_plus_3")
    print(f"{d}\t{_fmt12(mu)}\t{_fmt12(upper_bound(d, mu))}\t{cardinality_cap(d, mu)}\t{lower}")
    return EXIT_OK


def cmd_search(args) -> int:
    body = resolve_body(args.body, args.d)
    if args.d is not None and args.d != body.dim:
        raise UsageError(f"-d {args.d} does not match the body dimension {body.dim}")
    config = SearchConfig(seed=args.seed, restarts=args.restarts, iterations=args.iters,
                          step_scale=args.step_scale, tol=args.tol)
    arr, stats = run_search(body, args.mu, config, improve=not args.no_improve)
    print(dump_arrangement(arr, {"stats": stats}))
    return EXIT_OK


def cmd_plot(args) -> int:
    from .plotting import write_svg

    arr = load_arrangement(args.input)
    if arr.body.dim != 2:
        raise UsageError(f"plot needs a planar arrangement, got d={arr.body.dim}")
    write_svg(arr, args.output)
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import write_report

    paths = write_report(args.outdir, attempts=args.attempts, seeds=range(args.seeds))
    for p in paths:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # global flags may appear before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="absolute gauge tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="random seed (default 0)")

    parser = argparse.ArgumentParser(prog="minkarr", parents=[common],
                                     description="Minkowski arrangements of order mu")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="verify an arrangement JSON file")
    p.add_argument("input")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", parents=[common], help="emit a witness arrangement")
    p.add_argument("name", choices=["grid", "hexagon7", "axes", "touching4", "spherecode"])
    p.add_argument("-b", "--body", help=f"builtin ({', '.join(BUILTIN_BODIES)}) or body JSON path")
    p.add_argument("-d", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--attempts", type=int, default=100_000)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("bounds", parents=[common], help="print cardinality bounds")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", parents=[common], help="stochastic search for large arrangements")
    p.add_argument("-b", "--body", required=True)
    p.add_argument("-d", type=int)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--step-scale", type=float, default=0.1)
    p.add_argument("--no-improve", action="store_true", help="greedy insertion only")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("plot", parents=[common], help="render a planar arrangement to SVG")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("report", parents=[common],
                       help="write CSV tables and matplotlib figures of all experiments")
    p.add_argument("-o", "--outdir", default="report")
    p.add_argument("--attempts", type=int, default=200_000)
    p.add_argument("--seeds", type=int, default=5)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # set here rather than via set_defaults, which would rewrite the shared flag actions
    for name, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, value)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"minkarr {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, geo.BodyError, json.JSONDecodeError, OSError) as exc:
        print(f"minkarr {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"minkarr {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionError as exc:
        print(f"minkarr {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
