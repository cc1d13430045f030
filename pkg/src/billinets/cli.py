"""Command-line interface.

Subcommands: caustics, trajectory, net build, net verify, lattice export,
lattice render, star verify. All take --config PATH (JSON scene document);
see scene.py for the schema. Exit codes: 0 pass, 1 verification failure,
2 configuration error, 3 construction failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import billiards, export
from .drnet import build_net
from .errors import ConfigError, ConstructionError, GeometryError
from .hyperlattice import (MidVertex, enumerate_lattice, extract_maps,
                           star_from_seed, verify_cuboctahedron)
from .projective import canonicalize
from .scene import SceneConfig, parse_config
from .verification import (EXIT_CONFIG, EXIT_CONSTRUCT, EXIT_PASS,
                           EXIT_VERIFY_FAIL, run_verification)


def _load_config(args) -> SceneConfig:
    if not args.config:
        raise ConfigError("--config PATH is required")
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    config = parse_config(text)
    overrides = {}
    if getattr(args, "tol_rank", None) is not None:
        overrides["tol_rank"] = args.tol_rank
    if getattr(args, "tol_cr", None) is not None:
        overrides["tol_cr"] = args.tol_cr
    if overrides:
        config = replace(config, tolerances=replace(config.tolerances, **overrides))
    return config


def _cmd_caustics(args) -> int:
    config = _load_config(args)
    caustics = billiards.line_caustics(config.family(), config.initial_line())
    print("caustic parameters:", ", ".join(format(v, ".12g") for v in caustics.values))
    return EXIT_PASS


def _cmd_trajectory(args) -> int:
    config = _load_config(args)
    family = config.family()
    lam = config.lambdas[0]
    events = billiards.trajectory(family, lam, config.initial_line(), args.steps,
                                  tol_forward=config.tolerances.tol_forward)
    print(f"trajectory within Q_{lam:g}: {len(events)} reflections")
    for k, ev in enumerate(events):
        x = ", ".join(format(c, ".12g") for c in ev.point.affine_coords())
        v = ", ".join(format(c, ".12g") for c in ev.outgoing.direction)
        print(f"  {k:3d}  point ({x})  outgoing ({v})")
    return EXIT_PASS


def _cmd_net_build(args) -> int:
    config = _load_config(args)
    net = build_net(config.family(), config.lambdas, config.initial_line(),
                    config.window, tol_rank=config.tolerances.tol_rank,
                    tol_forward=config.tolerances.tol_forward, seed=args.seed)
    print(f"built net: m={net.m} window={net.window} lines={len(net.lines)}")
    if args.out:
        doc = {
            "schema": "billinets.net/1",
            "m": net.m,
            "window": list(net.window),
            "semi_axes": list(config.semi_axes),
            "lambdas": list(net.lambdas),
            "lines": [
                {"vertex": list(v),
                 "base": [float(c) for c in net.lines[v].base.affine_coords()],
                 "dir": [float(c) for c in net.lines[v].direction]}
                for v in net.vertices()
            ],
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(export._render_json(doc) + "\n")
        print(f"wrote {args.out}")
    return EXIT_PASS


def _cmd_net_verify(args) -> int:
    config = _load_config(args)
    outcome = run_verification(config)
    print(outcome.report, end="")
    return outcome.exit_code


def _cmd_lattice_export(args) -> int:
    config = _load_config(args)
    family = config.family()
    net = build_net(family, config.lambdas, config.initial_line(), config.window,
                    tol_rank=config.tolerances.tol_rank,
                    tol_forward=config.tolerances.tol_forward)
    maps = extract_maps(family, net, verify=False)
    _, cells = enumerate_lattice(config.window, config.m)
    path = args.out or config.json_out
    if not path:
        raise ConfigError("no output path: pass --out or set output.json in the config")
    export.export_lattice(maps, cells, path, tol_rank=config.tolerances.tol_rank,
                          tol_cr=config.tolerances.tol_cr)
    print(f"wrote {path}")
    return EXIT_PASS


def _cmd_lattice_render(args) -> int:
    config = _load_config(args)
    family = config.family()
    net = build_net(family, config.lambdas, config.initial_line(), config.window,
                    tol_rank=config.tolerances.tol_rank,
                    tol_forward=config.tolerances.tol_forward)
    maps = extract_maps(family, net, verify=False)
    _, cells = enumerate_lattice(config.window, config.m)
    path = args.out or config.svg_out
    if not path:
        raise ConfigError("no output path: pass --out or set output.svg in the config")
    export.render_tiling_svg(maps, cells, path, tol_rank=config.tolerances.tol_rank,
                             tol_cr=config.tolerances.tol_cr)
    print(f"wrote {path}")
    return EXIT_PASS


def _cmd_star_verify(args) -> int:
    config = _load_config(args)
    if config.m != 3:
        raise ConfigError("star verify needs an m=3 scene")
    family = config.family()
    net = build_net(family, config.lambdas, config.initial_line(), config.window,
                    tol_rank=config.tolerances.tol_rank,
                    tol_forward=config.tolerances.tol_forward)
    maps = extract_maps(family, net, verify=False)
    _, cells = enumerate_lattice(config.window, config.m)
    cubes = [c for c in cells if c.kind == "rectified_cube"]
    seeds = [maps.H(MidVertex.of_edge((0,) * 3, j)) for j in range(3)]
    rebuilt = star_from_seed(family, config.lambdas, seeds,
                             tol_rank=config.tolerances.tol_rank)
    worst = 0.0
    for v, h in rebuilt.hyperplanes.items():
        a = canonicalize(h.coords)
        b = canonicalize(maps.H(v).coords)
        worst = max(worst, float(np.linalg.norm(a - b)))
    rep = verify_cuboctahedron(maps, cubes[0], tol_rank=config.tolerances.tol_rank,
                               tol_cr=config.tolerances.tol_cr)
    n_tri = sum(1 for r in rep.triangle_collinearity if r < config.tolerances.tol_rank)
    n_sq = sum(1 for r in rep.square_reports if r.pencil < config.tolerances.tol_rank)
    print(f"first cuboctahedron: {n_tri}/8 collinear triplets, {n_sq}/6 pencil quadruplets")
    print(f"seed round-trip: max plane deviation {worst:.3e} over "
          f"{len(rebuilt.hyperplanes)} planes")
    ok = n_tri == 8 and n_sq == 6 and worst < 1e-8
    print("verdict:", "PASS" if ok else "FAIL")
    return EXIT_PASS if ok else EXIT_VERIFY_FAIL


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="billinets",
        description="Billiards in confocal quadrics: nets, honeycomb maps, verification")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=False, steps=False, seed=False):
        p.add_argument("--config", required=True, help="scene JSON document")
        p.add_argument("--tol-rank", type=float, default=None, help="override tol_rank")
        p.add_argument("--tol-cr", type=float, default=None, help="override tol_cr")
        if out:
            p.add_argument("--out", default=None, help="output file path")
        if steps:
            p.add_argument("--steps", type=int, default=10, help="number of reflections")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="seed for sampled consistency checks")

    common(sub.add_parser("caustics", help="caustic parameters of the initial line"))
    common(sub.add_parser("trajectory", help="billiard trajectory of the initial line"),
           steps=True)

    net = sub.add_parser("net", help="double reflection nets").add_subparsers(
        dest="subcommand", required=True)
    common(net.add_parser("build", help="build a net and optionally dump its lines"),
           out=True, seed=True)
    common(net.add_parser("verify", help="build, verify, and summarize a scene"))

    lattice = sub.add_parser("lattice", help="midpoint-lattice maps").add_subparsers(
        dest="subcommand", required=True)
    common(lattice.add_parser("export", help="write the lattice JSON document"), out=True)
    common(lattice.add_parser("render", help="write the m=2 tiling SVG"), out=True)

    star = sub.add_parser("star", help="twelve-plane star configurations").add_subparsers(
        dest="subcommand", required=True)
    common(star.add_parser("verify", help="rebuild the star from seed planes and check it"))
    return parser


_HANDLERS = {
    ("caustics", None): _cmd_caustics,
    ("trajectory", None): _cmd_trajectory,
    ("net", "build"): _cmd_net_build,
    ("net", "verify"): _cmd_net_verify,
    ("lattice", "export"): _cmd_lattice_export,
    ("lattice", "render"): _cmd_lattice_render,
    ("star", "verify"): _cmd_star_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, 0 on --help; keep those codes
        return int(exc.code or 0)
    handler = _HANDLERS[(args.command, getattr(args, "subcommand", None))]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConstructionError as exc:
        print(f"construction error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCT
    except GeometryError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCT


if __name__ == "__main__":
    sys.exit(main())
